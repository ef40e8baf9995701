#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wxda/grid.hpp"
#include "wxda/obs.hpp"

namespace wxda {

enum class ScoreKind { Rmse, Mbe, Std };

struct DepartureScores {
  double rmse = 0.0;
  double mbe = 0.0;
  double std_dev = 0.0;
  std::size_t n = 0;

  double get(ScoreKind k) const {
    switch (k) {
      case ScoreKind::Rmse: return rmse;
      case ScoreKind::Mbe: return mbe;
      default: return std_dev;
    }
  }
};

// Departures H(x) - y against in-situ observations, H being nearest-neighbor
// interpolation onto the station location; only records whose variable is a
// registry key are matched. NoDataError when nothing matches.
DepartureScores score_insitu_all(const StateField& field,
                                 std::span<const PointObs> obs);
double score_insitu(const StateField& field, std::span<const PointObs> obs,
                    ScoreKind kind);

// GNSS-RO scoring on relative departures (H(x) - y) / H(x), where H converts
// the state column to refractivity per level and matches vertically only
// where the geopotential difference is strictly below max_geopotential_diff
// (m^2/s^2). level_filter restricts matching to one registry pressure level.
struct GnssMatchOptions {
  double max_geopotential_diff = 1000.0;
  std::optional<int> level_filter;
};

DepartureScores score_gnss_all(const StateField& field,
                               std::span<const ProfileObs> profiles,
                               const GnssMatchOptions& options = {});
double score_gnss(const StateField& field, std::span<const ProfileObs> profiles,
                  ScoreKind kind, const GnssMatchOptions& options = {});

// Latitude-weighted RMSE per channel.
std::vector<double> wrmse(const StateField& forecast, const StateField& truth,
                          const LatWeights& w);

// Anomaly correlation coefficient per channel; empty optional marks the
// undefined case (zero anomaly variance), never a silent zero.
std::vector<std::optional<double>> acc(const StateField& forecast,
                                       const StateField& truth,
                                       const StateField& climatology,
                                       const LatWeights& w);

std::optional<double> normalized_diff(double score_a, double score_b);

struct ScoreSeries {
  std::vector<Timestamp> times;
  std::vector<double> scores;
};

struct TTestResult {
  double t = 0.0;
  double mean_diff = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
};

// Paired t-test on per-time normalized differences (a - b) / b. Pairs with
// zero or non-finite b are dropped; needs two finite pairs. Zero-variance
// differences give t = +/-inf (0 when the mean is also 0) and a degenerate
// interval. No autocorrelation correction is applied by default; lag-1
// inflation divides the effective sample size by (1+r1)/(1-r1).
TTestResult paired_t_test(const ScoreSeries& a, const ScoreSeries& b,
                          double confidence = 0.95,
                          bool lag1_correction = false);

// Latitude-weighted standard deviation of (forecast - climatology) for one
// channel, divided by reference_activity.
double weighted_anomaly_std(const StateField& forecast,
                            const StateField& climatology, int channel,
                            const LatWeights& w);
double forecast_activity(const StateField& forecast,
                         const StateField& climatology,
                         double reference_activity, const LatWeights& w,
                         int channel = 0);

// Largest lead with score >= threshold; 0 when the series never reaches it.
// With interpolation on, the crossing point between the last lead at or
// above the threshold and the next lead below it is returned instead.
double effective_lead_time(std::span<const double> lead_days,
                           std::span<const double> scores,
                           double threshold = 0.6, bool interpolate = false);

struct TCTrack {
  struct Point {
    Timestamp time = 0;
    double lat = 0.0;
    double lon = 0.0;
  };
  std::string storm_id;
  std::vector<Point> points;  // strictly increasing times

  std::optional<Point> at_time(Timestamp t) const;
};

// Great-circle position error (km) between the two tracks at
// forecast-start + lead_hours. NoDataError when either track lacks that
// valid time.
double track_error(const TCTrack& forecast, const TCTrack& best,
                   double lead_hours);

// Delimiter-separated track records: storm_id <TAB> iso-time <TAB> lat <TAB> lon.
std::vector<TCTrack> read_tracks(const std::filesystem::path& path);
void write_tracks(const std::filesystem::path& path,
                  std::span<const TCTrack> tracks);

}  // namespace wxda
