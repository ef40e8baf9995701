#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace wxda {

struct QcConfig {
  double gross_min_k = 50.0;
  double gross_max_k = 350.0;
  double z_threshold_bt = 6.0;
  double z_threshold_other = 4.0;
  double biweight_censor = 7.5;
};

// Physically plausible brightness-temperature range, inclusive bounds.
std::vector<char> gross_check(std::span<const double> values_k,
                              const QcConfig& cfg = {});
bool gross_keep(double value_k, const QcConfig& cfg = {});

struct BiweightStats {
  double center = 0.0;
  double spread = 0.0;
  std::size_t n = 0;
};

// Tukey bi-weight location and scale, one step from the median and MAD with
// censor constant c (u = (x - median) / (c * MAD), terms cut at |u| >= 1).
// MAD == 0 degenerates to (median, 0). Needs n >= 3.
BiweightStats biweight_stats(std::span<const double> sample,
                             double censor = 7.5);

// Low |lat| < 30, middle 30 <= |lat| < 60, high |lat| >= 60; hemispheres
// pooled per band.
enum class LatZone { Low, Middle, High };

LatZone zone_of(double lat);
std::string_view zone_name(LatZone z);

struct ZoneStats {
  LatZone zone = LatZone::Low;
  BiweightStats stats;
  std::size_t kept = 0;
  std::size_t rejected = 0;
  double threshold = 0.0;
  bool small_sample = false;  // < 3 members: zone passed everything
};

struct ScreenResult {
  std::vector<char> keep;
  std::vector<ZoneStats> zones;  // Low, Middle, High
};

// Zoned bi-weight screen for one variable/channel stream: statistics are
// computed per latitude zone and each value is kept iff
// |v - center| <= threshold * spread, with threshold 6 for brightness
// temperature and 4 for everything else.
ScreenResult zoned_screen(std::span<const double> values,
                          std::span<const double> lats,
                          bool brightness_temperature,
                          const QcConfig& cfg = {});

// Structured-text report: one line per zone with counts and the computed
// center/spread.
void write_screen_report(std::ostream& os, const std::string& channel,
                         const ScreenResult& result);

}  // namespace wxda
