#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "wxda/grid.hpp"
#include "wxda/obs.hpp"
#include "wxda/time.hpp"

namespace wxda {

// Atmospheric refractivity in N-units from pressure (hPa), temperature (K)
// and water vapor pressure (hPa):
//
//   N = 77.6 * P / T + 3.73e5 * e / T^2
//
// Throws DomainError for T <= 0 or negative P/e.
double refractivity(double p_hpa, double t_k, double e_hpa);

// Magnus saturation vapor pressure over water, hPa. Coefficients 6.112,
// 17.62, 243.12 (WMO form); used wherever a humidity conversion is needed,
// since states carry relative humidity rather than vapor pressure.
double saturation_vapor_pressure_hpa(double t_k);

// e from relative humidity in percent.
double vapor_pressure_hpa(double rh_percent, double t_k);

// Relative humidity (percent) from specific humidity q (kg/kg) at p, T.
double relative_humidity_percent(double q, double p_hpa, double t_k);

struct AtmosColumn {
  struct Level {
    double pressure_hpa = 0.0;
    double temperature_k = 0.0;
    double vapor_pressure_hpa = 0.0;
    double geopotential = 0.0;  // m^2/s^2
  };
  std::vector<Level> levels;
};

// Vertical resampling onto n_layers uniform geometric-height layers between
// 0 and top_m (layer centers at (k + 0.5) * top_m / n_layers). Linear
// interpolation inside the observed span; layers outside it hold NaN.
ProfileObs resample_profile(const ProfileObs& profile, int n_layers = 512,
                            double top_m = 50000.0);

// 24-hour lookup table of occultation locations harvested from a template
// year, used to replicate realistic observation geometry.
class ROGeometryTable {
 public:
  void add(int hour, double lat, double lon);
  const std::vector<std::pair<double, double>>& bucket(int hour) const;
  bool all_buckets_populated() const;

  struct Sample {
    std::vector<std::pair<double, double>> locations;
    bool with_replacement = false;
  };

  // `count` draws from bucket(hour), uniform without replacement; falls back
  // to sampling with replacement (flagged) when the bucket is smaller than
  // the request. Deterministic under the seed.
  Sample sample(int hour, std::size_t count, std::uint64_t seed) const;

  // Line format: "<hour> <lat> <lon>".
  static ROGeometryTable read(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<double, double>> buckets_[24];
};

// Column of the 13 registry pressure levels at the grid cell nearest
// (lat, lon), with e derived from the R channels.
AtmosColumn column_at(const StateField& field, double lat, double lon);

// Refractivity profile implied by a state column, on a geometric-height
// coordinate (geopotential / g), ordered bottom-up.
ProfileObs simulate_ro_profile(const StateField& field, double lat, double lon,
                               Timestamp obs_time);

}  // namespace wxda
