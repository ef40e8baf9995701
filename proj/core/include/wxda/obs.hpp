#pragma once

#include <string>
#include <vector>

#include "wxda/grid.hpp"
#include "wxda/time.hpp"

namespace wxda {

enum class PointSource { LandStation, Marine, Radiosonde };

std::string_view point_source_name(PointSource s);

// A single scalar in-situ measurement, already resolved to a canonical
// channel name: a registry key ("T850", "T2m") or one of the extra surface
// keys ("R2m", "SP", "SST") that are assimilated but never loss targets.
struct PointObs {
  double lat = 0.0;
  double lon = 0.0;
  Timestamp time = 0;
  std::string variable;
  double value = 0.0;
  double elevation_m = 0.0;
  bool has_elevation = false;
  PointSource source = PointSource::LandStation;
};

// Canonical ordering for station / marine frames; the supervision encoder
// only uses the four registry surface keys out of these.
const std::vector<std::string>& surface_channel_order();

struct SwathPixel {
  double lat = 0.0;
  double lon = 0.0;
  Timestamp time = 0;
  double zenith_deg = 0.0;
  std::vector<float> brightness_k;
};

struct SwathObs {
  std::string instrument;
  std::string platform;
  int n_channels = 0;
  std::vector<SwathPixel> pixels;
};

enum class ProfileKind { GnssRoRefractivity, RadiosondeProfile };

struct ProfileLevel {
  double coord = 0.0;  // height in meters (RO) or pressure in hPa (sonde)
  double value = 0.0;  // NaN marks a missing layer in resampled profiles
};

struct ProfileObs {
  double lat = 0.0;
  double lon = 0.0;
  Timestamp time = 0;
  ProfileKind kind = ProfileKind::GnssRoRefractivity;
  std::string variable;  // radiosonde profiles only
  std::vector<ProfileLevel> levels;  // strictly monotone in coord
};

// Multiply geopotential height (m) by standard gravity.
inline constexpr double kStandardGravity = 9.80665;
inline double geopotential_from_height(double height_m) {
  return kStandardGravity * height_m;
}

}  // namespace wxda
