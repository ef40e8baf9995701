#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "wxda/cycling.hpp"
#include "wxda/qc.hpp"

namespace wxda {

// Run configuration with flat dotted keys; every default mirrors the
// production configuration (R=10, eps=1e-4, dt=6h, N=4, QC thresholds 6/4,
// satellite/surface window [-3,+5), radiosonde window [-3,+3)). Deviations
// from the defaults are echoed into run logs for provenance.
struct RunConfig {
  int grid_n_lat = 720;

  int window_satellite_hours = 8;
  int window_surface_hours = 8;
  int window_radiosonde_hours = 6;
  int window_gnssro_hours = 8;
  int window_start_offset_hours = -3;  // window starts at t0 + offset

  QcConfig qc;

  int dilation_radius = 10;
  double dilation_epsilon = 1e-4;
  bool dilation_symmetric_kernel = false;

  CycleConfig cycle;
  std::string assimilator = "relaxation:0.5";
  std::string forecaster = "advection:damping=0.2,shift=1";

  std::uint64_t seed = 0;
  std::string data_root;  // defaulted from $WXDA_DATA_ROOT
  int threads = 1;

  static RunConfig defaults();
  static RunConfig from_file(const std::filesystem::path& path);

  // One "config <key> = <value>" line per setting that differs from the
  // defaults.
  void echo_deviations(std::ostream& os) const;

  GridSpec grid() const { return GridSpec::global(grid_n_lat); }
};

}  // namespace wxda
