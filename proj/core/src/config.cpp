#include "wxda/config.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wxda/errors.hpp"

namespace wxda {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  if (const char* root = std::getenv("WXDA_DATA_ROOT")) {
    cfg.data_root = root;
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open config " + path.string());
  RunConfig cfg = defaults();
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "grid.n_lat") cfg.grid_n_lat = std::stoi(value);
      else if (key == "window.satellite_hours")
        cfg.window_satellite_hours = std::stoi(value);
      else if (key == "window.surface_hours")
        cfg.window_surface_hours = std::stoi(value);
      else if (key == "window.radiosonde_hours")
        cfg.window_radiosonde_hours = std::stoi(value);
      else if (key == "window.gnssro_hours")
        cfg.window_gnssro_hours = std::stoi(value);
      else if (key == "window.start_offset_hours")
        cfg.window_start_offset_hours = std::stoi(value);
      else if (key == "qc.gross_min_k") cfg.qc.gross_min_k = std::stod(value);
      else if (key == "qc.gross_max_k") cfg.qc.gross_max_k = std::stod(value);
      else if (key == "qc.z_threshold_bt")
        cfg.qc.z_threshold_bt = std::stod(value);
      else if (key == "qc.z_threshold_other")
        cfg.qc.z_threshold_other = std::stod(value);
      else if (key == "qc.biweight_censor")
        cfg.qc.biweight_censor = std::stod(value);
      else if (key == "dilation.radius")
        cfg.dilation_radius = std::stoi(value);
      else if (key == "dilation.epsilon")
        cfg.dilation_epsilon = std::stod(value);
      else if (key == "dilation.symmetric_kernel")
        cfg.dilation_symmetric_kernel = value == "true" || value == "1";
      else if (key == "cycle.dt_hours") cfg.cycle.dt_hours = std::stoi(value);
      else if (key == "cycle.unroll_steps")
        cfg.cycle.unroll_steps = std::stoi(value);
      else if (key == "cycle.spin_up_days")
        cfg.cycle.spin_up_days = std::stoi(value);
      else if (key == "cycle.forecast_steps")
        cfg.cycle.forecast_steps = std::stoi(value);
      else if (key == "cycle.warm_start_min_lead")
        cfg.cycle.warm_start_min_lead = std::stoi(value);
      else if (key == "cycle.warm_start_max_lead")
        cfg.cycle.warm_start_max_lead = std::stoi(value);
      else if (key == "cycle.assimilator") cfg.assimilator = value;
      else if (key == "cycle.forecaster") cfg.forecaster = value;
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "data_root") cfg.data_root = value;
      else if (key == "threads") cfg.threads = std::stoi(value);
      else
        throw ParseError("unknown key");
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " +
                       key + ": " + e.what());
    }
  }
  return cfg;
}

void RunConfig::echo_deviations(std::ostream& os) const {
  const RunConfig d;
  const auto echo = [&](const char* key, const auto& value, const auto& def) {
    if (value != def) os << "config " << key << " = " << value << "\n";
  };
  echo("grid.n_lat", grid_n_lat, d.grid_n_lat);
  echo("window.satellite_hours", window_satellite_hours,
       d.window_satellite_hours);
  echo("window.surface_hours", window_surface_hours, d.window_surface_hours);
  echo("window.radiosonde_hours", window_radiosonde_hours,
       d.window_radiosonde_hours);
  echo("window.gnssro_hours", window_gnssro_hours, d.window_gnssro_hours);
  echo("window.start_offset_hours", window_start_offset_hours,
       d.window_start_offset_hours);
  echo("qc.gross_min_k", qc.gross_min_k, d.qc.gross_min_k);
  echo("qc.gross_max_k", qc.gross_max_k, d.qc.gross_max_k);
  echo("qc.z_threshold_bt", qc.z_threshold_bt, d.qc.z_threshold_bt);
  echo("qc.z_threshold_other", qc.z_threshold_other, d.qc.z_threshold_other);
  echo("qc.biweight_censor", qc.biweight_censor, d.qc.biweight_censor);
  echo("dilation.radius", dilation_radius, d.dilation_radius);
  echo("dilation.epsilon", dilation_epsilon, d.dilation_epsilon);
  echo("dilation.symmetric_kernel", dilation_symmetric_kernel,
       d.dilation_symmetric_kernel);
  echo("cycle.dt_hours", cycle.dt_hours, d.cycle.dt_hours);
  echo("cycle.unroll_steps", cycle.unroll_steps, d.cycle.unroll_steps);
  echo("cycle.spin_up_days", cycle.spin_up_days, d.cycle.spin_up_days);
  echo("cycle.forecast_steps", cycle.forecast_steps, d.cycle.forecast_steps);
  echo("cycle.warm_start_min_lead", cycle.warm_start_min_lead,
       d.cycle.warm_start_min_lead);
  echo("cycle.warm_start_max_lead", cycle.warm_start_max_lead,
       d.cycle.warm_start_max_lead);
  echo("cycle.assimilator", assimilator, d.assimilator);
  echo("cycle.forecaster", forecaster, d.forecaster);
  echo("seed", seed, d.seed);
  echo("threads", threads, d.threads);
}

}  // namespace wxda
