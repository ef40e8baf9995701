#include "wxda/operators.hpp"

#include <cstdlib>
#include <sstream>

#include "wxda/errors.hpp"
#include "wxda/numeric.hpp"
#include "wxda/ogf1.hpp"

namespace wxda {

RelaxationAssimilator::RelaxationAssimilator(double gamma) : gamma_(gamma) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw DataError("relaxation gamma must lie in [0, 1]");
  }
}

StateField RelaxationAssimilator::assimilate(const StateField& background,
                                             const ObservationSet& obs) {
  StateField analysis = background;
  analysis.set_kind(FieldKind::Analysis);
  for (const GriddedObsTensor& source : obs.sources) {
    if (source.n_channels() != background.n_channels() ||
        !(source.grid() == background.grid())) {
      continue;  // not a registry-shaped source; nothing to nudge with
    }
    // Uses the final window frame when the source is time-stacked.
    const std::size_t frame_off =
        static_cast<std::size_t>(source.n_time() - 1) * source.frame_size();
    for (std::size_t k = 0; k < source.frame_size(); ++k) {
      if (source.mask[frame_off + k] == 0.0f) continue;
      double& x = analysis.data()[k];
      x += gamma_ * (static_cast<double>(source.values[frame_off + k]) - x);
    }
  }
  return analysis;
}

std::string RelaxationAssimilator::name() const {
  std::ostringstream os;
  os << "relaxation:" << gamma_;
  return os.str();
}

AdvectionForecaster::AdvectionForecaster(double damping, int shift_cells,
                                         int dt_hours)
    : damping_(damping), shift_(shift_cells), dt_hours_(dt_hours) {
  if (damping < 0.0 || damping > 1.0) {
    throw DataError("damping must lie in [0, 1]");
  }
}

StateField AdvectionForecaster::forecast(const StateField& prev,
                                         const StateField& cur) {
  if (!prev.same_layout(cur)) {
    throw ContractViolation("forecast inputs disagree on layout");
  }
  StateField out(cur.grid(), cur.registry(),
                 cur.valid_time() + static_cast<Timestamp>(dt_hours_) *
                                        kSecondsPerHour,
                 FieldKind::Background);
  const int H = cur.grid().n_lat;
  const int W = cur.grid().n_lon;
  int shift = shift_ % W;
  if (shift < 0) shift += W;

  for (int c = 0; c < cur.n_channels(); ++c) {
    const auto src = cur.channel(c);
    auto dst = out.channel(c);
    if (damping_ == 0.0) {
      // Pure shift: a permutation, copied exactly.
      for (int i = 0; i < H; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * W;
        for (int j = 0; j < W; ++j) {
          const int j_src = j >= shift ? j - shift : j - shift + W;
          dst[row + j] = src[row + j_src];
        }
      }
      continue;
    }
    CompensatedSum mean_acc;
    for (double v : src) mean_acc.add(v);
    const double mean = mean_acc.value() / static_cast<double>(src.size());
    for (int i = 0; i < H; ++i) {
      const std::size_t row = static_cast<std::size_t>(i) * W;
      for (int j = 0; j < W; ++j) {
        const int j_src = j >= shift ? j - shift : j - shift + W;
        dst[row + j] = mean + (1.0 - damping_) * (src[row + j_src] - mean);
      }
    }
  }
  return out;
}

std::string AdvectionForecaster::name() const {
  std::ostringstream os;
  os << "advection:damping=" << damping_ << ",shift=" << shift_;
  return os.str();
}

namespace {

std::string substitute(std::string templ, const std::string& key,
                       const std::string& value) {
  const std::string needle = "{" + key + "}";
  std::size_t pos;
  while ((pos = templ.find(needle)) != std::string::npos) {
    templ.replace(pos, needle.size(), value);
  }
  return templ;
}

void run_command(const std::string& command, const char* what) {
  const int rc = std::system(command.c_str());
  if (rc != 0) {
    throw ContractViolation(std::string(what) + " subprocess failed (exit " +
                            std::to_string(rc) + "): " + command);
  }
}

}  // namespace

SubprocessAssimilator::SubprocessAssimilator(std::string command_template,
                                             std::filesystem::path scratch_dir)
    : command_(std::move(command_template)), scratch_(std::move(scratch_dir)) {
  std::filesystem::create_directories(scratch_);
}

StateField SubprocessAssimilator::assimilate(const StateField& background,
                                             const ObservationSet& obs) {
  const std::string tag = "assim_" + std::to_string(call_count_++);
  const auto bg_path = scratch_ / (tag + "_background.ogf1");
  const auto obs_dir = scratch_ / (tag + "_obs");
  const auto out_path = scratch_ / (tag + "_analysis.ogf1");
  write_state(bg_path, background);
  std::filesystem::create_directories(obs_dir);
  for (std::size_t k = 0; k < obs.sources.size(); ++k) {
    write_tensor(obs_dir / ("source" + std::to_string(k)), obs.sources[k]);
  }
  std::string cmd = substitute(command_, "background", bg_path.string());
  cmd = substitute(cmd, "obs_dir", obs_dir.string());
  cmd = substitute(cmd, "output", out_path.string());
  run_command(cmd, "assimilation");
  return read_state(out_path);
}

std::string SubprocessAssimilator::name() const { return "exec:" + command_; }

SubprocessForecaster::SubprocessForecaster(std::string command_template,
                                           std::filesystem::path scratch_dir,
                                           int dt_hours)
    : command_(std::move(command_template)),
      scratch_(std::move(scratch_dir)),
      dt_hours_(dt_hours) {
  std::filesystem::create_directories(scratch_);
}

StateField SubprocessForecaster::forecast(const StateField& prev,
                                          const StateField& cur) {
  const std::string tag = "fcst_" + std::to_string(call_count_++);
  const auto prev_path = scratch_ / (tag + "_prev.ogf1");
  const auto cur_path = scratch_ / (tag + "_cur.ogf1");
  const auto out_path = scratch_ / (tag + "_next.ogf1");
  write_state(prev_path, prev);
  write_state(cur_path, cur);
  std::string cmd = substitute(command_, "prev", prev_path.string());
  cmd = substitute(cmd, "cur", cur_path.string());
  cmd = substitute(cmd, "output", out_path.string());
  run_command(cmd, "forecast");
  return read_state(out_path);
}

std::string SubprocessForecaster::name() const { return "exec:" + command_; }

std::unique_ptr<AssimilationOperator> make_assimilator(
    const std::string& spec, const std::filesystem::path& scratch_dir) {
  if (spec == "identity") {
    return std::make_unique<RelaxationAssimilator>(0.0);
  }
  if (spec.rfind("relaxation:", 0) == 0) {
    return std::make_unique<RelaxationAssimilator>(
        std::stod(spec.substr(11)));
  }
  if (spec.rfind("exec:", 0) == 0) {
    return std::make_unique<SubprocessAssimilator>(spec.substr(5),
                                                   scratch_dir);
  }
  throw DataError("unknown assimilator spec '" + spec + "'");
}

std::unique_ptr<ForecastOperator> make_forecaster(
    const std::string& spec, int dt_hours,
    const std::filesystem::path& scratch_dir) {
  if (spec == "persistence") {
    return std::make_unique<AdvectionForecaster>(0.0, 0, dt_hours);
  }
  if (spec.rfind("advection:", 0) == 0) {
    double damping = 0.0;
    int shift = 0;
    std::istringstream is(spec.substr(10));
    std::string item;
    while (std::getline(is, item, ',')) {
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos) {
        throw DataError("bad forecaster option '" + item + "'");
      }
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      if (key == "damping") damping = std::stod(value);
      else if (key == "shift") shift = std::stoi(value);
      else throw DataError("unknown forecaster option '" + key + "'");
    }
    return std::make_unique<AdvectionForecaster>(damping, shift, dt_hours);
  }
  if (spec.rfind("exec:", 0) == 0) {
    return std::make_unique<SubprocessForecaster>(spec.substr(5), scratch_dir,
                                                  dt_hours);
  }
  throw DataError("unknown forecaster spec '" + spec + "'");
}

}  // namespace wxda
