#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tool_util.hpp"
#include "wxda/cycling.hpp"
#include "wxda/errors.hpp"
#include "wxda/losses.hpp"
#include "wxda/ogf1.hpp"
#include "wxda/operators.hpp"

namespace wxda::tool {

namespace {

struct CycleOpts {
  std::string config;
  std::string assimilator;
  std::string forecaster;
  std::string init_prev;
  std::string init_analysis;
  std::string init_background;
  bool cold_start = false;
  std::string warm_start_dir;
  std::string t0;
  int grid_n_lat_override = 0;
  std::string obs_dir;
  std::string truth_dir;
  std::string out_dir;
  int steps = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

std::filesystem::path obs_base(const std::filesystem::path& dir,
                               Timestamp t) {
  return dir / ("obs_" + time_tag(t) + ".ogf1");
}

int run_cycle_cmd(const CycleOpts& o) {
  RunConfig cfg = load_config(o.config);
  if (!o.assimilator.empty()) cfg.assimilator = o.assimilator;
  if (!o.forecaster.empty()) cfg.forecaster = o.forecaster;
  if (o.grid_n_lat_override > 0) cfg.grid_n_lat = o.grid_n_lat_override;
  if (o.seed_set) cfg.seed = o.seed;

  const std::filesystem::path out_dir(o.out_dir);
  std::filesystem::create_directories(out_dir);
  const int steps = o.steps > 0 ? o.steps : cfg.cycle.forecast_steps;
  const Timestamp dt =
      static_cast<Timestamp>(cfg.cycle.dt_hours) * kSecondsPerHour;

  auto assim = make_assimilator(cfg.assimilator, out_dir / "scratch");
  auto fcst =
      make_forecaster(cfg.forecaster, cfg.cycle.dt_hours, out_dir / "scratch");

  const std::string obs_dir = resolve_dir(o.obs_dir, cfg);
  const std::string truth_dir = resolve_dir(o.truth_dir, cfg);

  CycleState init = [&]() -> CycleState {
    if (!o.warm_start_dir.empty()) {
      if (o.t0.empty()) throw DataError("--warm-start-dir needs --t0");
      const Timestamp t0 = parse_time_arg(o.t0);
      const OfflineForecastStore store = OfflineForecastStore::load_dir(
          resolve_dir(o.warm_start_dir, cfg), cfg.cycle.dt_hours);
      StateField prev = store.warm_start_sample(
          t0 - dt, cfg.seed ^ 1, cfg.cycle.warm_start_min_lead,
          cfg.cycle.warm_start_max_lead);
      StateField cur = store.warm_start_sample(
          t0, cfg.seed, cfg.cycle.warm_start_min_lead,
          cfg.cycle.warm_start_max_lead);
      prev.set_kind(FieldKind::Analysis);
      cur.set_kind(FieldKind::Analysis);
      StateField bg = fcst->forecast(prev, cur);
      bg.set_kind(FieldKind::Background);
      return CycleState{std::move(prev), std::move(cur), std::move(bg)};
    }
    if (o.cold_start) {
      if (o.t0.empty()) throw DataError("--cold-start needs --t0");
      const Timestamp t0 = parse_time_arg(o.t0);
      const ChannelRegistry reg = ChannelRegistry::make(false);
      const GridSpec grid = cfg.grid();
      // Uninformative zero-valued initial state.
      StateField prev(grid, reg, t0 - dt, FieldKind::Analysis);
      StateField cur(grid, reg, t0, FieldKind::Analysis);
      StateField bg(grid, reg, t0 + dt, FieldKind::Background);
      return CycleState{std::move(prev), std::move(cur), std::move(bg)};
    }
    if (o.init_prev.empty() || o.init_analysis.empty() ||
        o.init_background.empty()) {
      throw DataError("cycle needs --cold-start or all three --init-* files");
    }
    return CycleState{read_state(o.init_prev), read_state(o.init_analysis),
                      read_state(o.init_background)};
  }();

  const ObsStream stream = [&](Timestamp t) {
    ObservationSet set;
    const auto base = obs_base(obs_dir, t);
    if (!obs_dir.empty() && std::filesystem::exists(base)) {
      set.sources.push_back(read_tensor(base));
    }
    return set;
  };

  const LatWeights w = latitude_weights(init.analysis.grid());
  const ObsLossWeights lambda =
      default_obs_weights(ChannelRegistry::make(false));
  const bool losses_apply =
      init.analysis.registry() == ChannelRegistry::make(false);

  std::ofstream log(out_dir / "cycle_log.tsv");
  log.precision(12);
  cfg.echo_deviations(log);
  log << "step\ttime\tanalysis_state_loss\tanalysis_obs_loss\twall_ms\n";

  run_cycle_streaming(
      *assim, *fcst, std::move(init), stream, steps,
      [&](int step, const CycleStep& s) {
        const auto t_start = std::chrono::steady_clock::now();
        const Timestamp t = s.analysis.valid_time();
        write_state(out_dir / ("analysis_" + time_tag(t) + ".ogf1"),
                    s.analysis);
        write_state(out_dir / ("background_" +
                               time_tag(s.background.valid_time()) + ".ogf1"),
                    s.background);

        const auto fmt_num = [](double v) {
          std::ostringstream os;
          os.precision(12);
          os << v;
          return os.str();
        };
        std::string state_l = "NA", obs_l = "NA";
        if (losses_apply && !truth_dir.empty()) {
          const auto truth_path =
              std::filesystem::path(truth_dir) /
              ("truth_" + time_tag(t) + ".ogf1");
          if (std::filesystem::exists(truth_path)) {
            state_l =
                fmt_num(state_loss(s.analysis, read_state(truth_path), w));
          }
        }
        if (losses_apply && !obs_dir.empty()) {
          const auto base = obs_base(obs_dir, t);
          if (std::filesystem::exists(base)) {
            const GriddedObsTensor y = read_tensor(base);
            if (y.n_time() == 1 &&
                y.n_channels() == s.analysis.n_channels() &&
                y.grid() == s.analysis.grid()) {
              obs_l = fmt_num(obs_loss(s.analysis, y, lambda, w));
            }
          }
        }
        const double wall_ms =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - t_start)
                .count();
        log << step << "\t" << format_iso8601(t) << "\t" << state_l << "\t"
            << obs_l << "\t" << wall_ms << "\n";
      });

  std::cout << "cycle: " << steps << " steps -> " << o.out_dir << "\n";
  return 0;
}

struct ForecastOpts {
  std::string config;
  std::string forecaster;
  std::string prev;
  std::string cur;
  int steps = 40;
  std::string out_dir;
};

int run_forecast_cmd(const ForecastOpts& o) {
  RunConfig cfg = load_config(o.config);
  if (!o.forecaster.empty()) cfg.forecaster = o.forecaster;
  const std::filesystem::path out_dir(o.out_dir);
  std::filesystem::create_directories(out_dir);
  auto fcst =
      make_forecaster(cfg.forecaster, cfg.cycle.dt_hours, out_dir / "scratch");
  const StateField prev = read_state(o.prev);
  const StateField cur = read_state(o.cur);
  const auto trajectory = autoregressive_forecast(*fcst, prev, cur, o.steps);
  for (const StateField& s : trajectory) {
    write_state(out_dir / ("forecast_" + time_tag(s.valid_time()) + ".ogf1"),
                s);
  }
  std::cout << "forecast: " << trajectory.size() << " steps -> " << o.out_dir
            << "\n";
  return 0;
}

}  // namespace

void add_cycle_commands(CLI::App& app) {
  {
    auto o = std::make_shared<CycleOpts>();
    auto* cmd = app.add_subcommand(
        "cycle", "Run the assimilation-forecast cycling engine");
    cmd->add_option("--config", o->config, "Run configuration file");
    cmd->add_option("--assimilator", o->assimilator,
                    "relaxation:<g> | identity | exec:<command>");
    cmd->add_option("--forecaster", o->forecaster,
                    "advection:damping=<d>,shift=<n> | persistence | "
                    "exec:<command>");
    cmd->add_option("--init-prev", o->init_prev, "Analysis at t0 - dt (OGF1)");
    cmd->add_option("--init-analysis", o->init_analysis,
                    "Analysis at t0 (OGF1)");
    cmd->add_option("--init-background", o->init_background,
                    "Background at t0 + dt (OGF1)");
    cmd->add_flag("--cold-start", o->cold_start,
                  "Start from zero-valued fields");
    cmd->add_option("--warm-start-dir", o->warm_start_dir,
                    "Sample the initial state pair from this forecast store");
    cmd->add_option("--t0", o->t0, "Cold-start base time (ISO-8601)");
    cmd->add_option("--grid", o->grid_n_lat_override,
                    "Cold-start grid latitude rows");
    cmd->add_option("--obs-dir", o->obs_dir,
                    "Directory of obs_<tag>.ogf1 tensors per cycle time");
    cmd->add_option("--truth-dir", o->truth_dir,
                    "Directory of truth_<tag>.ogf1 states for diagnostics");
    cmd->add_option("--out", o->out_dir, "Trajectory output directory")
        ->required();
    cmd->add_option("--steps", o->steps, "Cycle steps");
    cmd->add_option("--seed", o->seed, "Warm-start sampling seed")
        ->each([o](const std::string&) { o->seed_set = true; });
    cmd->callback([o]() { std::exit(run_cycle_cmd(*o)); });
  }
  {
    auto o = std::make_shared<ForecastOpts>();
    auto* cmd = app.add_subcommand(
        "forecast", "Autoregressive forecast from two consecutive analyses");
    cmd->add_option("--config", o->config, "Run configuration file");
    cmd->add_option("--forecaster", o->forecaster, "Forecaster spec");
    cmd->add_option("--prev", o->prev, "Analysis at t - dt (OGF1)")
        ->required();
    cmd->add_option("--cur", o->cur, "Analysis at t (OGF1)")->required();
    cmd->add_option("--steps", o->steps, "Autoregressive steps");
    cmd->add_option("--out", o->out_dir, "Output directory")->required();
    cmd->callback([o]() { std::exit(run_forecast_cmd(*o)); });
  }
}

}  // namespace wxda::tool
