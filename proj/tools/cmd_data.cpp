#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "tool_util.hpp"
#include "wxda/channel_select.hpp"
#include "wxda/dilation.hpp"
#include "wxda/encode.hpp"
#include "wxda/errors.hpp"
#include "wxda/forward.hpp"
#include "wxda/numeric.hpp"
#include "wxda/ogf1.hpp"
#include "wxda/operators.hpp"
#include "wxda/qc.hpp"
#include "wxda/rng.hpp"

namespace wxda::tool {

namespace {

// ---------------------------------------------------------------- ingest --

struct IngestOpts {
  std::vector<std::string> inputs;
  std::string output;
};

int run_ingest(const IngestOpts& o) {
  ParseReport report;
  const ObsBatch batch = read_obs_files(o.inputs, report);
  write_obs_file(o.output, batch);
  std::cout << "ingest: " << report.records_ok << " records -> " << o.output
            << " (" << batch.points.size() << " points, "
            << batch.swaths.size() << " swath groups, "
            << batch.profiles.size() << " profiles)\n";
  return report_parse_errors(report) ? 0 : 1;
}

// ---------------------------------------------------------------- encode --

struct EncodeOpts {
  std::string config;
  std::vector<std::string> inputs;
  std::string kind;  // surface | radiosonde | supervision | swath | gnssro
  std::string t0;
  std::string out_base;
  std::string stats;
  std::string report_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int window_hours = 0;
};

std::vector<PointObs> points_in_hour(const std::vector<PointObs>& points,
                                     Timestamp start) {
  std::vector<PointObs> out;
  for (const auto& p : points) {
    if (p.time >= start && p.time < start + kSecondsPerHour) {
      out.push_back(p);
    }
  }
  return out;
}

GriddedObsTensor encode_point_stack(const std::vector<PointObs>& points,
                                    const std::vector<std::string>& channels,
                                    const GridSpec& grid, Timestamp window_start,
                                    int window_hours,
                                    ProjectionReport& report) {
  std::vector<SparseFrame> frames;
  for (int h = 0; h < window_hours; ++h) {
    const Timestamp start = window_start + h * kSecondsPerHour;
    frames.push_back(project_points(points_in_hour(points, start), channels,
                                    grid, start, &report));
  }
  return stack_temporal(frames, window_hours);
}

GriddedObsTensor encode_instrument(const std::vector<const SwathObs*>& swaths,
                                   const GridSpec& grid, Timestamp window_start,
                                   int window_hours, std::uint64_t seed,
                                   ProjectionReport& report) {
  const int n_platforms = static_cast<int>(swaths.size());
  std::vector<SparseFrame> hourly;
  for (int h = 0; h < window_hours; ++h) {
    const Timestamp start = window_start + h * kSecondsPerHour;
    std::vector<SparseFrame> per_platform;
    for (int p = 0; p < n_platforms; ++p) {
      SwathObs hour_slice;
      hour_slice.instrument = swaths[p]->instrument;
      hour_slice.platform = swaths[p]->platform;
      hour_slice.n_channels = swaths[p]->n_channels;
      for (const auto& px : swaths[p]->pixels) {
        if (px.time >= start && px.time < start + kSecondsPerHour) {
          hour_slice.pixels.push_back(px);
        }
      }
      SwathFrame f = project_swath(hour_slice, grid, start, &report);
      per_platform.push_back(
          append_platform_metadata(f.frame, f.zenith, p, n_platforms));
    }
    hourly.push_back(resolve_overlaps(per_platform, mix_seed(seed, h)));
  }
  return stack_temporal(hourly, window_hours);
}

int run_encode(const EncodeOpts& o) {
  RunConfig cfg = load_config(o.config);
  if (o.seed_set) cfg.seed = o.seed;
  if (o.window_hours > 0) {
    cfg.window_satellite_hours = o.window_hours;
    cfg.window_surface_hours = o.window_hours;
    cfg.window_radiosonde_hours = o.window_hours;
    cfg.window_gnssro_hours = o.window_hours;
  }
  cfg.echo_deviations(std::cout);
  const GridSpec grid = cfg.grid();
  const Timestamp t0 = parse_time_arg(o.t0);
  const Timestamp window_start =
      t0 + cfg.window_start_offset_hours * kSecondsPerHour;

  ParseReport parse_report;
  const ObsBatch batch = read_obs_files(o.inputs, parse_report);
  if (batch.empty()) {
    std::cerr << "warning: no observations parsed; writing empty tensors\n";
  }

  ProjectionReport proj;
  std::vector<std::pair<std::string, GriddedObsTensor>> outputs;

  if (o.kind == "surface") {
    std::vector<PointObs> surface;
    for (const auto& p : batch.points) {
      if (p.source != PointSource::Radiosonde) surface.push_back(p);
    }
    outputs.emplace_back(
        "", encode_point_stack(surface, surface_channel_order(), grid,
                               window_start, cfg.window_surface_hours, proj));
  } else if (o.kind == "radiosonde") {
    std::vector<PointObs> sondes;
    for (const auto& p : batch.points) {
      if (p.source == PointSource::Radiosonde) sondes.push_back(p);
    }
    const ChannelRegistry reg = ChannelRegistry::make(false);
    std::vector<std::string> upper;
    for (int c = 0; c < reg.size(); ++c) {
      if (!is_surface(reg.at(c).var)) upper.push_back(reg.at(c).describe());
    }
    outputs.emplace_back(
        "", encode_point_stack(sondes, upper, grid, window_start,
                               cfg.window_radiosonde_hours, proj));
  } else if (o.kind == "supervision") {
    // Single frame at the analysis hour on the 69 loss-target channels.
    const ChannelRegistry reg = ChannelRegistry::make(false);
    SparseFrame frame = project_points(points_in_hour(batch.points, t0),
                                       reg.names(), grid, t0, &proj);
    const SparseFrame frames[] = {frame};
    outputs.emplace_back("", stack_temporal(frames, 1));
  } else if (o.kind == "swath") {
    std::map<std::string, std::vector<const SwathObs*>> by_instrument;
    for (const auto& s : batch.swaths) {
      by_instrument[s.instrument].push_back(&s);
    }
    for (auto& [instrument, group] : by_instrument) {
      std::sort(group.begin(), group.end(),
                [](const SwathObs* a, const SwathObs* b) {
                  return a->platform < b->platform;
                });
      outputs.emplace_back(
          "_" + instrument,
          encode_instrument(group, grid, window_start,
                            cfg.window_satellite_hours, cfg.seed, proj));
    }
  } else if (o.kind == "gnssro") {
    std::vector<ProfileObs> ro;
    for (const auto& p : batch.profiles) {
      if (p.kind == ProfileKind::GnssRoRefractivity) ro.push_back(p);
    }
    outputs.emplace_back(
        "", encode_time_embedding(ro, window_start, cfg.window_gnssro_hours,
                                  grid));
  } else {
    throw DataError("unknown encode kind '" + o.kind + "'");
  }

  if (!o.stats.empty()) {
    const ChannelStats stats = ChannelStats::read(o.stats);
    for (auto& [suffix, tensor] : outputs) normalize_channels(tensor, stats);
  }
  for (const auto& [suffix, tensor] : outputs) {
    write_tensor(o.out_base + suffix, tensor);
  }

  std::ostream* rep = &std::cout;
  std::ofstream rep_file;
  if (!o.report_path.empty()) {
    rep_file.open(o.report_path);
    rep = &rep_file;
  }
  *rep << "encode kind=" << o.kind << " records_ok=" << parse_report.records_ok
       << " placed=" << proj.placed << " rejected=" << proj.rejected.size()
       << " parse_errors=" << parse_report.errors.size() << "\n";
  for (const auto& r : proj.rejected) *rep << "rejected " << r << "\n";
  for (const auto& e : parse_report.errors) *rep << "parse_error " << e << "\n";

  return report_parse_errors(parse_report) ? 0 : 1;
}

// -------------------------------------------------------------------- qc --

struct QcOpts {
  std::string config;
  std::vector<std::string> inputs;
  std::string output;
  std::string report_path;
};

int run_qc(const QcOpts& o) {
  const RunConfig cfg = load_config(o.config);
  ParseReport parse_report;
  ObsBatch batch = read_obs_files(o.inputs, parse_report);

  std::ofstream report(o.report_path.empty() ? "/dev/null" : o.report_path);
  ObsBatch kept;

  // Point streams screen per variable at the non-BT threshold.
  std::map<std::string, std::vector<std::size_t>> by_var;
  for (std::size_t i = 0; i < batch.points.size(); ++i) {
    by_var[batch.points[i].variable].push_back(i);
  }
  std::vector<char> keep_point(batch.points.size(), 1);
  for (const auto& [var, idx] : by_var) {
    std::vector<double> values, lats;
    for (std::size_t i : idx) {
      values.push_back(batch.points[i].value);
      lats.push_back(batch.points[i].lat);
    }
    const ScreenResult r = zoned_screen(values, lats, false, cfg.qc);
    for (std::size_t k = 0; k < idx.size(); ++k) keep_point[idx[k]] = r.keep[k];
    write_screen_report(report, var, r);
  }
  for (std::size_t i = 0; i < batch.points.size(); ++i) {
    if (keep_point[i]) kept.points.push_back(batch.points[i]);
  }

  // Brightness temperatures: gross check then zoned screen per channel; a
  // pixel survives only if every channel does.
  for (const auto& s : batch.swaths) {
    std::vector<char> keep_pixel(s.pixels.size(), 1);
    for (int c = 0; c < s.n_channels; ++c) {
      std::vector<double> values, lats;
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < s.pixels.size(); ++i) {
        if (!keep_pixel[i]) continue;
        const double v = s.pixels[i].brightness_k[c];
        if (!gross_keep(v, cfg.qc)) {
          keep_pixel[i] = 0;
          continue;
        }
        values.push_back(v);
        lats.push_back(s.pixels[i].lat);
        idx.push_back(i);
      }
      const ScreenResult r = zoned_screen(values, lats, true, cfg.qc);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (!r.keep[k]) keep_pixel[idx[k]] = 0;
      }
      write_screen_report(
          report, s.instrument + "/" + s.platform + "/bt" + std::to_string(c),
          r);
    }
    SwathObs filtered;
    filtered.instrument = s.instrument;
    filtered.platform = s.platform;
    filtered.n_channels = s.n_channels;
    for (std::size_t i = 0; i < s.pixels.size(); ++i) {
      if (keep_pixel[i]) filtered.pixels.push_back(s.pixels[i]);
    }
    if (!filtered.pixels.empty()) kept.swaths.push_back(std::move(filtered));
  }

  // Profile levels pool per vertical kilometer; failing levels are dropped.
  {
    std::map<long, std::vector<std::pair<std::size_t, std::size_t>>> buckets;
    for (std::size_t i = 0; i < batch.profiles.size(); ++i) {
      if (batch.profiles[i].kind != ProfileKind::GnssRoRefractivity) continue;
      for (std::size_t l = 0; l < batch.profiles[i].levels.size(); ++l) {
        const long km = static_cast<long>(
            batch.profiles[i].levels[l].coord / 1000.0);
        buckets[km].emplace_back(i, l);
      }
    }
    std::set<std::pair<std::size_t, std::size_t>> dropped;
    for (const auto& [km, members] : buckets) {
      std::vector<double> values, lats;
      for (const auto& [i, l] : members) {
        values.push_back(batch.profiles[i].levels[l].value);
        lats.push_back(batch.profiles[i].lat);
      }
      const ScreenResult r = zoned_screen(values, lats, false, cfg.qc);
      for (std::size_t k = 0; k < members.size(); ++k) {
        if (!r.keep[k]) dropped.insert(members[k]);
      }
      write_screen_report(report, "N@" + std::to_string(km) + "km", r);
    }
    for (std::size_t i = 0; i < batch.profiles.size(); ++i) {
      const ProfileObs& p = batch.profiles[i];
      if (p.kind != ProfileKind::GnssRoRefractivity) {
        kept.profiles.push_back(p);
        continue;
      }
      ProfileObs filtered = p;
      filtered.levels.clear();
      for (std::size_t l = 0; l < p.levels.size(); ++l) {
        if (!dropped.count({i, l})) filtered.levels.push_back(p.levels[l]);
      }
      if (filtered.levels.size() >= 2) {
        kept.profiles.push_back(std::move(filtered));
      }
    }
  }

  write_obs_file(o.output, kept);
  std::cout << "qc: kept " << kept.points.size() << " points, "
            << kept.swaths.size() << " swath groups, " << kept.profiles.size()
            << " profiles -> " << o.output << "\n";
  return report_parse_errors(parse_report) ? 0 : 1;
}

// ---------------------------------------------------------------- dilate --

struct DilateOpts {
  std::string config;
  std::string input;
  std::string output;
  int radius = -1;
  double epsilon = -1.0;
  bool symmetric = false;
  int threads = 0;
};

int run_dilate(const DilateOpts& o) {
  RunConfig cfg = load_config(o.config);
  if (o.radius > 0) cfg.dilation_radius = o.radius;
  if (o.epsilon > 0.0) cfg.dilation_epsilon = o.epsilon;
  if (o.symmetric) cfg.dilation_symmetric_kernel = true;
  if (o.threads > 0) cfg.threads = o.threads;
  cfg.echo_deviations(std::cout);

  const GriddedObsTensor input = read_tensor(o.input);
  const CressmanKernel kernel =
      build_kernel(cfg.dilation_radius, cfg.dilation_symmetric_kernel);
  const GriddedObsTensor out =
      dilate_tensor(input, kernel, cfg.dilation_epsilon, cfg.threads);
  write_tensor(o.output, out);
  std::size_t before = 0, after = 0;
  for (float m : input.mask) before += m != 0.0f;
  for (float m : out.mask) after += m != 0.0f;
  std::cout << "dilate: coverage " << before << " -> " << after << " of "
            << out.mask.size() << " cells\n";
  return 0;
}

// -------------------------------------------------------------- simulate --

struct SimulateOpts {
  std::string truth;
  std::string geometry;
  int hour = 0;
  std::size_t count = 500;
  std::uint64_t seed = 0;
  std::string time;
  std::string output;
};

int run_simulate(const SimulateOpts& o) {
  const StateField field = read_state(o.truth);
  const ROGeometryTable table = ROGeometryTable::read(o.geometry);
  const auto sample = table.sample(o.hour, o.count, o.seed);
  if (sample.with_replacement) {
    std::cerr << "warning: geometry bucket smaller than request; sampled "
                 "with replacement\n";
  }
  const Timestamp base =
      o.time.empty() ? field.valid_time() : parse_time_arg(o.time);

  ObsBatch batch;
  for (std::size_t i = 0; i < sample.locations.size(); ++i) {
    const auto& [lat, lon] = sample.locations[i];
    // Spread occultations across the hour, deterministically.
    const Timestamp t =
        base + static_cast<Timestamp>(i * 3599 / sample.locations.size());
    ProfileObs p = resample_profile(simulate_ro_profile(field, lat, lon, t));
    // Layers outside the state column's span are missing; records carry only
    // real values.
    std::erase_if(p.levels, [](const ProfileLevel& l) {
      return !std::isfinite(l.value);
    });
    batch.profiles.push_back(std::move(p));
  }
  write_obs_file(o.output, batch);
  std::cout << "simulate: " << batch.profiles.size() << " profiles -> "
            << o.output << "\n";
  return 0;
}

// ------------------------------------------------------------------ synth --

struct SynthOpts {
  int grid_n_lat = 72;
  std::string channels = "registry69";
  std::string time;
  std::string kind = "analysis";
  std::uint64_t seed = 0;
  std::string output;
  std::string base;
  double perturb = 0.0;
};

// Deterministic smooth pattern in [-1, 1] per channel.
double synth_pattern(int i, int j, const GridSpec& g, double phase_a,
                     double phase_b) {
  const double x = 2.0 * kPi * (j + 0.5) / g.n_lon;
  const double y = kPi * (i + 0.5) / g.n_lat;
  return 0.6 * std::sin(2.0 * x + phase_a) * std::sin(y) +
         0.4 * std::cos(3.0 * x + phase_b) * std::cos(2.0 * y + phase_a);
}

int run_synth(const SynthOpts& o) {
  const auto kind = field_kind_from_name(o.kind);
  if (!kind) throw DataError("unknown field kind '" + o.kind + "'");
  const Timestamp t = parse_time_arg(o.time);

  if (!o.base.empty()) {
    StateField field = read_state(o.base);
    Rng rng(o.seed);
    for (double& v : field.data()) v += o.perturb * rng.normal();
    field.set_valid_time(t);
    field.set_kind(*kind);
    write_state(o.output, field);
    std::cout << "synth: perturbed " << o.base << " -> " << o.output << "\n";
    return 0;
  }

  ChannelRegistry reg = ChannelRegistry::make(o.channels == "registry70");
  if (o.channels != "registry69" && o.channels != "registry70") {
    throw DataError("channels must be registry69 or registry70");
  }
  const GridSpec grid = GridSpec::global(o.grid_n_lat);
  StateField field(grid, reg, t, *kind);
  Rng rng(o.seed);
  for (int c = 0; c < reg.size(); ++c) {
    const ChannelKey& key = reg.at(c);
    const double phase_a = rng.uniform01() * 2.0 * kPi;
    const double phase_b = rng.uniform01() * 2.0 * kPi;
    auto ch = field.channel(c);
    for (int i = 0; i < grid.n_lat; ++i) {
      for (int j = 0; j < grid.n_lon; ++j) {
        const double s = synth_pattern(i, j, grid, phase_a, phase_b);
        double v = 0.0;
        switch (key.var) {
          case Variable::Z:
            v = geopotential_from_height(45000.0 - 43.0 * key.level_hpa) +
                500.0 * s;
            break;
          case Variable::T: v = 210.0 + 0.09 * key.level_hpa + 5.0 * s; break;
          case Variable::U:
          case Variable::V: v = 12.0 * s; break;
          case Variable::R:
            v = std::clamp(50.0 + 25.0 * s, 5.0, 95.0);
            break;
          case Variable::T2m: v = 288.0 + 12.0 * s; break;
          case Variable::MSLP: v = 101325.0 + 800.0 * s; break;
          case Variable::U10m:
          case Variable::V10m: v = 6.0 * s; break;
          case Variable::TP: v = 0.001 * std::abs(s); break;
        }
        ch[static_cast<std::size_t>(i) * grid.n_lon + j] = v;
      }
    }
  }
  write_state(o.output, field);
  std::cout << "synth: " << reg.size() << " channels on " << grid.n_lat << "x"
            << grid.n_lon << " -> " << o.output << "\n";
  return 0;
}

// --------------------------------------------------------------- channels --

struct ChannelsOpts {
  std::string jacobians;
  double increment = 20.0;
  double floor_hpa = 20.0;
  std::string targets;  // "co2=21,h2o=16,window=1"
  std::string output;
};

int run_channels(const ChannelsOpts& o) {
  const auto all = read_jacobian_table(o.jacobians);
  std::map<SounderBand, std::size_t> targets;
  {
    std::istringstream is(o.targets);
    std::string item;
    while (std::getline(is, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw DataError("targets must be band=count pairs");
      }
      const std::string band = item.substr(0, eq);
      const std::size_t count = std::stoul(item.substr(eq + 1));
      if (band == "co2") targets[SounderBand::Co2] = count;
      else if (band == "h2o") targets[SounderBand::H2o] = count;
      else if (band == "window") targets[SounderBand::Window] = count;
      else throw DataError("unknown band '" + band + "'");
    }
  }

  std::ofstream os(o.output);
  if (!os) throw DataError("cannot open " + o.output + " for writing");
  std::size_t total = 0;
  for (const auto& [band, target] : targets) {
    std::vector<ChannelJacobian> members;
    for (const auto& c : all) {
      if (c.band == band) members.push_back(c);
    }
    std::sort(members.begin(), members.end(),
              [](const ChannelJacobian& a, const ChannelJacobian& b) {
                return a.peak_pressure() < b.peak_pressure();
              });
    const auto retained = interval_sample(members, o.increment, o.floor_hpa);
    std::set<int> kept_ids;
    for (const auto& c : retained) kept_ids.insert(c.channel_id);
    std::vector<ChannelJacobian> candidates;
    for (const auto& c : members) {
      if (!kept_ids.count(c.channel_id)) candidates.push_back(c);
    }
    const GapFillResult filled = gap_fill(retained, candidates, target);
    if (!filled.target_met) {
      std::cerr << "warning: " << band_name(band)
                << " candidates exhausted at " << filled.channels.size()
                << " of " << target << "\n";
    }
    std::cout << band_name(band) << ": " << members.size() << " -> "
              << retained.size() << " after interval sampling -> "
              << filled.channels.size() << " after gap fill\n";
    for (const auto& c : filled.channels) {
      os << c.channel_id << "\t" << band_name(c.band) << "\t"
         << c.peak_pressure() << "\n";
      ++total;
    }
  }
  std::cout << "channels: " << total << " selected -> " << o.output << "\n";
  return 0;
}

// ------------------------------------------------------------------- info --

int run_info(const std::string& path) {
  const Ogf1File f = read_ogf1(path);
  std::cout << "block: " << f.header.block << "\n"
            << "kind: " << f.header.kind << "\n"
            << "valid_time: " << format_iso8601(f.header.valid_time) << "\n"
            << "dims: " << f.header.n_time << " x "
            << f.header.channel_names.size() << " x " << f.header.n_lat
            << " x " << f.header.n_lon << "\n"
            << "resolution: " << f.header.resolution << "\n"
            << "window: " << format_iso8601(f.header.window_start) << " + "
            << f.header.window_hours << "h\n";
  for (std::size_t c = 0; c < f.header.channel_names.size() && c < 8; ++c) {
    std::cout << "channel " << c << ": " << f.header.channel_names[c] << "\n";
  }
  if (f.header.channel_names.size() > 8) {
    std::cout << "... " << f.header.channel_names.size() - 8
              << " more channels\n";
  }
  return 0;
}

// --------------------------------------------------------------- apply-op --

struct ApplyOpOpts {
  std::string assimilator;
  std::string forecaster;
  std::string background;
  std::string obs_dir;
  std::string prev;
  std::string cur;
  std::string output;
  int dt_hours = 6;
};

int run_apply_op(const ApplyOpOpts& o) {
  if (!o.assimilator.empty()) {
    const StateField background = read_state(o.background);
    ObservationSet obs;
    if (!o.obs_dir.empty()) {
      std::vector<std::filesystem::path> bases;
      for (const auto& entry :
           std::filesystem::directory_iterator(o.obs_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 5 && name.ends_with(".ogf1") &&
            name.find(".mask.") == std::string::npos &&
            name.find(".conf.") == std::string::npos) {
          bases.push_back(entry.path());
        }
      }
      std::sort(bases.begin(), bases.end());
      for (const auto& b : bases) obs.sources.push_back(read_tensor(b));
    }
    auto op = make_assimilator(o.assimilator, std::filesystem::path(o.output)
                                                  .parent_path() /
                                                  "op_scratch");
    StateField analysis = op->assimilate(background, obs);
    analysis.set_kind(FieldKind::Analysis);
    write_state(o.output, analysis);
    return 0;
  }
  if (!o.forecaster.empty()) {
    const StateField prev = read_state(o.prev);
    const StateField cur = read_state(o.cur);
    auto op = make_forecaster(o.forecaster, o.dt_hours,
                              std::filesystem::path(o.output).parent_path() /
                                  "op_scratch");
    StateField next = op->forecast(prev, cur);
    next.set_kind(FieldKind::Background);
    write_state(o.output, next);
    return 0;
  }
  throw DataError("apply-op needs --assimilator or --forecaster");
}

}  // namespace

void add_data_commands(CLI::App& app) {
  {
    auto o = std::make_shared<IngestOpts>();
    auto* cmd = app.add_subcommand(
        "ingest", "Parse raw observation records into canonical form");
    cmd->add_option("--in", o->inputs, "Input observation files")->required();
    cmd->add_option("--out", o->output, "Canonical output file")->required();
    cmd->callback([o]() { std::exit(run_ingest(*o)); });
  }
  {
    auto o = std::make_shared<EncodeOpts>();
    auto* cmd = app.add_subcommand(
        "encode", "Grid and encode observations into OGF1 tensors");
    cmd->add_option("--config", o->config, "Run configuration file");
    cmd->add_option("--in", o->inputs, "Observation files")->required();
    cmd->add_option("--kind", o->kind,
                    "surface | radiosonde | supervision | swath | gnssro")
        ->required();
    cmd->add_option("--t0", o->t0, "Analysis time (ISO-8601)")->required();
    cmd->add_option("--out", o->out_base, "Output tensor base path")
        ->required();
    cmd->add_option("--stats", o->stats, "Normalization stats file");
    cmd->add_option("--report", o->report_path, "Write the report here");
    cmd->add_option("--seed", o->seed, "Overlap-resolution seed")
        ->each([o](const std::string&) { o->seed_set = true; });
    cmd->add_option("--window", o->window_hours,
                    "Override the window length (hours) for this kind");
    cmd->callback([o]() { std::exit(run_encode(*o)); });
  }
  {
    auto o = std::make_shared<QcOpts>();
    auto* cmd = app.add_subcommand(
        "qc", "Gross-error and zoned bi-weight screening");
    cmd->add_option("--config", o->config, "Run configuration file");
    cmd->add_option("--in", o->inputs, "Observation files")->required();
    cmd->add_option("--out", o->output, "Kept observations")->required();
    cmd->add_option("--report", o->report_path, "QC report file");
    cmd->callback([o]() { std::exit(run_qc(*o)); });
  }
  {
    auto o = std::make_shared<DilateOpts>();
    auto* cmd = app.add_subcommand(
        "dilate", "Cressman normalized-convolution fill of a tensor");
    cmd->add_option("--config", o->config, "Run configuration file");
    cmd->add_option("--in", o->input, "Input tensor base path")->required();
    cmd->add_option("--out", o->output, "Output tensor base path")
        ->required();
    cmd->add_option("--radius", o->radius, "Influence radius in cells");
    cmd->add_option("--epsilon", o->epsilon, "Stability constant");
    cmd->add_flag("--symmetric", o->symmetric,
                  "Use the symmetric (2R+1)^2 kernel variant");
    cmd->add_option("--threads", o->threads, "Worker threads");
    cmd->callback([o]() { std::exit(run_dilate(*o)); });
  }
  {
    auto o = std::make_shared<SimulateOpts>();
    auto* cmd = app.add_subcommand(
        "simulate", "Simulate GNSS-RO refractivity profiles from a state");
    cmd->add_option("--truth", o->truth, "Truth state (OGF1)")->required();
    cmd->add_option("--geometry", o->geometry, "Geometry lookup table")
        ->required();
    cmd->add_option("--hour", o->hour, "Hour bucket 0..23")->required();
    cmd->add_option("--count", o->count, "Profiles to sample");
    cmd->add_option("--seed", o->seed, "Sampling seed");
    cmd->add_option("--time", o->time, "Base observation time (ISO-8601)");
    cmd->add_option("--out", o->output, "Output observation file")
        ->required();
    cmd->callback([o]() { std::exit(run_simulate(*o)); });
  }
  {
    auto o = std::make_shared<SynthOpts>();
    auto* cmd = app.add_subcommand(
        "synth", "Generate a deterministic synthetic state field");
    cmd->add_option("--grid", o->grid_n_lat, "Latitude rows (2x columns)");
    cmd->add_option("--channels", o->channels, "registry69 | registry70");
    cmd->add_option("--time", o->time, "Valid time (ISO-8601)")->required();
    cmd->add_option("--kind", o->kind, "Field kind");
    cmd->add_option("--seed", o->seed, "Pattern seed");
    cmd->add_option("--out", o->output, "Output OGF1 path")->required();
    cmd->add_option("--base", o->base, "Perturb this field instead");
    cmd->add_option("--perturb", o->perturb, "Noise sigma for --base");
    cmd->callback([o]() { std::exit(run_synth(*o)); });
  }
  {
    auto o = std::make_shared<ChannelsOpts>();
    auto* cmd = app.add_subcommand(
        "channels", "Sounder channel thinning by Jacobian peak");
    cmd->add_option("--jacobians", o->jacobians, "Jacobian table")
        ->required();
    cmd->add_option("--increment", o->increment, "Bin width (hPa)");
    cmd->add_option("--floor", o->floor_hpa, "Thinning floor level (hPa)");
    cmd->add_option("--targets", o->targets,
                    "band=count list, e.g. co2=21,h2o=16,window=1")
        ->required();
    cmd->add_option("--out", o->output, "Selected channel list")->required();
    cmd->callback([o]() { std::exit(run_channels(*o)); });
  }
  {
    auto o = std::make_shared<std::string>();
    auto* cmd = app.add_subcommand("info", "Describe an OGF1 file");
    cmd->add_option("--in", *o, "OGF1 file")->required();
    cmd->callback([o]() { std::exit(run_info(*o)); });
  }
  {
    auto o = std::make_shared<ApplyOpOpts>();
    auto* cmd = app.add_subcommand(
        "apply-op",
        "Apply one operator through the OGF1 file protocol (the same "
        "contract external subprocess operators implement)");
    cmd->add_option("--assimilator", o->assimilator, "Assimilator spec");
    cmd->add_option("--forecaster", o->forecaster, "Forecaster spec");
    cmd->add_option("--background", o->background, "Background state (OGF1)");
    cmd->add_option("--obs-dir", o->obs_dir, "Directory of OGF1 tensors");
    cmd->add_option("--prev", o->prev, "State at t - dt (OGF1)");
    cmd->add_option("--cur", o->cur, "State at t (OGF1)");
    cmd->add_option("--output", o->output, "Result path")->required();
    cmd->add_option("--dt", o->dt_hours, "Forecast step hours");
    cmd->callback([o]() { std::exit(run_apply_op(*o)); });
  }
}

}  // namespace wxda::tool
