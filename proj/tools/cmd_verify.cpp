#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

#include "tool_util.hpp"
#include "wxda/errors.hpp"
#include "wxda/metrics.hpp"
#include "wxda/obs_io.hpp"
#include "wxda/ogf1.hpp"

namespace wxda::tool {

namespace {

struct VerifyOpts {
  std::string config;
  std::string mode;  // wrmse | acc | activity | insitu | gnss
  std::vector<std::string> forecasts;
  std::string truth_dir;
  std::string climatology;
  std::string field;
  std::vector<std::string> obs;
  std::string init;
  std::string output;
  double reference_activity = 0.0;
};

double lead_hours_of(Timestamp valid, const std::string& init) {
  if (init.empty()) return 0.0;
  return static_cast<double>(valid - parse_time_arg(init)) / 3600.0;
}

int run_verify(const VerifyOpts& o) {
  const RunConfig cfg = load_config(o.config);
  const std::string truth_dir = resolve_dir(o.truth_dir, cfg);
  std::vector<ScorecardRow> rows;

  if (o.mode == "wrmse" || o.mode == "acc" || o.mode == "activity") {
    std::optional<StateField> clim;
    if (!o.climatology.empty()) clim = read_state(o.climatology);
    if (o.mode != "wrmse" && !clim) {
      throw DataError("mode '" + o.mode + "' needs --climatology");
    }
    for (const auto& fpath : o.forecasts) {
      const StateField forecast = read_state(fpath);
      const LatWeights w = latitude_weights(forecast.grid());
      const double lead = lead_hours_of(forecast.valid_time(), o.init);
      const Timestamp init_t =
          o.init.empty() ? forecast.valid_time() : parse_time_arg(o.init);

      std::optional<StateField> truth;
      if (!truth_dir.empty()) {
        const auto tp = std::filesystem::path(truth_dir) /
                        ("truth_" + time_tag(forecast.valid_time()) + ".ogf1");
        if (std::filesystem::exists(tp)) truth = read_state(tp);
      }

      const auto& reg = forecast.registry();
      if (o.mode == "activity") {
        for (int c = 0; c < reg.size(); ++c) {
          ScorecardRow r;
          r.variable = variable_name(reg.at(c).var);
          r.level = reg.at(c).level_hpa;
          r.lead_hours = lead;
          r.init_time = init_t;
          const double act =
              weighted_anomaly_std(forecast, *clim, c, w);
          r.score = o.reference_activity > 0.0
                        ? act / o.reference_activity
                        : act;
          r.n = forecast.grid().cells();
          rows.push_back(std::move(r));
        }
        continue;
      }

      if (!truth) {
        // Missing valid time in the truth set: explicit no-data rows.
        for (int c = 0; c < reg.size(); ++c) {
          ScorecardRow r;
          r.variable = variable_name(reg.at(c).var);
          r.level = reg.at(c).level_hpa;
          r.lead_hours = lead;
          r.init_time = init_t;
          rows.push_back(std::move(r));
        }
        continue;
      }

      if (o.mode == "wrmse") {
        const auto scores = wrmse(forecast, *truth, w);
        for (int c = 0; c < reg.size(); ++c) {
          ScorecardRow r;
          r.variable = variable_name(reg.at(c).var);
          r.level = reg.at(c).level_hpa;
          r.lead_hours = lead;
          r.init_time = init_t;
          r.score = scores[c];
          r.n = forecast.grid().cells();
          rows.push_back(std::move(r));
        }
      } else {
        const auto scores = acc(forecast, *truth, *clim, w);
        for (int c = 0; c < reg.size(); ++c) {
          ScorecardRow r;
          r.variable = variable_name(reg.at(c).var);
          r.level = reg.at(c).level_hpa;
          r.lead_hours = lead;
          r.init_time = init_t;
          r.score = scores[c];
          r.n = forecast.grid().cells();
          rows.push_back(std::move(r));
        }
      }
    }
  } else if (o.mode == "insitu" || o.mode == "gnss") {
    if (o.field.empty()) throw DataError("mode needs --field");
    const StateField field = read_state(o.field);
    ParseReport report;
    const ObsBatch batch = read_obs_files(o.obs, report);
    if (!report_parse_errors(report)) return 1;
    const double lead = lead_hours_of(field.valid_time(), o.init);
    const Timestamp init_t =
        o.init.empty() ? field.valid_time() : parse_time_arg(o.init);

    if (o.mode == "insitu") {
      // One row per observed variable, RMSE/MBE/STD spread over three rows
      // would lose pairing; scorecards carry RMSE and companion columns go
      // to stdout.
      std::map<std::string, std::vector<PointObs>> by_var;
      for (const auto& p : batch.points) by_var[p.variable].push_back(p);
      for (const auto& [var, obs] : by_var) {
        ScorecardRow r;
        const auto key = ChannelKey::parse(var);
        if (!key) continue;
        r.variable = variable_name(key->var);
        r.level = key->level_hpa;
        r.lead_hours = lead;
        r.init_time = init_t;
        try {
          const DepartureScores s = score_insitu_all(field, obs);
          r.score = s.rmse;
          r.n = s.n;
          std::cout << "insitu " << var << " rmse=" << s.rmse
                    << " mbe=" << s.mbe << " std=" << s.std_dev
                    << " n=" << s.n << "\n";
        } catch (const NoDataError&) {
          // leave the row as a no-data sentinel
        }
        rows.push_back(std::move(r));
      }
    } else {
      for (int level : ChannelRegistry::pressure_levels()) {
        ScorecardRow r;
        r.variable = "N";
        r.level = level;
        r.lead_hours = lead;
        r.init_time = init_t;
        GnssMatchOptions opt;
        opt.level_filter = level;
        try {
          const DepartureScores s =
              score_gnss_all(field, batch.profiles, opt);
          r.score = s.rmse;
          r.n = s.n;
          std::cout << "gnss N@" << level << " rmse=" << s.rmse
                    << " mbe=" << s.mbe << " std=" << s.std_dev
                    << " n=" << s.n << "\n";
        } catch (const NoDataError&) {
        }
        rows.push_back(std::move(r));
      }
    }
  } else {
    throw DataError("unknown verify mode '" + o.mode + "'");
  }

  write_scorecard(o.output, rows);
  std::cout << "verify: " << rows.size() << " rows -> " << o.output << "\n";
  return 0;
}

struct CompareOpts {
  std::string a;
  std::string b;
  std::string output;
  double confidence = 0.95;
  bool lag1 = false;
};

int run_compare(const CompareOpts& o) {
  const auto rows_a = read_scorecard(o.a);
  const auto rows_b = read_scorecard(o.b);

  using Key = std::tuple<std::string, int, double>;
  std::map<Key, std::map<Timestamp, double>> series_a, series_b;
  for (const auto& r : rows_a) {
    if (r.score) series_a[{r.variable, r.level, r.lead_hours}][r.init_time] =
        *r.score;
  }
  for (const auto& r : rows_b) {
    if (r.score) series_b[{r.variable, r.level, r.lead_hours}][r.init_time] =
        *r.score;
  }

  std::ofstream os(o.output);
  if (!os) throw DataError("cannot open " + o.output + " for writing");
  os.precision(12);
  os << "variable\tlevel\tlead_hours\tnorm_diff\tt\tci_low\tci_high\tn\n";
  for (const auto& [key, a_map] : series_a) {
    const auto bt = series_b.find(key);
    if (bt == series_b.end()) continue;
    ScoreSeries a, b;
    for (const auto& [t, score] : a_map) {
      const auto match = bt->second.find(t);
      if (match == bt->second.end()) continue;
      a.times.push_back(t);
      a.scores.push_back(score);
      b.times.push_back(t);
      b.scores.push_back(match->second);
    }
    const auto& [variable, level, lead] = key;
    os << variable << "\t" << level << "\t" << lead << "\t";
    try {
      const TTestResult r = paired_t_test(a, b, o.confidence, o.lag1);
      os << r.mean_diff << "\t" << r.t << "\t" << r.ci_low << "\t"
         << r.ci_high << "\t" << r.n << "\n";
    } catch (const DataError&) {
      os << "NA\tNA\tNA\tNA\t" << a.times.size() << "\n";
    }
  }
  std::cout << "compare: -> " << o.output << "\n";
  return 0;
}

struct LeadtimeOpts {
  std::string input;
  double threshold = 0.6;
  bool interpolate = false;
};

int run_leadtime(const LeadtimeOpts& o) {
  const auto rows = read_scorecard(o.input);
  using Key = std::pair<std::string, int>;
  std::map<Key, std::map<double, double>> series;
  for (const auto& r : rows) {
    if (r.score) series[{r.variable, r.level}][r.lead_hours] = *r.score;
  }
  for (const auto& [key, leads] : series) {
    std::vector<double> days, scores;
    for (const auto& [lead, score] : leads) {
      days.push_back(lead / 24.0);
      scores.push_back(score);
    }
    const double elt =
        effective_lead_time(days, scores, o.threshold, o.interpolate);
    std::cout << key.first << key.second << "\t" << elt << " days\n";
  }
  return 0;
}

struct TracksOpts {
  std::string forecast;
  std::string best;
  std::string output;
  std::vector<double> leads = {24, 48, 72, 96, 120};
};

int run_tracks(const TracksOpts& o) {
  const auto forecasts = read_tracks(o.forecast);
  const auto bests = read_tracks(o.best);
  std::map<std::string, const TCTrack*> best_by_id;
  for (const auto& t : bests) best_by_id[t.storm_id] = &t;

  std::ofstream os(o.output);
  if (!os) throw DataError("cannot open " + o.output + " for writing");
  os.precision(10);
  os << "storm\tlead_hours\terror_km\n";
  std::map<double, std::pair<double, std::size_t>> totals;
  for (const auto& f : forecasts) {
    const auto it = best_by_id.find(f.storm_id);
    for (double lead : o.leads) {
      os << f.storm_id << "\t" << lead << "\t";
      if (it == best_by_id.end()) {
        os << "NA\n";
        continue;
      }
      try {
        const double err = track_error(f, *it->second, lead);
        os << err << "\n";
        auto& [sum, n] = totals[lead];
        sum += err;
        n += 1;
      } catch (const NoDataError&) {
        os << "NA\n";
      }
    }
  }
  for (const auto& [lead, agg] : totals) {
    os << "MEAN\t" << lead << "\t" << agg.first / agg.second << "\n";
    std::cout << "tracks: mean error at " << lead << " h = "
              << agg.first / agg.second << " km (n=" << agg.second << ")\n";
  }
  return 0;
}

}  // namespace

void add_verify_commands(CLI::App& app) {
  {
    auto o = std::make_shared<VerifyOpts>();
    auto* cmd = app.add_subcommand("verify", "Score fields into a scorecard");
    cmd->add_option("--config", o->config, "Run configuration file");
    cmd->add_option("--mode", o->mode,
                    "wrmse | acc | activity | insitu | gnss")
        ->required();
    cmd->add_option("--forecast", o->forecasts, "Forecast OGF1 files");
    cmd->add_option("--truth-dir", o->truth_dir,
                    "Directory of truth_<tag>.ogf1 states");
    cmd->add_option("--climatology", o->climatology, "Climatology (OGF1)");
    cmd->add_option("--field", o->field, "Field to score (insitu/gnss)");
    cmd->add_option("--obs", o->obs, "Observation files (insitu/gnss)");
    cmd->add_option("--init", o->init, "Forecast initialization time");
    cmd->add_option("--reference-activity", o->reference_activity,
                    "Scale for activity mode");
    cmd->add_option("--out", o->output, "Scorecard path")->required();
    cmd->callback([o]() { std::exit(run_verify(*o)); });
  }
  {
    auto o = std::make_shared<CompareOpts>();
    auto* cmd = app.add_subcommand(
        "compare", "Paired normalized differences between two scorecards");
    cmd->add_option("--a", o->a, "Experiment A scorecard")->required();
    cmd->add_option("--b", o->b, "Experiment B scorecard")->required();
    cmd->add_option("--out", o->output, "Comparison table")->required();
    cmd->add_option("--confidence", o->confidence, "Interval confidence");
    cmd->add_flag("--lag1", o->lag1, "Lag-1 autocorrelation inflation");
    cmd->callback([o]() { std::exit(run_compare(*o)); });
  }
  {
    auto o = std::make_shared<LeadtimeOpts>();
    auto* cmd = app.add_subcommand(
        "leadtime", "Effective lead time from an ACC scorecard");
    cmd->add_option("--in", o->input, "ACC scorecard")->required();
    cmd->add_option("--threshold", o->threshold, "Skill threshold");
    cmd->add_flag("--interpolate", o->interpolate,
                  "Interpolate the crossing");
    cmd->callback([o]() { std::exit(run_leadtime(*o)); });
  }
  {
    auto o = std::make_shared<TracksOpts>();
    auto* cmd = app.add_subcommand(
        "tracks", "Cyclone track position errors against a best track");
    cmd->add_option("--forecast", o->forecast, "Forecast tracks (TSV)")
        ->required();
    cmd->add_option("--best", o->best, "Best tracks (TSV)")->required();
    cmd->add_option("--leads", o->leads, "Lead hours to score");
    cmd->add_option("--out", o->output, "Error table")->required();
    cmd->callback([o]() { std::exit(run_tracks(*o)); });
  }
}

}  // namespace wxda::tool
