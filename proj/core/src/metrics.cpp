#include "wxda/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "wxda/errors.hpp"
#include "wxda/forward.hpp"
#include "wxda/numeric.hpp"

namespace wxda {

namespace {

DepartureScores scores_from_departures(std::span<const double> d) {
  if (d.empty()) throw NoDataError("no matched observations to score");
  CompensatedSum sum, sum2;
  for (double v : d) {
    sum.add(v);
    sum2.add(v * v);
  }
  const double n = static_cast<double>(d.size());
  DepartureScores s;
  s.n = d.size();
  s.mbe = sum.value() / n;
  s.rmse = std::sqrt(sum2.value() / n);
  s.std_dev = std::sqrt(std::max(0.0, sum2.value() / n - s.mbe * s.mbe));
  return s;
}

}  // namespace

DepartureScores score_insitu_all(const StateField& field,
                                 std::span<const PointObs> obs) {
  const auto& reg = field.registry();
  std::vector<double> departures;
  departures.reserve(obs.size());
  for (const PointObs& p : obs) {
    const auto key = ChannelKey::parse(p.variable);
    if (!key) continue;
    const auto c = reg.find(key->var, key->level_hpa);
    if (!c) continue;
    const CellIndex cell = nearest_cell(field.grid(), p.lat, p.lon);
    departures.push_back(
        static_cast<double>(field.at(*c, cell.row, cell.col)) - p.value);
  }
  return scores_from_departures(departures);
}

double score_insitu(const StateField& field, std::span<const PointObs> obs,
                    ScoreKind kind) {
  return score_insitu_all(field, obs).get(kind);
}

DepartureScores score_gnss_all(const StateField& field,
                               std::span<const ProfileObs> profiles,
                               const GnssMatchOptions& options) {
  std::vector<double> departures;
  for (const ProfileObs& p : profiles) {
    if (p.kind != ProfileKind::GnssRoRefractivity) continue;
    const AtmosColumn col = column_at(field, p.lat, p.lon);
    for (const auto& lvl : col.levels) {
      if (options.level_filter &&
          static_cast<int>(lvl.pressure_hpa) != *options.level_filter) {
        continue;
      }
      // Vertical match: observation level closest in geopotential.
      double best_dphi = std::numeric_limits<double>::infinity();
      double best_value = std::numeric_limits<double>::quiet_NaN();
      for (const auto& obs_lvl : p.levels) {
        if (!std::isfinite(obs_lvl.value)) continue;
        const double dphi = std::abs(
            geopotential_from_height(obs_lvl.coord) - lvl.geopotential);
        if (dphi < best_dphi) {
          best_dphi = dphi;
          best_value = obs_lvl.value;
        }
      }
      if (!(best_dphi < options.max_geopotential_diff)) continue;
      const double hx = refractivity(lvl.pressure_hpa, lvl.temperature_k,
                                     lvl.vapor_pressure_hpa);
      if (hx == 0.0) continue;
      departures.push_back((hx - best_value) / hx);
    }
  }
  return scores_from_departures(departures);
}

double score_gnss(const StateField& field,
                  std::span<const ProfileObs> profiles, ScoreKind kind,
                  const GnssMatchOptions& options) {
  return score_gnss_all(field, profiles, options).get(kind);
}

std::vector<double> wrmse(const StateField& forecast, const StateField& truth,
                          const LatWeights& w) {
  if (!forecast.same_layout(truth)) {
    throw LayoutError("wrmse needs matching grids and registries");
  }
  const int H = forecast.grid().n_lat;
  const int W = forecast.grid().n_lon;
  if (static_cast<int>(w.size()) != H) {
    throw LayoutError("latitude weights do not match the grid");
  }
  std::vector<double> out(forecast.n_channels());
  for (int c = 0; c < forecast.n_channels(); ++c) {
    CompensatedSum acc;
    for (int i = 0; i < H; ++i) {
      const double alpha = w[i];
      for (int j = 0; j < W; ++j) {
        const double d = static_cast<double>(forecast.at(c, i, j)) -
                         static_cast<double>(truth.at(c, i, j));
        acc.add(alpha * d * d);
      }
    }
    out[c] = std::sqrt(acc.value() / (static_cast<double>(H) * W));
  }
  return out;
}

std::vector<std::optional<double>> acc(const StateField& forecast,
                                       const StateField& truth,
                                       const StateField& climatology,
                                       const LatWeights& w) {
  if (!forecast.same_layout(truth) || !forecast.same_layout(climatology)) {
    throw LayoutError("acc needs matching grids and registries");
  }
  const int H = forecast.grid().n_lat;
  const int W = forecast.grid().n_lon;
  if (static_cast<int>(w.size()) != H) {
    throw LayoutError("latitude weights do not match the grid");
  }
  std::vector<std::optional<double>> out(forecast.n_channels());
  for (int c = 0; c < forecast.n_channels(); ++c) {
    CompensatedSum cross, var_f, var_t;
    for (int i = 0; i < H; ++i) {
      const double alpha = w[i];
      for (int j = 0; j < W; ++j) {
        const double m = climatology.at(c, i, j);
        const double af = static_cast<double>(forecast.at(c, i, j)) - m;
        const double at = static_cast<double>(truth.at(c, i, j)) - m;
        cross.add(alpha * af * at);
        var_f.add(alpha * af * af);
        var_t.add(alpha * at * at);
      }
    }
    const double denom = var_f.value() * var_t.value();
    if (denom <= 0.0) {
      out[c] = std::nullopt;
      continue;
    }
    out[c] = std::clamp(cross.value() / std::sqrt(denom), -1.0, 1.0);
  }
  return out;
}

std::optional<double> normalized_diff(double score_a, double score_b) {
  if (score_b == 0.0 || !std::isfinite(score_a) || !std::isfinite(score_b)) {
    return std::nullopt;
  }
  return (score_a - score_b) / score_b;
}

TTestResult paired_t_test(const ScoreSeries& a, const ScoreSeries& b,
                          double confidence, bool lag1_correction) {
  if (a.times.size() != a.scores.size() || b.times.size() != b.scores.size() ||
      a.times != b.times) {
    throw DataError("paired t-test needs aligned timestamps");
  }
  std::vector<double> d;
  d.reserve(a.scores.size());
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    const auto nd = normalized_diff(a.scores[i], b.scores[i]);
    if (nd) d.push_back(*nd);
  }
  if (d.size() < 2) {
    throw InsufficientDataError("paired t-test needs at least 2 pairs");
  }

  CompensatedSum sum;
  for (double v : d) sum.add(v);
  const double n = static_cast<double>(d.size());
  const double mean = sum.value() / n;
  CompensatedSum ss;
  for (double v : d) ss.add((v - mean) * (v - mean));
  const double var = ss.value() / (n - 1.0);

  double n_eff = n;
  if (lag1_correction && d.size() > 2 && var > 0.0) {
    CompensatedSum lag;
    for (std::size_t i = 1; i < d.size(); ++i) {
      lag.add((d[i] - mean) * (d[i - 1] - mean));
    }
    const double r1 =
        std::clamp(lag.value() / ss.value(), -0.9999, 0.9999);
    n_eff = n * (1.0 - r1) / (1.0 + r1);
    n_eff = std::max(2.0, n_eff);
  }

  TTestResult r;
  r.n = d.size();
  r.mean_diff = mean;
  const double se = std::sqrt(var / n_eff);
  if (se == 0.0) {
    r.t = mean == 0.0 ? 0.0
                      : std::copysign(
                            std::numeric_limits<double>::infinity(), mean);
    r.ci_low = r.ci_high = mean;
    return r;
  }
  r.t = mean / se;
  const boost::math::students_t dist(n_eff - 1.0);
  const double tq = boost::math::quantile(dist, 0.5 + confidence / 2.0);
  r.ci_low = mean - tq * se;
  r.ci_high = mean + tq * se;
  return r;
}

double weighted_anomaly_std(const StateField& forecast,
                            const StateField& climatology, int channel,
                            const LatWeights& w) {
  if (!forecast.same_layout(climatology)) {
    throw LayoutError("activity needs matching grids and registries");
  }
  const int H = forecast.grid().n_lat;
  const int W = forecast.grid().n_lon;
  CompensatedSum wsum, wmean;
  for (int i = 0; i < H; ++i) {
    for (int j = 0; j < W; ++j) {
      const double a = static_cast<double>(forecast.at(channel, i, j)) -
                       static_cast<double>(climatology.at(channel, i, j));
      wmean.add(w[i] * a);
      wsum.add(w[i]);
    }
  }
  const double mean = wmean.value() / wsum.value();
  CompensatedSum acc;
  for (int i = 0; i < H; ++i) {
    for (int j = 0; j < W; ++j) {
      const double a = static_cast<double>(forecast.at(channel, i, j)) -
                       static_cast<double>(climatology.at(channel, i, j));
      acc.add(w[i] * (a - mean) * (a - mean));
    }
  }
  return std::sqrt(std::max(0.0, acc.value() / wsum.value()));
}

double forecast_activity(const StateField& forecast,
                         const StateField& climatology,
                         double reference_activity, const LatWeights& w,
                         int channel) {
  if (!(reference_activity > 0.0)) {
    throw DataError("reference activity must be positive");
  }
  return weighted_anomaly_std(forecast, climatology, channel, w) /
         reference_activity;
}

double effective_lead_time(std::span<const double> lead_days,
                           std::span<const double> scores, double threshold,
                           bool interpolate) {
  if (lead_days.size() != scores.size() || lead_days.empty()) {
    throw DataError("lead/score series must be non-empty and aligned");
  }
  for (std::size_t i = 1; i < lead_days.size(); ++i) {
    if (lead_days[i] <= lead_days[i - 1]) {
      throw DataError("lead-time axis must be strictly increasing");
    }
  }
  double best = 0.0;
  std::size_t best_idx = 0;
  bool found = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] >= threshold) {
      best = lead_days[i];
      best_idx = i;
      found = true;
    }
  }
  if (!found) return 0.0;
  if (interpolate && best_idx + 1 < scores.size()) {
    const double s0 = scores[best_idx];
    const double s1 = scores[best_idx + 1];
    if (s1 < threshold && s0 > s1) {
      const double frac = (s0 - threshold) / (s0 - s1);
      return best + frac * (lead_days[best_idx + 1] - best);
    }
  }
  return best;
}

std::optional<TCTrack::Point> TCTrack::at_time(Timestamp t) const {
  for (const Point& p : points) {
    if (p.time == t) return p;
  }
  return std::nullopt;
}

double track_error(const TCTrack& forecast, const TCTrack& best,
                   double lead_hours) {
  if (forecast.points.empty() || best.points.empty()) {
    throw NoDataError("empty track");
  }
  const Timestamp valid =
      forecast.points.front().time +
      static_cast<Timestamp>(std::llround(lead_hours * 3600.0));
  const auto f = forecast.at_time(valid);
  const auto b = best.at_time(valid);
  if (!f || !b) {
    throw NoDataError("track does not cover lead " +
                      std::to_string(lead_hours) + " h");
  }
  return great_circle_km(f->lat, f->lon, b->lat, b->lon);
}

std::vector<TCTrack> read_tracks(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  std::map<std::string, TCTrack> by_id;
  std::vector<std::string> order;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string id, time;
    TCTrack::Point pt;
    if (!(ls >> id >> time >> pt.lat >> pt.lon)) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": bad track record");
    }
    pt.time = parse_iso8601(time);
    auto [it, inserted] = by_id.try_emplace(id);
    if (inserted) {
      it->second.storm_id = id;
      order.push_back(id);
    }
    if (!it->second.points.empty() &&
        pt.time <= it->second.points.back().time) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": track times must increase strictly");
    }
    it->second.points.push_back(pt);
  }
  std::vector<TCTrack> out;
  out.reserve(order.size());
  for (const auto& id : order) out.push_back(std::move(by_id[id]));
  return out;
}

void write_tracks(const std::filesystem::path& path,
                  std::span<const TCTrack> tracks) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  os.precision(10);
  for (const TCTrack& t : tracks) {
    for (const auto& p : t.points) {
      os << t.storm_id << "\t" << format_iso8601(p.time) << "\t" << p.lat
         << "\t" << p.lon << "\n";
    }
  }
}

}  // namespace wxda
