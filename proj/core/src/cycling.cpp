#include "wxda/cycling.hpp"

#include <string>
#include <utility>

#include "wxda/errors.hpp"
#include "wxda/ogf1.hpp"
#include "wxda/rng.hpp"

namespace wxda {

namespace {

void check_operator_output(const StateField& out, const StateField& ref,
                           Timestamp expected_time, const char* what,
                           int step) {
  if (!out.same_layout(ref)) {
    throw ContractViolation(std::string(what) + " returned a field on the "
                            "wrong grid/registry at step " +
                            std::to_string(step));
  }
  if (out.valid_time() != expected_time) {
    throw ContractViolation(std::string(what) +
                            " broke valid-time bookkeeping at step " +
                            std::to_string(step));
  }
  if (!out.finite()) {
    throw DivergenceError(std::string(what) +
                          " produced non-finite values at step " +
                          std::to_string(step));
  }
}

}  // namespace

void run_cycle_streaming(
    AssimilationOperator& a, ForecastOperator& f, CycleState init,
    const ObsStream& obs_stream, int steps,
    const std::function<void(int, const CycleStep&)>& on_step) {
  const Timestamp dt = static_cast<Timestamp>(f.dt_hours()) * kSecondsPerHour;
  CycleState s = std::move(init);

  for (int step = 1; step <= steps; ++step) {
    const Timestamp t = s.background_next.valid_time();
    const ObservationSet obs = obs_stream ? obs_stream(t) : ObservationSet{};

    StateField analysis = a.assimilate(s.background_next, obs);
    check_operator_output(analysis, s.background_next, t,
                          "assimilation operator", step);
    analysis.set_kind(FieldKind::Analysis);

    StateField next_background = f.forecast(s.analysis, analysis);
    check_operator_output(next_background, s.background_next, t + dt,
                          "forecast operator", step);
    next_background.set_kind(FieldKind::Background);

    const CycleStep out{std::move(analysis), std::move(next_background)};
    if (on_step) on_step(step, out);

    // Advance the (x_a(t-dt), x_a(t), x_b(t+dt)) triple.
    s.analysis_prev = std::move(s.analysis);
    s.analysis = out.analysis;
    s.background_next = out.background;
  }
}

std::vector<CycleStep> run_cycle(AssimilationOperator& a, ForecastOperator& f,
                                 CycleState init, const ObsStream& obs_stream,
                                 int steps) {
  std::vector<CycleStep> trajectory;
  trajectory.reserve(steps);
  run_cycle_streaming(a, f, std::move(init), obs_stream, steps,
                      [&](int, const CycleStep& s) {
                        trajectory.push_back(s);
                      });
  return trajectory;
}

void OfflineForecastStore::put(Timestamp init_time, int lead_steps,
                               StateField field) {
  entries_.insert_or_assign(Key{init_time, lead_steps}, std::move(field));
}

OfflineForecastStore OfflineForecastStore::load_dir(
    const std::filesystem::path& dir, int dt_hours) {
  OfflineForecastStore store;
  store.set_dt_hours(dt_hours);
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("forecast store " + dir.string() + " is not a directory");
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    // fc_YYYYMMDDTHHMMSSZ_k<lead>.ogf1
    if (name.rfind("fc_", 0) != 0 || !name.ends_with(".ogf1")) continue;
    const std::size_t k_pos = name.rfind("_k");
    if (k_pos == std::string::npos || k_pos < 3) continue;
    const std::string tag = name.substr(3, k_pos - 3);
    if (tag.size() != 16) {
      throw DataError("bad forecast store filename " + name);
    }
    const std::string iso = tag.substr(0, 4) + "-" + tag.substr(4, 2) + "-" +
                            tag.substr(6, 2) + "T" + tag.substr(9, 2) + ":" +
                            tag.substr(11, 2) + ":" + tag.substr(13, 2) + "Z";
    const int lead =
        std::stoi(name.substr(k_pos + 2, name.size() - k_pos - 2 - 5));
    store.put(parse_iso8601(iso), lead, read_state(entry.path()));
  }
  return store;
}

std::size_t OfflineForecastStore::candidate_count(Timestamp valid_time,
                                                  int min_lead,
                                                  int max_lead) const {
  std::size_t n = 0;
  for (const auto& [key, field] : entries_) {
    if (key.lead_steps < min_lead || key.lead_steps > max_lead) continue;
    if (key.init_time +
            static_cast<Timestamp>(key.lead_steps) * dt_hours_ *
                kSecondsPerHour ==
        valid_time) {
      ++n;
    }
  }
  return n;
}

StateField OfflineForecastStore::warm_start_sample(Timestamp valid_time,
                                                   std::uint64_t seed,
                                                   int min_lead,
                                                   int max_lead) const {
  std::vector<const StateField*> candidates;
  for (const auto& [key, field] : entries_) {
    if (key.lead_steps < min_lead || key.lead_steps > max_lead) continue;
    if (key.init_time +
            static_cast<Timestamp>(key.lead_steps) * dt_hours_ *
                kSecondsPerHour ==
        valid_time) {
      candidates.push_back(&field);
    }
  }
  if (candidates.empty()) {
    throw NoDataError("no stored forecast valid at the requested time");
  }
  Rng rng(seed);
  return *candidates[rng.below(candidates.size())];
}

std::vector<StateField> autoregressive_forecast(ForecastOperator& f,
                                                const StateField& x_prev,
                                                const StateField& x_cur,
                                                int steps) {
  const Timestamp dt = static_cast<Timestamp>(f.dt_hours()) * kSecondsPerHour;
  if (x_cur.valid_time() - x_prev.valid_time() != dt) {
    throw ContractViolation("autoregressive inputs must be dt apart");
  }
  std::vector<StateField> trajectory;
  trajectory.reserve(steps);
  StateField prev = x_prev;
  StateField cur = x_cur;
  for (int k = 1; k <= steps; ++k) {
    StateField next = f.forecast(prev, cur);
    check_operator_output(next, cur, cur.valid_time() + dt,
                          "forecast operator", k);
    next.set_kind(FieldKind::Forecast);
    trajectory.push_back(next);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return trajectory;
}

}  // namespace wxda
