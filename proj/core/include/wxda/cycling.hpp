#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "wxda/grid.hpp"
#include "wxda/tensor.hpp"

namespace wxda {

struct CycleConfig {
  int dt_hours = 6;
  int unroll_steps = 4;
  int spin_up_days = 10;
  int forecast_steps = 40;
  int warm_start_min_lead = 1;
  int warm_start_max_lead = 30;
};

// Everything an assimilation step may consume at one cycle time. Empty sets
// are legal: a cycle without observations degrades to pass-through for the
// relaxation operator.
struct ObservationSet {
  std::vector<GriddedObsTensor> sources;

  bool empty() const { return sources.empty(); }
};

// Maps (background, observations) -> analysis on the same grid/registry and
// the same valid time.
class AssimilationOperator {
 public:
  virtual ~AssimilationOperator() = default;
  virtual StateField assimilate(const StateField& background,
                                const ObservationSet& obs) = 0;
  virtual std::string name() const = 0;
};

// Maps (state at t - dt, state at t) -> state at t + dt.
class ForecastOperator {
 public:
  virtual ~ForecastOperator() = default;
  virtual StateField forecast(const StateField& prev,
                              const StateField& cur) = 0;
  virtual std::string name() const = 0;
  virtual int dt_hours() const = 0;
};

// The rolling (x_a at t-dt, x_a at t, x_b at t+dt) triple the engine drives.
struct CycleState {
  StateField analysis_prev;
  StateField analysis;
  StateField background_next;
};

struct CycleStep {
  StateField analysis;    // at t
  StateField background;  // at t + dt
};

using ObsStream = std::function<ObservationSet(Timestamp)>;

// One assimilation-forecast cycle per step:
//   x_a(t)      = A(x_b(t), y(t))
//   x_b(t + dt) = F(x_a(t - dt), x_a(t))
// Output contracts are enforced after every operator call: matching layout
// (ContractViolation), finite values (DivergenceError with the step index),
// exact valid-time bookkeeping. Deterministic given operators and stream.
void run_cycle_streaming(AssimilationOperator& a, ForecastOperator& f,
                         CycleState init, const ObsStream& obs_stream,
                         int steps,
                         const std::function<void(int, const CycleStep&)>& on_step);

std::vector<CycleStep> run_cycle(AssimilationOperator& a, ForecastOperator& f,
                                 CycleState init, const ObsStream& obs_stream,
                                 int steps);

// Pre-generated forecasts keyed by (init time, lead steps), backing the
// warm-start strategy. On disk a store is a directory of
// fc_<init-tag>_k<lead>.ogf1 files (tag = compact UTC time).
class OfflineForecastStore {
 public:
  void put(Timestamp init_time, int lead_steps, StateField field);

  static OfflineForecastStore load_dir(const std::filesystem::path& dir,
                                       int dt_hours);

  std::size_t candidate_count(Timestamp valid_time, int min_lead,
                              int max_lead) const;

  // Uniform draw over stored forecasts valid at valid_time with lead in
  // [min_lead, max_lead]; reproducible under the seed.
  StateField warm_start_sample(Timestamp valid_time, std::uint64_t seed,
                               int min_lead = 1, int max_lead = 30) const;

 private:
  struct Key {
    Timestamp init_time;
    int lead_steps;
    bool operator<(const Key& o) const {
      return init_time != o.init_time ? init_time < o.init_time
                                      : lead_steps < o.lead_steps;
    }
  };
  std::map<Key, StateField> entries_;
  int dt_hours_ = 6;

 public:
  void set_dt_hours(int dt) { dt_hours_ = dt; }
  int dt_hours() const { return dt_hours_; }
};

// 40-step (by default) autoregressive chain: each output becomes the newest
// of the two-state input of the next call.
std::vector<StateField> autoregressive_forecast(ForecastOperator& f,
                                                const StateField& x_prev,
                                                const StateField& x_cur,
                                                int steps = 40);

}  // namespace wxda
