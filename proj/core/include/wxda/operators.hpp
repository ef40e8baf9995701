#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "wxda/cycling.hpp"

namespace wxda {

// Test stand-in for a learned state estimator: nudges the background toward
// observations at observed cells, x_a = x_b + gamma * m o (y - x_b), using
// every observation source whose channels match the registry.
class RelaxationAssimilator : public AssimilationOperator {
 public:
  explicit RelaxationAssimilator(double gamma);
  StateField assimilate(const StateField& background,
                        const ObservationSet& obs) override;
  std::string name() const override;

 private:
  double gamma_;
};

// Toy dynamics: longitudinal shift by a fixed number of cells, then damping
// of anomalies toward the per-channel mean. The shift is a permutation and
// the damping acts on anomalies, so the channel mean is conserved exactly.
class AdvectionForecaster : public ForecastOperator {
 public:
  AdvectionForecaster(double damping, int shift_cells, int dt_hours = 6);
  StateField forecast(const StateField& prev, const StateField& cur) override;
  std::string name() const override;
  int dt_hours() const override { return dt_hours_; }

 private:
  double damping_;
  int shift_;
  int dt_hours_;
};

// File-protocol bridge for operators produced outside this codebase. The
// command template is run with {background}/{obs_dir}/{output} (assimilation)
// or {prev}/{cur}/{output} (forecast) substituted by OGF1 paths inside a
// scratch directory; the subprocess must write its result as OGF1 to
// {output}. A non-zero exit is a ContractViolation.
class SubprocessAssimilator : public AssimilationOperator {
 public:
  SubprocessAssimilator(std::string command_template,
                        std::filesystem::path scratch_dir);
  StateField assimilate(const StateField& background,
                        const ObservationSet& obs) override;
  std::string name() const override;

 private:
  std::string command_;
  std::filesystem::path scratch_;
  int call_count_ = 0;
};

class SubprocessForecaster : public ForecastOperator {
 public:
  SubprocessForecaster(std::string command_template,
                       std::filesystem::path scratch_dir, int dt_hours = 6);
  StateField forecast(const StateField& prev, const StateField& cur) override;
  std::string name() const override;
  int dt_hours() const override { return dt_hours_; }

 private:
  std::string command_;
  std::filesystem::path scratch_;
  int dt_hours_;
  int call_count_ = 0;
};

// Operator factories from config strings:
//   assimilator: "relaxation:<gamma>" | "identity" | "exec:<command>"
//   forecaster:  "advection:damping=<d>,shift=<cells>" | "persistence"
//              | "exec:<command>"
std::unique_ptr<AssimilationOperator> make_assimilator(
    const std::string& spec, const std::filesystem::path& scratch_dir);
std::unique_ptr<ForecastOperator> make_forecaster(
    const std::string& spec, int dt_hours,
    const std::filesystem::path& scratch_dir);

}  // namespace wxda
