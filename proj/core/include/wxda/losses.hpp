#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "wxda/grid.hpp"
#include "wxda/tensor.hpp"

namespace wxda {

// Per-channel weights for the observational loss, aligned to the
// 69-channel (no-precipitation) registry. Surface channels carry 0.2;
// upper-air weights decay linearly in pressure from a per-variable maximum
// at 1000 hPa (0.2 for T, 0.1 for Z,U,V,R) down to 0.02 at 500 hPa and stay
// at 0.02 above.
struct ObsLossWeights {
  std::vector<double> lambda;
};

// The weight rule at an arbitrary pressure (interpolation is linear in the
// pressure coordinate).
double obs_weight_at(Variable v, double pressure_hpa);

ObsLossWeights default_obs_weights(const ChannelRegistry& registry);

// Latitude-weighted mean absolute difference over all channels and cells.
double state_loss(const StateField& x, const StateField& xhat,
                  const LatWeights& w);

// Masked observational loss:
//   (1/C) * sum_c lambda_c * [sum_ij m * alpha_i * |x - y|] / [sum_ij m + 1]
// The +1 in the denominator is part of the definition, not an option.
double obs_loss(const StateField& x, std::span<const float> y_values,
                std::span<const float> y_mask, const ObsLossWeights& lambda,
                const LatWeights& w);

// Convenience: y as a single-frame tensor on the same registry layout.
double obs_loss(const StateField& x, const GriddedObsTensor& y,
                const ObsLossWeights& lambda, const LatWeights& w);

double joint_loss(const StateField& x, const StateField& xhat,
                  const GriddedObsTensor& y, const ObsLossWeights& lambda,
                  const LatWeights& w);

// Cumulative unrolled objective: for step n (1-based),
//   joint(analysis_n  vs truths[n-1], obs[n-1])
// + joint(background_n vs truths[n],  obs[n]).
// analyses and backgrounds have length N; truths and obs have length N + 1
// (valid times t, t+dt, ..., t+N*dt).
double cycle_loss(std::span<const StateField> analyses,
                  std::span<const StateField> backgrounds,
                  std::span<const StateField> truths,
                  std::span<const GriddedObsTensor> obs,
                  const ObsLossWeights& lambda, const LatWeights& w);

// Mean state loss over an autoregressive trajectory.
double multi_step_loss(std::span<const StateField> forecasts,
                       std::span<const StateField> truths,
                       const LatWeights& w);

// Structured-text loss report, one line per channel plus totals:
//   loss channel=T850 lambda=0.146 state=... obs=... obs_count=...
void write_loss_report(std::ostream& os, const StateField& x,
                       const StateField& xhat, const GriddedObsTensor& y,
                       const ObsLossWeights& lambda, const LatWeights& w);

}  // namespace wxda
