#include "wxda/losses.hpp"

#include <cmath>
#include <ostream>

#include "wxda/errors.hpp"
#include "wxda/numeric.hpp"

namespace wxda {

double obs_weight_at(Variable v, double pressure_hpa) {
  if (is_surface(v)) return 0.2;
  const double max_v = v == Variable::T ? 0.2 : 0.1;
  if (pressure_hpa <= 500.0) return 0.02;
  return 0.02 + (max_v - 0.02) * (pressure_hpa - 500.0) / 500.0;
}

ObsLossWeights default_obs_weights(const ChannelRegistry& registry) {
  if (registry.has_precip()) {
    throw LayoutError("observational weights are defined on the 69-channel "
                      "no-precipitation registry");
  }
  ObsLossWeights out;
  out.lambda.resize(registry.size());
  for (int c = 0; c < registry.size(); ++c) {
    const ChannelKey& key = registry.at(c);
    out.lambda[c] = obs_weight_at(key.var, key.level_hpa);
  }
  return out;
}

double state_loss(const StateField& x, const StateField& xhat,
                  const LatWeights& w) {
  if (!x.same_layout(xhat)) {
    throw LayoutError("state loss needs matching grids and registries");
  }
  const int C = x.n_channels();
  const int H = x.grid().n_lat;
  const int W = x.grid().n_lon;
  if (static_cast<int>(w.size()) != H) {
    throw LayoutError("latitude weights do not match the grid");
  }
  CompensatedSum acc;
  for (int c = 0; c < C; ++c) {
    for (int i = 0; i < H; ++i) {
      const double alpha = w[i];
      for (int j = 0; j < W; ++j) {
        acc.add(alpha * std::abs(static_cast<double>(x.at(c, i, j)) -
                                 static_cast<double>(xhat.at(c, i, j))));
      }
    }
  }
  return acc.value() / (static_cast<double>(C) * H * W);
}

double obs_loss(const StateField& x, std::span<const float> y_values,
                std::span<const float> y_mask, const ObsLossWeights& lambda,
                const LatWeights& w) {
  const int C = x.n_channels();
  const int H = x.grid().n_lat;
  const int W = x.grid().n_lon;
  const std::size_t expected =
      static_cast<std::size_t>(C) * static_cast<std::size_t>(H) * W;
  if (y_values.size() != expected || y_mask.size() != expected) {
    throw LayoutError("observation block does not match the state layout");
  }
  if (static_cast<int>(lambda.lambda.size()) != C ||
      static_cast<int>(w.size()) != H) {
    throw LayoutError("weights do not match the state layout");
  }
  CompensatedSum total;
  for (int c = 0; c < C; ++c) {
    CompensatedSum num;
    double count = 0.0;
    const std::size_t off = static_cast<std::size_t>(c) * H * W;
    for (int i = 0; i < H; ++i) {
      const double alpha = w[i];
      const std::size_t row = off + static_cast<std::size_t>(i) * W;
      for (int j = 0; j < W; ++j) {
        if (y_mask[row + j] == 0.0f) continue;
        num.add(alpha * std::abs(static_cast<double>(x.at(c, i, j)) -
                                 static_cast<double>(y_values[row + j])));
        count += 1.0;
      }
    }
    total.add(lambda.lambda[c] * num.value() / (count + 1.0));
  }
  return total.value() / static_cast<double>(C);
}

double obs_loss(const StateField& x, const GriddedObsTensor& y,
                const ObsLossWeights& lambda, const LatWeights& w) {
  if (y.n_time() != 1) {
    throw LayoutError("observational loss expects a single-frame tensor");
  }
  return obs_loss(x, y.values, y.mask, lambda, w);
}

double joint_loss(const StateField& x, const StateField& xhat,
                  const GriddedObsTensor& y, const ObsLossWeights& lambda,
                  const LatWeights& w) {
  return state_loss(x, xhat, w) + obs_loss(x, y, lambda, w);
}

double cycle_loss(std::span<const StateField> analyses,
                  std::span<const StateField> backgrounds,
                  std::span<const StateField> truths,
                  std::span<const GriddedObsTensor> obs,
                  const ObsLossWeights& lambda, const LatWeights& w) {
  const std::size_t n = analyses.size();
  if (backgrounds.size() != n || truths.size() != n + 1 ||
      obs.size() != n + 1) {
    throw LayoutError("cycle loss needs N analyses/backgrounds and N+1 "
                      "truths/observations");
  }
  CompensatedSum acc;
  for (std::size_t k = 0; k < n; ++k) {
    acc.add(joint_loss(analyses[k], truths[k], obs[k], lambda, w));
    acc.add(joint_loss(backgrounds[k], truths[k + 1], obs[k + 1], lambda, w));
  }
  return acc.value();
}

double multi_step_loss(std::span<const StateField> forecasts,
                       std::span<const StateField> truths,
                       const LatWeights& w) {
  if (forecasts.empty() || forecasts.size() != truths.size()) {
    throw LayoutError("multi-step loss needs equal, non-empty trajectories");
  }
  CompensatedSum acc;
  for (std::size_t k = 0; k < forecasts.size(); ++k) {
    acc.add(state_loss(forecasts[k], truths[k], w));
  }
  return acc.value() / static_cast<double>(forecasts.size());
}

void write_loss_report(std::ostream& os, const StateField& x,
                       const StateField& xhat, const GriddedObsTensor& y,
                       const ObsLossWeights& lambda, const LatWeights& w) {
  if (!x.same_layout(xhat) || y.n_time() != 1 ||
      y.n_channels() != x.n_channels()) {
    throw LayoutError("loss report needs matching layouts");
  }
  const int H = x.grid().n_lat;
  const int W = x.grid().n_lon;
  os.precision(12);
  CompensatedSum state_total, obs_total;
  for (int c = 0; c < x.n_channels(); ++c) {
    CompensatedSum state_term, obs_num;
    double count = 0.0;
    for (int i = 0; i < H; ++i) {
      for (int j = 0; j < W; ++j) {
        state_term.add(w[i] * std::abs(x.at(c, i, j) - xhat.at(c, i, j)));
        const std::size_t k = y.index(0, c, i, j);
        if (y.mask[k] == 0.0f) continue;
        obs_num.add(w[i] * std::abs(x.at(c, i, j) -
                                    static_cast<double>(y.values[k])));
        count += 1.0;
      }
    }
    const double state_c = state_term.value() / (static_cast<double>(H) * W);
    const double obs_c = lambda.lambda[c] * obs_num.value() / (count + 1.0);
    state_total.add(state_c);
    obs_total.add(obs_c);
    os << "loss channel=" << x.registry().at(c).describe()
       << " lambda=" << lambda.lambda[c] << " state=" << state_c
       << " obs=" << obs_c << " obs_count=" << count << "\n";
  }
  const double state = state_total.value() / x.n_channels();
  const double obs = obs_total.value() / x.n_channels();
  os << "loss total state=" << state << " obs=" << obs
     << " joint=" << state + obs << "\n";
}

}  // namespace wxda
