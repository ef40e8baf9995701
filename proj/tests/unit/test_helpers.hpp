#pragma once

#include <functional>
#include <vector>

#include "wxda/grid.hpp"
#include "wxda/rng.hpp"
#include "wxda/tensor.hpp"
#include "wxda/time.hpp"

namespace wxda::test {

inline ChannelRegistry small_registry() {
  // Surface-only subset keeps small-grid tests cheap; layouts still go
  // through the same registry machinery as the full 69/70 sets.
  std::vector<std::string> names = {"T2m", "MSLP", "U10m", "V10m"};
  return *ChannelRegistry::from_names(names);
}

inline StateField make_field(const GridSpec& grid, const ChannelRegistry& reg,
                             Timestamp t, FieldKind kind, double fill) {
  StateField f(grid, reg, t, kind);
  for (double& v : f.data()) v = fill;
  return f;
}

inline StateField random_field(const GridSpec& grid,
                               const ChannelRegistry& reg, Timestamp t,
                               FieldKind kind, Rng& rng, double scale = 1.0) {
  StateField f(grid, reg, t, kind);
  for (double& v : f.data()) v = (rng.uniform01() * 2.0 - 1.0) * scale;
  return f;
}

inline GriddedObsTensor random_obs_tensor(const GridSpec& grid,
                                          const std::vector<std::string>& ch,
                                          Timestamp t, Rng& rng,
                                          double density) {
  GriddedObsTensor tensor(grid, 1, ch, t, 1);
  for (std::size_t k = 0; k < tensor.values.size(); ++k) {
    if (rng.uniform01() < density) {
      tensor.mask[k] = 1.0f;
      tensor.values[k] = static_cast<float>(rng.uniform01() * 2.0 - 1.0);
      tensor.confidence[k] = 1.0f;
    }
  }
  return tensor;
}

inline const Timestamp kT0 = make_time(2023, 7, 1, 0, 0, 0);

}  // namespace wxda::test
