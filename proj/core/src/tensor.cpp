#include "wxda/tensor.hpp"

#include "wxda/errors.hpp"

namespace wxda {

SparseFrame::SparseFrame(GridSpec g, std::vector<std::string> ch,
                         Timestamp start)
    : grid(g), channels(std::move(ch)), frame_start(start) {
  grid.validate();
  values.assign(channels.size() * grid.cells(), 0.0f);
  mask.assign(channels.size() * grid.cells(), 0.0f);
}

bool SparseFrame::cell_observed(std::size_t cell) const {
  const std::size_t n = grid.cells();
  for (int c = 0; c < n_channels(); ++c) {
    if (mask[static_cast<std::size_t>(c) * n + cell] != 0.0f) return true;
  }
  return false;
}

GriddedObsTensor::GriddedObsTensor(GridSpec grid, int n_time,
                                   std::vector<std::string> channels,
                                   Timestamp window_start, int window_hours)
    : grid_(grid),
      n_time_(n_time),
      channels_(std::move(channels)),
      window_start_(window_start),
      window_hours_(window_hours) {
  grid_.validate();
  if (n_time < 1) throw LayoutError("tensor needs at least one time frame");
  values.assign(total_size(), 0.0f);
  mask.assign(total_size(), 0.0f);
  confidence.assign(total_size(), 0.0f);
}

}  // namespace wxda
