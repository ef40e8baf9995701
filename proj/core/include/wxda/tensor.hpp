#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wxda/grid.hpp"
#include "wxda/time.hpp"

namespace wxda {

// One-hour sparse gridded frame for a single platform or observation
// category: per-channel values and a binary per-channel mask, with an
// optional per-cell zenith plane for satellite swaths.
struct SparseFrame {
  GridSpec grid;
  std::vector<std::string> channels;
  Timestamp frame_start = 0;
  std::vector<float> values;  // C * n_lat * n_lon, 0 where mask is 0
  std::vector<float> mask;    // same shape, 0/1
  std::vector<float> zenith;  // n_lat * n_lon or empty

  SparseFrame() = default;
  SparseFrame(GridSpec g, std::vector<std::string> ch, Timestamp start);

  int n_channels() const { return static_cast<int>(channels.size()); }
  std::size_t cell_count() const { return grid.cells(); }

  std::size_t index(int c, int i, int j) const {
    return (static_cast<std::size_t>(c) * grid.n_lat + i) * grid.n_lon + j;
  }

  float value(int c, int i, int j) const { return values[index(c, i, j)]; }
  bool observed(int c, int i, int j) const {
    return mask[index(c, i, j)] != 0.0f;
  }
  // Any channel observed at this cell.
  bool cell_observed(std::size_t cell) const;
};

// Encoded observation block: normalized values, availability mask and
// confidence over an assimilation window, either time-stacked (n_time > 1)
// or time-embedded (n_time == 1 with extra time channels).
class GriddedObsTensor {
 public:
  GriddedObsTensor() = default;
  GriddedObsTensor(GridSpec grid, int n_time,
                   std::vector<std::string> channels, Timestamp window_start,
                   int window_hours);

  const GridSpec& grid() const { return grid_; }
  int n_time() const { return n_time_; }
  int n_channels() const { return static_cast<int>(channels_.size()); }
  const std::vector<std::string>& channels() const { return channels_; }
  Timestamp window_start() const { return window_start_; }
  int window_hours() const { return window_hours_; }

  std::size_t frame_size() const {
    return static_cast<std::size_t>(n_channels()) * grid_.cells();
  }
  std::size_t total_size() const { return frame_size() * n_time_; }

  std::size_t index(int t, int c, int i, int j) const {
    return ((static_cast<std::size_t>(t) * channels_.size() + c) *
                grid_.n_lat +
            i) *
               grid_.n_lon +
           j;
  }

  std::vector<float> values;
  std::vector<float> mask;
  std::vector<float> confidence;

 private:
  GridSpec grid_;
  int n_time_ = 0;
  std::vector<std::string> channels_;
  Timestamp window_start_ = 0;
  int window_hours_ = 0;
};

}  // namespace wxda
