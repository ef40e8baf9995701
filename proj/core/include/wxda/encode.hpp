#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wxda/obs.hpp"
#include "wxda/tensor.hpp"

namespace wxda {

struct ProjectionReport {
  std::size_t placed = 0;
  std::vector<std::string> rejected;  // per-record reason
};

// Nearest-neighbor projection of point observations whose times fall in
// [frame_start, frame_start + 1h) onto a frame with the given channel list.
// Records outside the hour or with unknown channels are reported, not
// placed; when several records hit the same (channel, cell), the earliest
// record in the batch wins.
SparseFrame project_points(std::span<const PointObs> obs,
                           std::span<const std::string> channels,
                           const GridSpec& spec, Timestamp frame_start,
                           ProjectionReport* report = nullptr);

struct SwathFrame {
  SparseFrame frame;
  std::vector<float> zenith;  // per cell
};

SwathFrame project_swath(const SwathObs& swath, const GridSpec& spec,
                         Timestamp frame_start,
                         ProjectionReport* report = nullptr);

// Merge per-platform frames that share a channel layout: every cell covered
// by more than one platform keeps exactly one platform's full channel
// column, chosen uniformly per cell, reproducibly under the seed.
SparseFrame resolve_overlaps(std::span<const SparseFrame> frames,
                             std::uint64_t seed);

// Appends one zenith channel and n_platforms one-hot identity channels; the
// one-hot is set only at platform_index and only at observed cells.
SparseFrame append_platform_metadata(const SparseFrame& frame,
                                     std::span<const float> zenith,
                                     int platform_index, int n_platforms);

// Chronological stack of hourly frames into a T x C x H x W tensor.
// declared_window_hours must equal the number of frames.
GriddedObsTensor stack_temporal(std::span<const SparseFrame> hourly_frames,
                                int declared_window_hours);

// Continuous time embedding for spatially dynamic platforms: one frame with
// n_layers value channels plus sin(2*pi*dt/W) and cos(2*pi*dt/W) channels at
// each observed cell. Profiles are resampled onto the uniform layer grid;
// when profiles collide in a cell the earliest in the batch keeps it whole.
GriddedObsTensor encode_time_embedding(std::span<const ProfileObs> profiles,
                                       Timestamp window_start,
                                       int window_hours, const GridSpec& spec,
                                       int n_layers = 512,
                                       double top_m = 50000.0);

struct ChannelStats {
  std::vector<std::string> channels;
  std::vector<double> mean;
  std::vector<double> stddev;  // <= 0 marks a constant channel

  static ChannelStats read(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;
};

// Per-channel statistics over the observed cells of a tensor corpus.
ChannelStats compute_channel_stats(std::span<const GriddedObsTensor> corpus);

// (v - mean) / std at observed cells, in place; unobserved cells stay zero.
// Constant channels (std <= 0) are only mean-shifted.
void normalize_channels(GriddedObsTensor& tensor, const ChannelStats& stats);
void denormalize_channels(GriddedObsTensor& tensor, const ChannelStats& stats);

}  // namespace wxda
