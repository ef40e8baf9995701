#include "wxda/encode.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "wxda/errors.hpp"
#include "wxda/forward.hpp"
#include "wxda/numeric.hpp"
#include "wxda/rng.hpp"

namespace wxda {

namespace {

bool in_frame(Timestamp t, Timestamp frame_start) {
  return t >= frame_start && t < frame_start + kSecondsPerHour;
}

}  // namespace

SparseFrame project_points(std::span<const PointObs> obs,
                           std::span<const std::string> channels,
                           const GridSpec& spec, Timestamp frame_start,
                           ProjectionReport* report) {
  SparseFrame frame(spec, {channels.begin(), channels.end()}, frame_start);
  std::unordered_map<std::string, int> channel_index;
  for (int c = 0; c < frame.n_channels(); ++c) {
    channel_index.emplace(frame.channels[c], c);
  }

  for (std::size_t k = 0; k < obs.size(); ++k) {
    const PointObs& p = obs[k];
    const auto reject = [&](const std::string& why) {
      if (report) {
        report->rejected.push_back("record " + std::to_string(k) + ": " + why);
      }
    };
    if (!(std::abs(p.lat) <= 90.0)) {
      reject("latitude out of [-90, 90]");
      continue;
    }
    if (!in_frame(p.time, frame_start)) {
      reject("outside the hourly frame");
      continue;
    }
    const auto it = channel_index.find(p.variable);
    if (it == channel_index.end()) {
      reject("variable '" + p.variable + "' not in this frame's channels");
      continue;
    }
    const CellIndex cell = nearest_cell(spec, p.lat, p.lon);
    const std::size_t idx = frame.index(it->second, cell.row, cell.col);
    if (frame.mask[idx] != 0.0f) continue;  // earliest record keeps the cell
    frame.values[idx] = static_cast<float>(p.value);
    frame.mask[idx] = 1.0f;
    if (report) ++report->placed;
  }
  return frame;
}

SwathFrame project_swath(const SwathObs& swath, const GridSpec& spec,
                         Timestamp frame_start, ProjectionReport* report) {
  std::vector<std::string> channels(swath.n_channels);
  for (int c = 0; c < swath.n_channels; ++c) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "bt%02d", c);
    channels[c] = buf;
  }
  SwathFrame out{SparseFrame(spec, std::move(channels), frame_start),
                 std::vector<float>(spec.cells(), 0.0f)};

  for (std::size_t k = 0; k < swath.pixels.size(); ++k) {
    const SwathPixel& px = swath.pixels[k];
    if (!(std::abs(px.lat) <= 90.0)) {
      if (report) {
        report->rejected.push_back("pixel " + std::to_string(k) +
                                   ": latitude out of [-90, 90]");
      }
      continue;
    }
    if (!in_frame(px.time, frame_start)) {
      if (report) {
        report->rejected.push_back("pixel " + std::to_string(k) +
                                   ": outside the hourly frame");
      }
      continue;
    }
    if (static_cast<int>(px.brightness_k.size()) != swath.n_channels) {
      throw LayoutError("swath pixel channel count mismatch");
    }
    const CellIndex cell = nearest_cell(spec, px.lat, px.lon);
    const std::size_t cell_idx = cell.linear(spec);
    if (out.frame.cell_observed(cell_idx)) continue;  // earliest pixel wins
    for (int c = 0; c < swath.n_channels; ++c) {
      const std::size_t idx = out.frame.index(c, cell.row, cell.col);
      out.frame.values[idx] = px.brightness_k[c];
      out.frame.mask[idx] = 1.0f;
    }
    out.zenith[cell_idx] = static_cast<float>(px.zenith_deg);
    if (report) ++report->placed;
  }
  return out;
}

SparseFrame resolve_overlaps(std::span<const SparseFrame> frames,
                             std::uint64_t seed) {
  if (frames.empty()) throw DataError("no frames to merge");
  const SparseFrame& first = frames.front();
  for (const SparseFrame& f : frames) {
    if (f.channels != first.channels || !(f.grid == first.grid)) {
      throw LayoutError("overlap resolution needs identical channel layouts");
    }
  }
  SparseFrame merged(first.grid, first.channels, first.frame_start);
  if (!first.zenith.empty()) {
    merged.zenith.assign(merged.cell_count(), 0.0f);
  }

  const std::size_t cells = merged.cell_count();
  std::vector<int> contributors;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    contributors.clear();
    for (std::size_t f = 0; f < frames.size(); ++f) {
      if (frames[f].cell_observed(cell)) {
        contributors.push_back(static_cast<int>(f));
      }
    }
    if (contributors.empty()) continue;
    int chosen = contributors.front();
    if (contributors.size() > 1) {
      // Per-cell sub-stream keeps the draw independent of scan order.
      Rng rng(mix_seed(seed, cell));
      chosen = contributors[rng.below(contributors.size())];
    }
    const SparseFrame& src = frames[chosen];
    for (int c = 0; c < merged.n_channels(); ++c) {
      const std::size_t idx = static_cast<std::size_t>(c) * cells + cell;
      merged.values[idx] = src.values[idx];
      merged.mask[idx] = src.mask[idx];
    }
    if (!merged.zenith.empty() && !src.zenith.empty()) {
      merged.zenith[cell] = src.zenith[cell];
    }
  }
  return merged;
}

SparseFrame append_platform_metadata(const SparseFrame& frame,
                                     std::span<const float> zenith,
                                     int platform_index, int n_platforms) {
  if (platform_index < 0 || platform_index >= n_platforms) {
    throw DataError("platform index out of range");
  }
  if (zenith.size() != frame.cell_count()) {
    throw LayoutError("zenith plane does not match the grid");
  }
  std::vector<std::string> channels = frame.channels;
  channels.push_back("zenith");
  for (int p = 0; p < n_platforms; ++p) {
    channels.push_back("platform" + std::to_string(p));
  }
  SparseFrame out(frame.grid, std::move(channels), frame.frame_start);
  std::copy(frame.values.begin(), frame.values.end(), out.values.begin());
  std::copy(frame.mask.begin(), frame.mask.end(), out.mask.begin());

  const std::size_t cells = frame.cell_count();
  const int zenith_c = frame.n_channels();
  const int onehot_c = zenith_c + 1 + platform_index;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!frame.cell_observed(cell)) continue;
    out.values[static_cast<std::size_t>(zenith_c) * cells + cell] =
        zenith[cell];
    out.mask[static_cast<std::size_t>(zenith_c) * cells + cell] = 1.0f;
    out.values[static_cast<std::size_t>(onehot_c) * cells + cell] = 1.0f;
    // Mask covers the whole one-hot block so absence is explicit.
    for (int p = 0; p < n_platforms; ++p) {
      out.mask[static_cast<std::size_t>(zenith_c + 1 + p) * cells + cell] =
          1.0f;
    }
  }
  return out;
}

GriddedObsTensor stack_temporal(std::span<const SparseFrame> hourly_frames,
                                int declared_window_hours) {
  if (hourly_frames.empty()) throw WindowError("no frames to stack");
  if (static_cast<int>(hourly_frames.size()) != declared_window_hours) {
    throw WindowError("frame count " + std::to_string(hourly_frames.size()) +
                      " does not match the declared window of " +
                      std::to_string(declared_window_hours) + " hours");
  }
  const SparseFrame& first = hourly_frames.front();
  for (const SparseFrame& f : hourly_frames) {
    if (f.channels != first.channels || !(f.grid == first.grid)) {
      throw LayoutError("stacked frames must share shape");
    }
  }
  GriddedObsTensor t(first.grid, declared_window_hours, first.channels,
                     first.frame_start, declared_window_hours);
  const std::size_t frame_size = t.frame_size();
  for (std::size_t k = 0; k < hourly_frames.size(); ++k) {
    std::copy(hourly_frames[k].values.begin(), hourly_frames[k].values.end(),
              t.values.begin() + k * frame_size);
    std::copy(hourly_frames[k].mask.begin(), hourly_frames[k].mask.end(),
              t.mask.begin() + k * frame_size);
  }
  // Pre-dilation confidence is the raw availability.
  t.confidence = t.mask;
  return t;
}

GriddedObsTensor encode_time_embedding(std::span<const ProfileObs> profiles,
                                       Timestamp window_start,
                                       int window_hours, const GridSpec& spec,
                                       int n_layers, double top_m) {
  std::vector<std::string> channels;
  channels.reserve(n_layers + 2);
  for (int k = 0; k < n_layers; ++k) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "layer%03d", k);
    channels.push_back(buf);
  }
  channels.push_back("time_sin");
  channels.push_back("time_cos");

  GriddedObsTensor t(spec, 1, std::move(channels), window_start, window_hours);
  const std::size_t cells = spec.cells();
  const double window_s = window_hours * 3600.0;

  for (const ProfileObs& p : profiles) {
    const double dt = static_cast<double>(p.time - window_start);
    if (dt < 0.0 || dt >= window_s) {
      throw WindowError("profile time outside the assimilation window");
    }
    const CellIndex cell = nearest_cell(spec, p.lat, p.lon);
    const std::size_t cell_idx = cell.linear(spec);
    if (t.mask[static_cast<std::size_t>(n_layers) * cells + cell_idx] != 0.0f) {
      continue;  // cell already owned by an earlier profile
    }
    const ProfileObs res =
        static_cast<int>(p.levels.size()) == n_layers &&
                p.levels.front().coord == 0.5 * top_m / n_layers
            ? p
            : resample_profile(p, n_layers, top_m);
    for (int k = 0; k < n_layers; ++k) {
      if (!std::isfinite(res.levels[k].value)) continue;
      const std::size_t idx = static_cast<std::size_t>(k) * cells + cell_idx;
      t.values[idx] = static_cast<float>(res.levels[k].value);
      t.mask[idx] = 1.0f;
    }
    const double phase = 2.0 * kPi * (dt / 3600.0) / window_hours;
    const std::size_t sin_idx =
        static_cast<std::size_t>(n_layers) * cells + cell_idx;
    const std::size_t cos_idx =
        static_cast<std::size_t>(n_layers + 1) * cells + cell_idx;
    t.values[sin_idx] = static_cast<float>(std::sin(phase));
    t.values[cos_idx] = static_cast<float>(std::cos(phase));
    t.mask[sin_idx] = 1.0f;
    t.mask[cos_idx] = 1.0f;
  }
  t.confidence = t.mask;
  return t;
}

ChannelStats ChannelStats::read(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  ChannelStats s;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name;
    double mean, sd;
    if (!(ls >> name >> mean >> sd)) {
      throw ParseError(path.string() + ": bad stats line");
    }
    s.channels.push_back(name);
    s.mean.push_back(mean);
    s.stddev.push_back(sd);
  }
  return s;
}

void ChannelStats::write(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  os.precision(12);
  for (std::size_t i = 0; i < channels.size(); ++i) {
    os << channels[i] << " " << mean[i] << " " << stddev[i] << "\n";
  }
}

ChannelStats compute_channel_stats(std::span<const GriddedObsTensor> corpus) {
  if (corpus.empty()) throw NoDataError("empty stats corpus");
  const auto& channels = corpus.front().channels();
  ChannelStats s;
  s.channels = channels;
  s.mean.assign(channels.size(), 0.0);
  s.stddev.assign(channels.size(), 0.0);

  for (std::size_t c = 0; c < channels.size(); ++c) {
    CompensatedSum sum, sum2;
    std::size_t n = 0;
    for (const GriddedObsTensor& t : corpus) {
      if (t.channels() != channels) {
        throw LayoutError("stats corpus mixes channel layouts");
      }
      const std::size_t cells = t.grid().cells();
      for (int frame = 0; frame < t.n_time(); ++frame) {
        const std::size_t off =
            (static_cast<std::size_t>(frame) * channels.size() + c) * cells;
        for (std::size_t p = 0; p < cells; ++p) {
          if (t.mask[off + p] == 0.0f) continue;
          const double v = t.values[off + p];
          sum.add(v);
          sum2.add(v * v);
          ++n;
        }
      }
    }
    if (n == 0) continue;
    const double mean = sum.value() / static_cast<double>(n);
    const double var =
        std::max(0.0, sum2.value() / static_cast<double>(n) - mean * mean);
    s.mean[c] = mean;
    s.stddev[c] = std::sqrt(var);
  }
  return s;
}

namespace {

void apply_stats(GriddedObsTensor& tensor, const ChannelStats& stats,
                 bool forward_direction) {
  if (stats.channels != tensor.channels()) {
    throw StatsError("stats channel list does not match the tensor");
  }
  const std::size_t cells = tensor.grid().cells();
  for (int c = 0; c < tensor.n_channels(); ++c) {
    const double mean = stats.mean[c];
    const double sd = stats.stddev[c];
    if (!std::isfinite(mean) || !std::isfinite(sd)) {
      throw StatsError("non-finite stats for channel " + stats.channels[c]);
    }
    const double scale = sd > 0.0 ? sd : 1.0;  // constant channel
    for (int frame = 0; frame < tensor.n_time(); ++frame) {
      const std::size_t off =
          (static_cast<std::size_t>(frame) * tensor.n_channels() + c) * cells;
      for (std::size_t p = 0; p < cells; ++p) {
        if (tensor.mask[off + p] == 0.0f) continue;
        const double v = tensor.values[off + p];
        tensor.values[off + p] = static_cast<float>(
            forward_direction ? (v - mean) / scale : v * scale + mean);
      }
    }
  }
}

}  // namespace

void normalize_channels(GriddedObsTensor& tensor, const ChannelStats& stats) {
  apply_stats(tensor, stats, true);
}

void denormalize_channels(GriddedObsTensor& tensor, const ChannelStats& stats) {
  apply_stats(tensor, stats, false);
}

}  // namespace wxda
