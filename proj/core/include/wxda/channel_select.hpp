#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wxda {

enum class SounderBand { Co2, H2o, Window };

std::string_view band_name(SounderBand b);

// One sounder channel with its per-level Jacobian; the peak is the level of
// maximum absolute sensitivity.
struct ChannelJacobian {
  int channel_id = 0;
  SounderBand band = SounderBand::Co2;
  std::vector<double> level_pressure_hpa;
  std::vector<double> jacobian;

  double peak_pressure() const;
  double peak_magnitude() const;
};

// Interval thinning by Jacobian peak height: channels peaking at pressures
// above `floor_hpa` keep at most one representative per `increment_hpa`
// bin ([floor + k*inc, floor + (k+1)*inc)), the one with the largest peak
// magnitude (tie: lowest channel id). Channels peaking at or above the floor
// level (pressure <= floor) pass through untouched. Input must be sorted by
// peak pressure.
std::vector<ChannelJacobian> interval_sample(
    std::span<const ChannelJacobian> channels, double increment_hpa = 20.0,
    double floor_hpa = 20.0);

struct GapFillResult {
  std::vector<ChannelJacobian> channels;
  bool target_met = true;
};

// Greedy vertical gap filling within one band: repeatedly adds the candidate
// whose peak pressure maximizes the minimum distance to the already-selected
// peaks (tie: lowest channel id) until target_count channels are selected.
// Candidates must be disjoint from the retained set. Exhausting the
// candidates first yields a flagged partial result.
GapFillResult gap_fill(std::span<const ChannelJacobian> retained,
                       std::span<const ChannelJacobian> candidates,
                       std::size_t target_count);

// Delimiter-separated Jacobian tables:
//   <channel_id> <band> <n_levels> <p_1> <j_1> ... <p_n> <j_n>
std::vector<ChannelJacobian> read_jacobian_table(
    const std::filesystem::path& path);
void write_jacobian_table(const std::filesystem::path& path,
                          std::span<const ChannelJacobian> channels);

}  // namespace wxda
