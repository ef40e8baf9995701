#include "wxda/channel_select.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "wxda/errors.hpp"

namespace wxda {

std::string_view band_name(SounderBand b) {
  switch (b) {
    case SounderBand::Co2: return "co2";
    case SounderBand::H2o: return "h2o";
    case SounderBand::Window: return "window";
  }
  return "?";
}

namespace {

SounderBand band_from_name(const std::string& s) {
  if (s == "co2") return SounderBand::Co2;
  if (s == "h2o") return SounderBand::H2o;
  if (s == "window") return SounderBand::Window;
  throw ParseError("unknown band '" + s + "'");
}

std::size_t peak_index(const ChannelJacobian& c) {
  if (c.jacobian.empty() ||
      c.jacobian.size() != c.level_pressure_hpa.size()) {
    throw DataError("channel " + std::to_string(c.channel_id) +
                    " has a malformed Jacobian");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.jacobian.size(); ++i) {
    if (std::abs(c.jacobian[i]) > std::abs(c.jacobian[best])) best = i;
  }
  return best;
}

}  // namespace

double ChannelJacobian::peak_pressure() const {
  return level_pressure_hpa[peak_index(*this)];
}

double ChannelJacobian::peak_magnitude() const {
  return std::abs(jacobian[peak_index(*this)]);
}

std::vector<ChannelJacobian> interval_sample(
    std::span<const ChannelJacobian> channels, double increment_hpa,
    double floor_hpa) {
  for (std::size_t i = 1; i < channels.size(); ++i) {
    if (channels[i].peak_pressure() < channels[i - 1].peak_pressure()) {
      throw DataError("channels must be sorted by peak pressure");
    }
  }
  std::map<long, std::size_t> bin_best;  // bin index -> input index
  std::vector<std::size_t> pass_through;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const double p = channels[i].peak_pressure();
    if (p <= floor_hpa) {
      pass_through.push_back(i);
      continue;
    }
    const long bin = static_cast<long>(std::floor((p - floor_hpa) /
                                                  increment_hpa));
    auto it = bin_best.find(bin);
    if (it == bin_best.end()) {
      bin_best.emplace(bin, i);
      continue;
    }
    const ChannelJacobian& cur = channels[it->second];
    const ChannelJacobian& cand = channels[i];
    if (cand.peak_magnitude() > cur.peak_magnitude() ||
        (cand.peak_magnitude() == cur.peak_magnitude() &&
         cand.channel_id < cur.channel_id)) {
      it->second = i;
    }
  }
  std::vector<std::size_t> picked = pass_through;
  for (const auto& [bin, idx] : bin_best) picked.push_back(idx);
  std::sort(picked.begin(), picked.end());
  std::vector<ChannelJacobian> out;
  out.reserve(picked.size());
  for (std::size_t idx : picked) out.push_back(channels[idx]);
  return out;
}

GapFillResult gap_fill(std::span<const ChannelJacobian> retained,
                       std::span<const ChannelJacobian> candidates,
                       std::size_t target_count) {
  for (const auto& c : candidates) {
    for (const auto& r : retained) {
      if (c.channel_id == r.channel_id) {
        throw DataError("candidate set overlaps the retained set");
      }
    }
  }
  GapFillResult result;
  result.channels.assign(retained.begin(), retained.end());
  std::vector<ChannelJacobian> pool(candidates.begin(), candidates.end());

  while (result.channels.size() < target_count && !pool.empty()) {
    std::size_t best = 0;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      double gap = std::numeric_limits<double>::infinity();
      for (const auto& sel : result.channels) {
        gap = std::min(gap,
                       std::abs(pool[i].peak_pressure() - sel.peak_pressure()));
      }
      if (gap > best_gap ||
          (gap == best_gap &&
           pool[i].channel_id < pool[best].channel_id)) {
        best = i;
        best_gap = gap;
      }
    }
    result.channels.push_back(pool[best]);
    pool.erase(pool.begin() + best);
  }
  result.target_met = result.channels.size() >= target_count;
  std::sort(result.channels.begin(), result.channels.end(),
            [](const ChannelJacobian& a, const ChannelJacobian& b) {
              return a.peak_pressure() < b.peak_pressure();
            });
  return result;
}

std::vector<ChannelJacobian> read_jacobian_table(
    const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  std::vector<ChannelJacobian> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ChannelJacobian c;
    std::string band;
    std::size_t n = 0;
    if (!(ls >> c.channel_id >> band >> n) || n == 0) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": bad Jacobian record");
    }
    c.band = band_from_name(band);
    c.level_pressure_hpa.resize(n);
    c.jacobian.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(ls >> c.level_pressure_hpa[i] >> c.jacobian[i])) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": truncated Jacobian record");
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

void write_jacobian_table(const std::filesystem::path& path,
                          std::span<const ChannelJacobian> channels) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  os.precision(17);
  for (const auto& c : channels) {
    os << c.channel_id << " " << band_name(c.band) << " "
       << c.level_pressure_hpa.size();
    for (std::size_t i = 0; i < c.level_pressure_hpa.size(); ++i) {
      os << " " << c.level_pressure_hpa[i] << " " << c.jacobian[i];
    }
    os << "\n";
  }
}

}  // namespace wxda
