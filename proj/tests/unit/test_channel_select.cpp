#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <vector>

#include "wxda/channel_select.hpp"
#include "wxda/errors.hpp"
#include "wxda/rng.hpp"

using namespace wxda;

namespace {

// Gaussian-bump Jacobian peaking at the requested pressure. Levels sit on a
// 5-hPa grid, so a peak requested on that grid is reproduced exactly.
ChannelJacobian bump(int id, SounderBand band, double peak_hpa,
                     double magnitude = 1.0) {
  ChannelJacobian c;
  c.channel_id = id;
  c.band = band;
  for (double p = 10.0; p <= 1000.0; p += 5.0) {
    c.level_pressure_hpa.push_back(p);
    const double x = (p - peak_hpa) / 80.0;
    c.jacobian.push_back(magnitude * std::exp(-x * x));
  }
  return c;
}

std::vector<ChannelJacobian> sorted_by_peak(std::vector<ChannelJacobian> v) {
  std::sort(v.begin(), v.end(),
            [](const ChannelJacobian& a, const ChannelJacobian& b) {
              return a.peak_pressure() < b.peak_pressure();
            });
  return v;
}

long bin_of(double peak, double floor_hpa, double increment) {
  return static_cast<long>(std::floor((peak - floor_hpa) / increment));
}

// Independent bin-count oracle: distinct occupied bins below the floor level
// plus every channel passing through above it.
std::size_t oracle_retained_count(const std::vector<ChannelJacobian>& chans,
                                  double increment, double floor_hpa) {
  std::set<long> bins;
  std::size_t above = 0;
  for (const auto& c : chans) {
    if (c.peak_pressure() <= floor_hpa) {
      ++above;
    } else {
      bins.insert(bin_of(c.peak_pressure(), floor_hpa, increment));
    }
  }
  return bins.size() + above;
}

// The documented synthetic table shaped to the production narrative: 85
// temperature-sounding channels collapsing onto 16 occupied 20-hPa bins and
// 23 humidity channels onto 9 bins.
struct SynthTable {
  std::vector<ChannelJacobian> co2;
  std::vector<ChannelJacobian> h2o;
  std::vector<ChannelJacobian> window;
};

SynthTable synth_iasi_table() {
  SynthTable t;
  Rng rng(20240101);
  int id = 100;
  // Bin k of the 20-hPa sampler covers [20(k+1), 20(k+2)). Peaks go on the
  // 5-hPa level grid strictly inside their bin, so every member of a group
  // stays in exactly one bin.
  const auto peak_in_bin = [&](long bin) {
    return 20.0 * (bin + 1) + 5.0 * (1 + static_cast<double>(rng.below(3)));
  };
  // 85 temperature channels over 16 distinct bins (odd bins 1..31).
  for (int b = 0; b < 16; ++b) {
    const int members = b < 5 ? 6 : 5;
    for (int k = 0; k < members; ++k) {
      t.co2.push_back(bump(id++, SounderBand::Co2, peak_in_bin(2 * b + 1),
                           0.5 + rng.uniform01()));
    }
  }
  // 23 humidity channels over 9 distinct bins (14, 17, ..., 38).
  for (int b = 0; b < 9; ++b) {
    const int members = b < 5 ? 3 : 2;
    for (int k = 0; k < members; ++k) {
      t.h2o.push_back(bump(id++, SounderBand::H2o, peak_in_bin(14 + 3 * b),
                           0.5 + rng.uniform01()));
    }
  }
  t.window.push_back(bump(id++, SounderBand::Window, 995.0, 0.3));
  t.co2 = sorted_by_peak(t.co2);
  t.h2o = sorted_by_peak(t.h2o);
  return t;
}

std::vector<ChannelJacobian> not_retained(
    const std::vector<ChannelJacobian>& all,
    const std::vector<ChannelJacobian>& retained) {
  std::set<int> kept;
  for (const auto& c : retained) kept.insert(c.channel_id);
  std::vector<ChannelJacobian> out;
  for (const auto& c : all) {
    if (!kept.count(c.channel_id)) out.push_back(c);
  }
  return out;
}

}  // namespace

TEST_CASE("peak pressure is the argmax level of |jacobian|") {
  const ChannelJacobian c = bump(1, SounderBand::Co2, 340.0);
  CHECK(c.peak_pressure() == doctest::Approx(340.0).epsilon(0.03));
  ChannelJacobian neg = c;
  for (double& j : neg.jacobian) j = -j;
  CHECK(neg.peak_pressure() == c.peak_pressure());
  CHECK(neg.peak_magnitude() == c.peak_magnitude());
}

TEST_CASE("a single channel is always retained") {
  const std::vector<ChannelJacobian> one = {bump(7, SounderBand::Co2, 500.0)};
  const auto kept = interval_sample(one);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].channel_id == 7);
}

TEST_CASE("interval sampling keeps one channel per occupied bin") {
  // Peaks every 10 hPa over 200..400: the bin-count oracle fixes the
  // expected retention (11 occupied 20-hPa bins for the inclusive span).
  std::vector<ChannelJacobian> chans;
  for (int k = 0; k <= 20; ++k) {
    chans.push_back(bump(k, SounderBand::Co2, 200.0 + 10.0 * k));
  }
  chans = sorted_by_peak(chans);
  const std::size_t expected = oracle_retained_count(chans, 20.0, 20.0);
  CHECK(expected == 11);
  const auto kept = interval_sample(chans);
  CHECK(kept.size() == expected);

  // A half-open span of the same spacing occupies exactly 10 bins.
  chans.pop_back();
  const auto kept10 = interval_sample(chans);
  CHECK(oracle_retained_count(chans, 20.0, 20.0) == 10);
  CHECK(kept10.size() == 10);
}

TEST_CASE("bin representatives carry the largest peak magnitude") {
  std::vector<ChannelJacobian> chans = {
      bump(1, SounderBand::Co2, 305.0, 0.4),
      bump(2, SounderBand::Co2, 310.0, 0.9),
      bump(3, SounderBand::Co2, 315.0, 0.6),
  };
  const auto kept = interval_sample(chans);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].channel_id == 2);
}

TEST_CASE("channels peaking above the floor level pass through") {
  std::vector<ChannelJacobian> chans;
  ChannelJacobian high;
  high.channel_id = 1;
  high.band = SounderBand::Co2;
  high.level_pressure_hpa = {5.0, 10.0, 15.0};
  high.jacobian = {0.1, 0.9, 0.2};
  chans.push_back(high);
  ChannelJacobian high2 = high;
  high2.channel_id = 2;
  high2.jacobian = {0.9, 0.3, 0.2};
  chans.push_back(high2);
  chans = sorted_by_peak(chans);
  const auto kept = interval_sample(chans);
  CHECK(kept.size() == 2);  // both above the floor, no thinning
}

TEST_CASE("retained channels are a subset with single bin occupancy") {
  Rng rng(9);
  std::vector<ChannelJacobian> chans;
  for (int k = 0; k < 60; ++k) {
    chans.push_back(bump(k, SounderBand::Co2,
                         40.0 + rng.uniform01() * 900.0));
  }
  chans = sorted_by_peak(chans);
  const auto kept = interval_sample(chans);
  std::set<int> input_ids;
  for (const auto& c : chans) input_ids.insert(c.channel_id);
  std::set<long> bins;
  for (const auto& c : kept) {
    CHECK(input_ids.count(c.channel_id) == 1);
    if (c.peak_pressure() > 20.0) {
      CHECK(bins.insert(bin_of(c.peak_pressure(), 20.0, 20.0)).second);
    }
  }
  CHECK(kept.size() == oracle_retained_count(chans, 20.0, 20.0));
}

TEST_CASE("gap fill: met target is a no-op, single candidate is taken") {
  const std::vector<ChannelJacobian> retained = {
      bump(1, SounderBand::H2o, 400.0), bump(2, SounderBand::H2o, 700.0)};
  const std::vector<ChannelJacobian> cands = {
      bump(9, SounderBand::H2o, 550.0)};

  const GapFillResult same = gap_fill(retained, cands, 2);
  CHECK(same.target_met);
  CHECK(same.channels.size() == 2);

  const GapFillResult plus = gap_fill(retained, cands, 3);
  CHECK(plus.target_met);
  REQUIRE(plus.channels.size() == 3);
  bool found = false;
  for (const auto& c : plus.channels) found |= c.channel_id == 9;
  CHECK(found);
}

TEST_CASE("gap fill widens the worst vertical gap first") {
  const std::vector<ChannelJacobian> retained = {
      bump(1, SounderBand::Co2, 100.0), bump(2, SounderBand::Co2, 900.0)};
  const std::vector<ChannelJacobian> cands = {
      bump(10, SounderBand::Co2, 150.0),  // min gap 50
      bump(11, SounderBand::Co2, 500.0),  // min gap 400
      bump(12, SounderBand::Co2, 880.0),  // min gap 20
  };
  const GapFillResult r = gap_fill(retained, cands, 3);
  REQUIRE(r.channels.size() == 3);
  bool has_mid = false;
  for (const auto& c : r.channels) has_mid |= c.channel_id == 11;
  CHECK(has_mid);
}

TEST_CASE("gap fill flags candidate exhaustion") {
  const std::vector<ChannelJacobian> retained = {
      bump(1, SounderBand::Co2, 300.0)};
  const std::vector<ChannelJacobian> cands = {
      bump(2, SounderBand::Co2, 600.0)};
  const GapFillResult r = gap_fill(retained, cands, 5);
  CHECK_FALSE(r.target_met);
  CHECK(r.channels.size() == 2);

  CHECK_THROWS_AS(gap_fill(retained, retained, 2), DataError);
}

TEST_CASE("synthetic table reproduces the production channel counts") {
  const SynthTable t = synth_iasi_table();
  REQUIRE(t.co2.size() == 85);
  REQUIRE(t.h2o.size() == 23);

  const auto co2_kept = interval_sample(t.co2);
  const auto h2o_kept = interval_sample(t.h2o);
  CHECK(co2_kept.size() == 16);
  CHECK(h2o_kept.size() == 9);

  // Gap fill back to 21 + 16 + 1 = 38.
  const auto co2_final =
      gap_fill(co2_kept, not_retained(t.co2, co2_kept), 21);
  const auto h2o_final =
      gap_fill(h2o_kept, not_retained(t.h2o, h2o_kept), 16);
  const auto win_final =
      gap_fill({}, t.window, 1);
  CHECK(co2_final.target_met);
  CHECK(h2o_final.target_met);
  CHECK(win_final.target_met);
  CHECK(co2_final.channels.size() + h2o_final.channels.size() +
            win_final.channels.size() ==
        38);
}

TEST_CASE("Jacobian tables round trip through the text format") {
  const SynthTable t = synth_iasi_table();
  std::vector<ChannelJacobian> all = t.co2;
  all.insert(all.end(), t.h2o.begin(), t.h2o.end());
  all.insert(all.end(), t.window.begin(), t.window.end());
  const auto path =
      std::filesystem::temp_directory_path() / "wxda_jacobians.txt";
  write_jacobian_table(path, all);
  const auto back = read_jacobian_table(path);
  REQUIRE(back.size() == all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(back[i].channel_id == all[i].channel_id);
    CHECK(back[i].band == all[i].band);
    CHECK(back[i].peak_pressure() ==
          doctest::Approx(all[i].peak_pressure()));
  }
  std::filesystem::remove(path);
}
