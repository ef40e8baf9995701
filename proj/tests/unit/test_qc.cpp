#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "wxda/errors.hpp"
#include "wxda/qc.hpp"
#include "wxda/rng.hpp"

using namespace wxda;

TEST_CASE("gross check enforces the 50-350 K window inclusively") {
  CHECK(gross_keep(200.0));
  CHECK_FALSE(gross_keep(400.0));
  CHECK(gross_keep(50.0));
  CHECK(gross_keep(350.0));
  CHECK_FALSE(gross_keep(49.999));
  CHECK_FALSE(gross_keep(350.001));

  const double values[] = {10.0, 100.0, 360.0};
  const auto keep = gross_check(values);
  CHECK(keep == std::vector<char>({0, 1, 0}));
}

TEST_CASE("biweight of a constant sample is (value, 0)") {
  const double sample[] = {5.0, 5.0, 5.0, 5.0};
  const BiweightStats s = biweight_stats(sample);
  CHECK(s.center == doctest::Approx(5.0));
  CHECK(s.spread == 0.0);
}

TEST_CASE("biweight center of a symmetric sample is 0") {
  const double sample[] = {-1.0, 0.0, 1.0};
  const BiweightStats s = biweight_stats(sample);
  CHECK(s.center == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("biweight needs three samples") {
  const double sample[] = {1.0, 2.0};
  CHECK_THROWS_AS(biweight_stats(std::span<const double>(sample, 2)),
                  InsufficientDataError);
}

TEST_CASE("biweight center resists 10% outliers at +50") {
  Rng rng(20230701);
  const std::size_t n = 100000;
  std::vector<double> sample(n);
  for (std::size_t i = 0; i < n; ++i) {
    sample[i] = i % 10 == 0 ? 50.0 : rng.normal();
  }
  const BiweightStats s = biweight_stats(sample);
  const double mean =
      std::accumulate(sample.begin(), sample.end(), 0.0) / sample.size();
  CHECK(std::abs(s.center) < 0.02);
  CHECK(std::abs(s.center) < std::abs(mean));  // mean is dragged to ~5
  CHECK(s.spread > 0.5);
  CHECK(s.spread < 2.0);
}

TEST_CASE("biweight center lies within the sample range") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.below(200);
    std::vector<double> sample(n);
    for (double& v : sample) v = rng.normal() * 10.0 + 3.0;
    const BiweightStats s = biweight_stats(sample);
    CHECK(s.center >= *std::min_element(sample.begin(), sample.end()));
    CHECK(s.center <= *std::max_element(sample.begin(), sample.end()));
  }
}

TEST_CASE("zone assignment partitions latitudes at 30 and 60") {
  CHECK(zone_of(0.0) == LatZone::Low);
  CHECK(zone_of(29.999) == LatZone::Low);
  CHECK(zone_of(30.0) == LatZone::Middle);
  CHECK(zone_of(-30.0) == LatZone::Middle);
  CHECK(zone_of(59.999) == LatZone::Middle);
  CHECK(zone_of(60.0) == LatZone::High);
  CHECK(zone_of(-89.0) == LatZone::High);

  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double lat = rng.uniform01() * 180.0 - 90.0;
    int zones = 0;
    zones += zone_of(lat) == LatZone::Low;
    zones += zone_of(lat) == LatZone::Middle;
    zones += zone_of(lat) == LatZone::High;
    CHECK(zones == 1);
  }
}

TEST_CASE("zoned screen keeps identical observations") {
  std::vector<double> values(50, 3.5);
  std::vector<double> lats(50);
  Rng rng(8);
  for (double& lat : lats) lat = rng.uniform01() * 160.0 - 80.0;
  const ScreenResult r = zoned_screen(values, lats, false);
  for (char k : r.keep) CHECK(k == 1);
}

TEST_CASE("zoned screen rejects a 10-sigma deviation in a non-BT stream") {
  Rng rng(31);
  std::vector<double> values, lats;
  for (int i = 0; i < 500; ++i) {
    values.push_back(rng.normal());
    lats.push_back(rng.uniform01() * 20.0);  // all in the low zone
  }
  const BiweightStats base = biweight_stats(values);
  values.push_back(base.center + 10.0 * base.spread);
  lats.push_back(5.0);
  const ScreenResult r = zoned_screen(values, lats, false);
  CHECK(r.keep.back() == 0);
}

TEST_CASE("the same 5-sigma deviation survives in a BT stream") {
  Rng rng(31);
  std::vector<double> values, lats;
  for (int i = 0; i < 500; ++i) {
    values.push_back(250.0 + rng.normal());
    lats.push_back(rng.uniform01() * 20.0);
  }
  const BiweightStats base = biweight_stats(values);
  values.push_back(base.center + 5.0 * base.spread);
  lats.push_back(5.0);

  const ScreenResult bt = zoned_screen(values, lats, true);
  CHECK(bt.keep.back() == 1);
  const ScreenResult other = zoned_screen(values, lats, false);
  CHECK(other.keep.back() == 0);
}

TEST_CASE("zones with fewer than 3 samples pass everything, flagged") {
  const std::vector<double> values = {1.0, 100.0};
  const std::vector<double> lats = {70.0, 75.0};  // high zone only
  const ScreenResult r = zoned_screen(values, lats, false);
  CHECK(r.keep == std::vector<char>({1, 1}));
  const auto& high = r.zones[2];
  CHECK(high.small_sample);
  CHECK(high.kept == 2);
}

TEST_CASE("repeated screening converges to a fixed point") {
  Rng rng(77);
  std::vector<double> values, lats;
  for (int i = 0; i < 800; ++i) {
    values.push_back(rng.normal() + (i % 25 == 0 ? 30.0 : 0.0));
    lats.push_back(rng.uniform01() * 170.0 - 85.0);
  }
  std::size_t previous = values.size() + 1;
  for (int pass = 0; pass < 10 && values.size() >= 3; ++pass) {
    const ScreenResult r = zoned_screen(values, lats, false);
    std::vector<double> kept_v, kept_l;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (r.keep[i]) {
        kept_v.push_back(values[i]);
        kept_l.push_back(lats[i]);
      }
    }
    CHECK(kept_v.size() <= values.size());  // monotone shrinking
    if (kept_v.size() == values.size()) {
      previous = values.size();
      break;
    }
    previous = kept_v.size();
    values = std::move(kept_v);
    lats = std::move(kept_l);
  }
  CHECK(previous == values.size());  // reached a fixed point
}
