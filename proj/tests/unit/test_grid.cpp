#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "test_helpers.hpp"
#include "wxda/errors.hpp"
#include "wxda/numeric.hpp"
#include "wxda/ogf1.hpp"

using namespace wxda;

TEST_CASE("latitude weights: single row normalizes to 1") {
  for (double lat : {0.0, 45.0, -70.0, 89.9}) {
    const double rows[] = {lat};
    const LatWeights w = latitude_weights(std::span<const double>(rows, 1));
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("latitude weights: rows at 0 and 60 degrees weigh 2:1") {
  const double rows[] = {0.0, 60.0};
  const LatWeights w = latitude_weights(std::span<const double>(rows, 2));
  CHECK(w[0] / w[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(w[0] + w[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("latitude weights: full 720-row grid sums to 720") {
  const LatWeights w = latitude_weights(GridSpec::global(720));
  CompensatedSum sum;
  for (double v : w.w) sum.add(v);
  CHECK(sum.value() == doctest::Approx(720.0).epsilon(1e-9));
  for (double v : w.w) CHECK(v > 0.0);
}

TEST_CASE("latitude weights match the direct formula on random row subsets") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<double> lats(n);
    for (double& lat : lats) lat = rng.uniform01() * 178.0 - 89.0;
    const LatWeights w = latitude_weights(lats);
    double cos_sum = 0.0;
    for (double lat : lats) cos_sum += std::cos(deg_to_rad(lat));
    for (std::size_t i = 0; i < n; ++i) {
      const double expected =
          static_cast<double>(n) * std::cos(deg_to_rad(lats[i])) / cos_sum;
      CHECK(w[i] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("latitude weights: grid degenerate at the poles is rejected") {
  const double rows[] = {90.0, -90.0};
  CHECK_THROWS_AS(latitude_weights(std::span<const double>(rows, 2)),
                  InvalidGridError);
}

TEST_CASE("channel registry: counts and anchors") {
  const ChannelRegistry with_tp = ChannelRegistry::make(true);
  const ChannelRegistry without_tp = ChannelRegistry::make(false);
  CHECK(with_tp.size() == 70);
  CHECK(without_tp.size() == 69);
  CHECK(with_tp.has_precip());
  CHECK_FALSE(without_tp.has_precip());

  const int t850 = with_tp.index_of(Variable::T, 850);
  CHECK(with_tp.at(t850).describe() == "T850");
  CHECK_THROWS_AS(without_tp.index_of(Variable::TP), LayoutError);
}

TEST_CASE("channel registry: index <-> key round trip is the identity") {
  const ChannelRegistry reg = ChannelRegistry::make(true);
  for (int c = 0; c < reg.size(); ++c) {
    const ChannelKey& key = reg.at(c);
    CHECK(reg.index_of(key.var, key.level_hpa) == c);
    const auto reparsed = ChannelKey::parse(key.describe());
    REQUIRE(reparsed.has_value());
    CHECK(*reparsed == key);
  }
}

TEST_CASE("channel key parsing accepts both spellings") {
  CHECK(ChannelKey::parse("T850") == ChannelKey{Variable::T, 850});
  CHECK(ChannelKey::parse("T@850") == ChannelKey{Variable::T, 850});
  CHECK(ChannelKey::parse("T2m") == ChannelKey{Variable::T2m, 0});
  CHECK(ChannelKey::parse("MSLP") == ChannelKey{Variable::MSLP, 0});
  CHECK_FALSE(ChannelKey::parse("X123").has_value());
  CHECK_FALSE(ChannelKey::parse("T").has_value());
}

TEST_CASE("nearest cell geometry on the 0.25-degree grid") {
  const GridSpec g = GridSpec::global(720);
  const CellIndex c = nearest_cell(g, 0.10, 0.10);
  CHECK(g.lat_of_row(c.row) == doctest::Approx(0.125));
  CHECK(g.lon_of_col(c.col) == doctest::Approx(0.125));

  // Longitude wraps: 359.95 E is nearest the final column.
  const CellIndex w = nearest_cell(g, 0.0, 359.95);
  CHECK(w.col == g.n_lon - 1);
  CHECK_THROWS_AS(nearest_cell(g, 91.0, 0.0), DataError);
}

TEST_CASE("OGF1 round trip preserves a state field bit-exactly") {
  const GridSpec g = GridSpec::global(16);
  const ChannelRegistry reg = ChannelRegistry::make(false);
  Rng rng(7);
  StateField f = test::random_field(g, reg, test::kT0, FieldKind::Analysis,
                                    rng, 100.0);
  // The wire format stores float32; float-representable values round trip
  // bit-exactly.
  for (double& v : f.data()) v = static_cast<float>(v);
  const auto path = std::filesystem::temp_directory_path() / "wxda_rt.ogf1";
  write_state(path, f);
  const StateField g2 = read_state(path);
  CHECK(g2.same_layout(f));
  CHECK(g2.valid_time() == f.valid_time());
  CHECK(g2.kind() == f.kind());
  REQUIRE(g2.data().size() == f.data().size());
  for (std::size_t i = 0; i < f.data().size(); ++i) {
    CHECK(g2.data()[i] == f.data()[i]);
  }
  std::filesystem::remove(path);
}

TEST_CASE("OGF1 rewrite of the same field is byte-identical") {
  const GridSpec g = GridSpec::global(8);
  const ChannelRegistry reg = test::small_registry();
  Rng rng(19);
  StateField f =
      test::random_field(g, reg, test::kT0, FieldKind::Forecast, rng);
  const auto dir = std::filesystem::temp_directory_path();
  write_state(dir / "wxda_a.ogf1", f);
  write_state(dir / "wxda_b.ogf1", f);
  std::ifstream a(dir / "wxda_a.ogf1", std::ios::binary);
  std::ifstream b(dir / "wxda_b.ogf1", std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)),
                       std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)),
                       std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  std::filesystem::remove(dir / "wxda_a.ogf1");
  std::filesystem::remove(dir / "wxda_b.ogf1");
}

TEST_CASE("OGF1 rejects truncated and foreign files") {
  const auto path = std::filesystem::temp_directory_path() / "wxda_bad.ogf1";
  {
    std::ofstream os(path, std::ios::binary);
    os << "definitely not a field";
  }
  CHECK_THROWS_AS(read_ogf1(path), FormatError);
  std::filesystem::remove(path);
}

TEST_CASE("tensor round trip with time axis and companions") {
  const GridSpec g = GridSpec::global(8);
  Rng rng(3);
  GriddedObsTensor t(g, 3, {"bt00", "bt01"}, test::kT0, 3);
  for (std::size_t k = 0; k < t.values.size(); ++k) {
    if (rng.uniform01() < 0.2) {
      t.mask[k] = 1.0f;
      t.values[k] = static_cast<float>(rng.uniform01());
      t.confidence[k] = 1.0f;
    }
  }
  const auto base = std::filesystem::temp_directory_path() / "wxda_tensor";
  write_tensor(base, t);
  const GriddedObsTensor r = read_tensor(base);
  CHECK(r.n_time() == 3);
  CHECK(r.channels() == t.channels());
  CHECK(r.window_start() == t.window_start());
  CHECK(r.values == t.values);
  CHECK(r.mask == t.mask);
  CHECK(r.confidence == t.confidence);
  for (const char* suffix : {".ogf1", ".mask.ogf1", ".conf.ogf1"}) {
    std::filesystem::remove(base.string() + suffix);
  }
}
