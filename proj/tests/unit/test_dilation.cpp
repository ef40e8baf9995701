#include <doctest.h>

#include <cmath>
#include <vector>

#include "wxda/dilation.hpp"
#include "wxda/errors.hpp"
#include "wxda/rng.hpp"

using namespace wxda;

namespace {

struct Plane {
  int n_lat, n_lon;
  std::vector<float> values, mask;

  Plane(int h, int w) : n_lat(h), n_lon(w) {
    values.assign(static_cast<std::size_t>(h) * w, 0.0f);
    mask.assign(values.size(), 0.0f);
  }
  void put(int i, int j, float v) {
    values[static_cast<std::size_t>(i) * n_lon + j] = v;
    mask[static_cast<std::size_t>(i) * n_lon + j] = 1.0f;
  }
};

Plane random_plane(int h, int w, double density, Rng& rng) {
  Plane p(h, w);
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    if (rng.uniform01() < density) {
      p.mask[k] = 1.0f;
      p.values[k] = static_cast<float>(rng.uniform01() * 200.0 + 100.0);
    }
  }
  return p;
}

template <typename A, typename B>
double max_abs_diff(const std::vector<A>& a, const std::vector<B>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(static_cast<double>(a[i]) -
                             static_cast<double>(b[i])));
  }
  return m;
}

}  // namespace

TEST_CASE("Cressman kernel spot values") {
  const int R = 10;
  const CressmanKernel k = build_kernel(R);
  CHECK(k.at(0, 0) == 1.0);                        // d = 0
  CHECK(k.at(0, R) == 0.0);                        // d = R on-axis
  CHECK(k.at(R, 0) == 0.0);
  // d^2 = R^2/2 via the (5, 5) offset for R = 10: w = 1/3 exactly.
  CHECK(k.at(5, 5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // Literal 2R x 2R table spans offsets 1-R .. R.
  CHECK(k.min_offset == 1 - R);
  CHECK(k.max_offset == R);
  CHECK(k.side() == 2 * R);
  for (double w : k.w) {
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
  }
}

TEST_CASE("single observation: preserved exactly, neighbor filled") {
  Plane p(32, 64);
  p.put(16, 30, 250.0f);
  const CressmanKernel k = build_kernel(10);
  const DilationResult r = dilate(p.values, p.mask, 32, 64, k);

  const std::size_t obs = 16 * 64 + 30;
  CHECK(r.values[obs] == 250.0);  // bit-exact
  CHECK(r.mask[obs] == 1.0f);
  CHECK(r.confidence[obs] == 1.0);

  const std::size_t nb = 16 * 64 + 31;  // one cell east, d = 1
  const double w = cressman_weight(1.0, 100.0);
  CHECK(r.values[nb] ==
        doctest::Approx(250.0 * w / (w + kDilationEpsilon)).epsilon(1e-6));
  CHECK(r.mask[nb] == 1.0f);
  CHECK(r.confidence[nb] == doctest::Approx(w));

  // Outside the radius nothing appears.
  const std::size_t far = 16 * 64 + 50;
  CHECK(r.values[far] == 0.0);
  CHECK(r.mask[far] == 0.0f);
  CHECK(r.confidence[far] == 0.0);
}

TEST_CASE("empty mask dilates to all zeros") {
  Plane p(16, 32);
  const DilationResult r = dilate(p.values, p.mask, 16, 32, build_kernel(5));
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    CHECK(r.values[i] == 0.0);
    CHECK(r.mask[i] == 0.0f);
    CHECK(r.confidence[i] == 0.0);
  }
}

TEST_CASE("dilate matches the brute-force fill on random sparse fields") {
  Rng rng(123);
  const CressmanKernel k = build_kernel(10);
  for (int trial = 0; trial < 20; ++trial) {
    const double density = 0.001 + rng.uniform01() * 0.05;
    Plane p = random_plane(64, 128, density, rng);
    const DilationResult fast = dilate(p.values, p.mask, 64, 128, k);
    const DilationResult slow = brute_force_fill(p.values, p.mask, 64, 128, 10);
    CHECK(max_abs_diff(fast.values, slow.values) < 1e-10);
    CHECK(max_abs_diff(fast.mask, slow.mask) == 0.0);
    CHECK(max_abs_diff(fast.confidence, slow.confidence) < 1e-10);
  }
}

TEST_CASE("observed cells are preserved bit-exactly and coverage only grows") {
  Rng rng(55);
  Plane p = random_plane(48, 96, 0.03, rng);
  const DilationResult r = dilate(p.values, p.mask, 48, 96, build_kernel(10));
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (p.mask[i] != 0.0f) {
      CHECK(r.values[i] == static_cast<double>(p.values[i]));
      CHECK(r.mask[i] == 1.0f);
      CHECK(r.confidence[i] == 1.0f);
    } else {
      CHECK(r.mask[i] >= p.mask[i]);
      if (r.mask[i] != 0.0f) {
        CHECK(r.confidence[i] > 0.0);
        CHECK(r.confidence[i] <= 1.0);
      }
    }
  }
}

TEST_CASE("filled values stay inside the contributor range up to epsilon") {
  // Two contributors with known values; every filled cell must lie within
  // [min * (1 - delta), max] where delta accounts for the epsilon shrink.
  Plane p(32, 64);
  p.put(15, 20, 200.0f);
  p.put(17, 24, 300.0f);
  const int R = 10;
  const CressmanKernel kernel = build_kernel(R);
  const DilationResult r = dilate(p.values, p.mask, 32, 64, kernel);
  double w_min = 1.0;
  for (double w : kernel.w) {
    if (w > 0.0) w_min = std::min(w_min, w);
  }
  const double delta = kDilationEpsilon / (kDilationEpsilon + w_min);
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (r.mask[i] == 0.0f || p.mask[i] != 0.0f) continue;
    CHECK(r.values[i] >= 200.0 * (1.0 - delta) - 1e-9);
    CHECK(r.values[i] <= 300.0 + 1e-9);
  }
}

TEST_CASE("adding an observation never lowers confidence at filled cells") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    Plane p = random_plane(32, 64, 0.02, rng);
    const CressmanKernel k = build_kernel(10);
    const DilationResult before = dilate(p.values, p.mask, 32, 64, k);

    // Drop one more observation into a random uncovered cell.
    std::size_t spot = rng.below(p.values.size());
    while (p.mask[spot] != 0.0f) spot = rng.below(p.values.size());
    Plane q = p;
    q.values[spot] = 123.0f;
    q.mask[spot] = 1.0f;
    const DilationResult after = dilate(q.values, q.mask, 32, 64, k);

    for (std::size_t i = 0; i < p.values.size(); ++i) {
      if (p.mask[i] != 0.0f) continue;
      if (i == spot) continue;
      CHECK(after.confidence[i] >= before.confidence[i] - 1e-12);
    }
  }
}

TEST_CASE("longitude wraps: the seam behaves like any interior column") {
  const int H = 32, W = 64;
  // Same geometry twice: an observation at column 0 and one at column 32.
  Plane seam(H, W), interior(H, W);
  seam.put(16, 0, 250.0f);
  interior.put(16, 32, 250.0f);
  const CressmanKernel k = build_kernel(10);
  const DilationResult rs = dilate(seam.values, seam.mask, H, W, k);
  const DilationResult ri = dilate(interior.values, interior.mask, H, W, k);
  for (int i = 0; i < H; ++i) {
    for (int j = 0; j < W; ++j) {
      const int j_shifted = (j + 32) % W;
      CHECK(rs.values[i * W + j] ==
            doctest::Approx(ri.values[i * W + j_shifted]).epsilon(1e-12));
      CHECK(rs.mask[i * W + j] == ri.mask[i * W + j_shifted]);
    }
  }
  // Column W-1 is adjacent to column 0 across the seam.
  CHECK(rs.mask[16 * W + (W - 1)] == 1.0f);
}

TEST_CASE("the symmetric kernel variant fills identically") {
  // Every offset with a component of magnitude R carries zero weight, so the
  // literal 2Rx2R table and the (2R+1)^2 variant agree cell for cell.
  Rng rng(31);
  Plane p = random_plane(48, 96, 0.02, rng);
  const DilationResult lit =
      dilate(p.values, p.mask, 48, 96, build_kernel(10, false));
  const DilationResult sym =
      dilate(p.values, p.mask, 48, 96, build_kernel(10, true));
  CHECK(max_abs_diff(lit.values, sym.values) == 0.0);
  CHECK(max_abs_diff(lit.confidence, sym.confidence) == 0.0);
}

TEST_CASE("shape mismatches are rejected") {
  Plane p(16, 32);
  CHECK_THROWS_AS(dilate(p.values, p.mask, 16, 16, build_kernel(5)),
                  LayoutError);
  // Kernel wider than the longitude circle would double-count through wrap.
  CHECK_THROWS_AS(dilate(p.values, p.mask, 16, 32, build_kernel(16)),
                  LayoutError);
}
