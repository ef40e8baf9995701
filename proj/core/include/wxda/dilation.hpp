#pragma once

#include <span>
#include <vector>

#include "wxda/tensor.hpp"

namespace wxda {

// Cressman weight for squared distance d2 within radius-squared r2:
// (R^2 - d^2) / (R^2 + d^2) inside the radius, 0 at and beyond it.
inline double cressman_weight(double d2, double r2) {
  return d2 < r2 ? (r2 - d2) / (r2 + d2) : 0.0;
}

// Discrete Cressman kernel. The default is the literal 2R x 2R form with the
// center one cell off the geometric middle; since every offset with a
// component of -R or +R carries zero weight, it produces the same fill as
// the symmetric (2R+1) x (2R+1) variant, which is still offered behind the
// flag so the two shapes are never mixed in one run.
struct CressmanKernel {
  int radius = 10;
  bool symmetric = false;
  int min_offset = 0;  // inclusive
  int max_offset = 0;  // inclusive
  std::vector<double> w;  // (max-min+1)^2 weights, row-major by offset

  int side() const { return max_offset - min_offset + 1; }
  double at(int di, int dj) const {
    return w[static_cast<std::size_t>(di - min_offset) * side() +
             (dj - min_offset)];
  }
};

CressmanKernel build_kernel(int radius, bool symmetric = false);

// Plane-level results carry the full 64-bit accumulation; tensor-level
// output is truncated to the 32-bit tensor storage.
struct DilationResult {
  std::vector<double> values;
  std::vector<float> mask;
  std::vector<double> confidence;
};

inline constexpr double kDilationEpsilon = 1e-4;

// Normalized-convolution fill of one 2D plane: observed cells are copied
// bit-exactly, uncovered cells within the influence radius receive
// (y * w) / (m * w + eps), the output mask marks every cell with m * w > 0,
// and confidence is 1 at observations and min(1, m * w) at filled cells.
// Longitude wraps; latitude is zero-padded past the poles. Accumulation is
// 64-bit. Requires mask binary with values zeroed where mask is 0, and
// n_lon wider than the kernel.
DilationResult dilate(std::span<const float> values,
                      std::span<const float> mask, int n_lat, int n_lon,
                      const CressmanKernel& kernel,
                      double epsilon = kDilationEpsilon);

// Literal per-cell reference: for every uncovered cell, average all observed
// cells within the radius with Cressman weights (same epsilon and confidence
// contract as dilate). Quadratic; intended for grids up to ~256 x 512.
DilationResult brute_force_fill(std::span<const float> values,
                                std::span<const float> mask, int n_lat,
                                int n_lon, int radius,
                                double epsilon = kDilationEpsilon,
                                bool symmetric = false);

// Per-frame, per-channel dilation of a whole tensor; planes are independent
// and processed with `threads` workers (the result does not depend on the
// thread count).
GriddedObsTensor dilate_tensor(const GriddedObsTensor& input,
                               const CressmanKernel& kernel,
                               double epsilon = kDilationEpsilon,
                               int threads = 1);

}  // namespace wxda
