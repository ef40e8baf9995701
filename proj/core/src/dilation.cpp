#include "wxda/dilation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "wxda/errors.hpp"

namespace wxda {

CressmanKernel build_kernel(int radius, bool symmetric) {
  if (radius < 1) throw DataError("kernel radius must be >= 1");
  CressmanKernel k;
  k.radius = radius;
  k.symmetric = symmetric;
  if (symmetric) {
    k.min_offset = -radius;
    k.max_offset = radius;
  } else {
    // Literal 2R x 2R table with indices 1..2R around center R.
    k.min_offset = 1 - radius;
    k.max_offset = radius;
  }
  const double r2 = static_cast<double>(radius) * radius;
  k.w.resize(static_cast<std::size_t>(k.side()) * k.side());
  for (int di = k.min_offset; di <= k.max_offset; ++di) {
    for (int dj = k.min_offset; dj <= k.max_offset; ++dj) {
      const double d2 = static_cast<double>(di) * di +
                        static_cast<double>(dj) * dj;
      k.w[static_cast<std::size_t>(di - k.min_offset) * k.side() +
          (dj - k.min_offset)] = cressman_weight(d2, r2);
    }
  }
  return k;
}

namespace {

void check_plane(std::span<const float> values, std::span<const float> mask,
                 int n_lat, int n_lon, int kernel_side) {
  const std::size_t n = static_cast<std::size_t>(n_lat) * n_lon;
  if (values.size() != n || mask.size() != n) {
    throw LayoutError("values/mask do not match the declared plane shape");
  }
  if (kernel_side >= n_lon) {
    throw LayoutError("kernel wider than the longitude circle");
  }
}

DilationResult finish(std::span<const float> values,
                      std::span<const float> mask,
                      const std::vector<double>& y_conv,
                      const std::vector<double>& m_conv, double epsilon) {
  DilationResult out;
  out.values.resize(values.size());
  out.mask.resize(values.size());
  out.confidence.resize(values.size());
  for (std::size_t p = 0; p < values.size(); ++p) {
    if (mask[p] != 0.0f) {
      out.values[p] = values[p];
      out.mask[p] = 1.0f;
      out.confidence[p] = 1.0;
    } else {
      out.values[p] = y_conv[p] / (m_conv[p] + epsilon);
      out.mask[p] = m_conv[p] > 0.0 ? 1.0f : 0.0f;
      out.confidence[p] = std::min(1.0, m_conv[p]);
    }
  }
  return out;
}

}  // namespace

DilationResult dilate(std::span<const float> values,
                      std::span<const float> mask, int n_lat, int n_lon,
                      const CressmanKernel& kernel, double epsilon) {
  check_plane(values, mask, n_lat, n_lon, kernel.side());

  std::vector<double> y_conv(values.size(), 0.0);
  std::vector<double> m_conv(values.size(), 0.0);

  // Scatter from observed cells only; masks are sparse, so this beats a
  // dense gather by orders of magnitude at production sizes.
  for (int qi = 0; qi < n_lat; ++qi) {
    for (int qj = 0; qj < n_lon; ++qj) {
      const std::size_t q = static_cast<std::size_t>(qi) * n_lon + qj;
      if (mask[q] == 0.0f) continue;
      const double y = values[q];
      for (int di = kernel.min_offset; di <= kernel.max_offset; ++di) {
        const int pi = qi - di;
        if (pi < 0 || pi >= n_lat) continue;  // zero padding past the poles
        const std::size_t row = static_cast<std::size_t>(pi) * n_lon;
        for (int dj = kernel.min_offset; dj <= kernel.max_offset; ++dj) {
          const double w = kernel.at(di, dj);
          if (w == 0.0) continue;
          int pj = qj - dj;
          if (pj < 0) pj += n_lon;  // periodic longitude
          else if (pj >= n_lon) pj -= n_lon;
          y_conv[row + pj] += w * y;
          m_conv[row + pj] += w;
        }
      }
    }
  }
  return finish(values, mask, y_conv, m_conv, epsilon);
}

DilationResult brute_force_fill(std::span<const float> values,
                                std::span<const float> mask, int n_lat,
                                int n_lon, int radius, double epsilon,
                                bool symmetric) {
  const int min_off = symmetric ? -radius : 1 - radius;
  const int max_off = radius;
  check_plane(values, mask, n_lat, n_lon, max_off - min_off + 1);
  const double r2 = static_cast<double>(radius) * radius;

  std::vector<double> y_conv(values.size(), 0.0);
  std::vector<double> m_conv(values.size(), 0.0);
  for (int pi = 0; pi < n_lat; ++pi) {
    for (int pj = 0; pj < n_lon; ++pj) {
      const std::size_t p = static_cast<std::size_t>(pi) * n_lon + pj;
      double num = 0.0, den = 0.0;
      for (int di = min_off; di <= max_off; ++di) {
        const int qi = pi + di;
        if (qi < 0 || qi >= n_lat) continue;
        for (int dj = min_off; dj <= max_off; ++dj) {
          const double d2 = static_cast<double>(di) * di +
                            static_cast<double>(dj) * dj;
          if (d2 >= r2) continue;
          int qj = pj + dj;
          if (qj < 0) qj += n_lon;
          else if (qj >= n_lon) qj -= n_lon;
          const std::size_t q = static_cast<std::size_t>(qi) * n_lon + qj;
          if (mask[q] == 0.0f) continue;
          const double w = cressman_weight(d2, r2);
          num += w * values[q];
          den += w;
        }
      }
      y_conv[p] = num;
      m_conv[p] = den;
    }
  }
  return finish(values, mask, y_conv, m_conv, epsilon);
}

GriddedObsTensor dilate_tensor(const GriddedObsTensor& input,
                               const CressmanKernel& kernel, double epsilon,
                               int threads) {
  GriddedObsTensor out(input.grid(), input.n_time(), input.channels(),
                       input.window_start(), input.window_hours());
  const std::size_t plane = input.grid().cells();
  const int n_planes = input.n_time() * input.n_channels();

  const auto work = [&](int plane_idx) {
    const std::size_t off = static_cast<std::size_t>(plane_idx) * plane;
    DilationResult r = dilate(
        std::span<const float>(input.values).subspan(off, plane),
        std::span<const float>(input.mask).subspan(off, plane),
        input.grid().n_lat, input.grid().n_lon, kernel, epsilon);
    for (std::size_t k = 0; k < plane; ++k) {
      out.values[off + k] = static_cast<float>(r.values[k]);
      out.mask[off + k] = r.mask[k];
      out.confidence[off + k] = static_cast<float>(r.confidence[k]);
    }
  };

  if (threads <= 1 || n_planes <= 1) {
    for (int p = 0; p < n_planes; ++p) work(p);
    return out;
  }
  std::vector<std::thread> pool;
  const int n_workers = std::min(threads, n_planes);
  std::atomic<int> next{0};
  for (int t = 0; t < n_workers; ++t) {
    pool.emplace_back([&]() {
      for (int p = next.fetch_add(1); p < n_planes; p = next.fetch_add(1)) {
        work(p);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace wxda
