#pragma once

#include <cmath>
#include <cstddef>

namespace wxda {

// Neumaier-compensated accumulator. All grid-sized reductions use this with
// 64-bit terms so that sums over ~10^6 cells stay stable against the 1e-12
// tolerances the loss and metric contracts demand.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace wxda
