#pragma once

#include <algorithm>
#include <cmath>

namespace srgraph {

inline constexpr double kRelativeTolerance = 1e-9;
inline constexpr double kAbsoluteTolerance = 1e-12;

// "Exact" equality for floating-point results: relative 1e-9 with an absolute
// floor of 1e-12.
inline bool nearly_equal(double a, double b) {
  if (a == b) return true;
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= std::max(kAbsoluteTolerance, kRelativeTolerance * scale);
}

// Error-free transformation: a + b == sum + err exactly.
struct TwoSum {
  double sum;
  double err;
};

inline TwoSum two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace srgraph
