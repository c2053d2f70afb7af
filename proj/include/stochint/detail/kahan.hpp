#pragma once

#include <cmath>

namespace stochint::detail {

// Neumaier-compensated accumulator. Order of add() calls is part of the
// result contract: all summations in this library run in a fixed order so
// repeated runs are bit-identical.
class CompensatedSum {
  double sum_ = 0.0;
  double carry_ = 0.0;

 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }

  double value() const { return sum_ + carry_; }
};

}  // namespace stochint::detail
