#pragma once

#include <stdexcept>
#include <string>

namespace stochint {

/// Integration interval [t, T] of the iterated stochastic integrals.
/// Degenerate intervals (T <= t) are rejected at construction.
class Interval {
  double t_;
  double T_;

 public:
  Interval(double t, double T) : t_(t), T_(T) {
    if (!(T > t))
      throw std::invalid_argument("Interval: requires T > t, got [" +
                                  std::to_string(t) + ", " + std::to_string(T) + "]");
  }

  double t() const { return t_; }
  double T() const { return T_; }
  double delta() const { return T_ - t_; }

  bool operator==(const Interval& o) const { return t_ == o.t_ && T_ == o.T_; }
};

}  // namespace stochint
