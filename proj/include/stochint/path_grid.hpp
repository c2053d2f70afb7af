#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "stochint/detail/rng.hpp"
#include "stochint/interval.hpp"

namespace stochint {

/// Uniform fine discretization of an m-dimensional Wiener process on [t, T]:
/// increments[i][n] ~ N(0, D/N), independent across components and steps.
/// Fully determined by (seed, path_id); regeneration is bit-identical.
class PathGrid {
  Interval iv_;
  int m_;
  int n_steps_;
  double dt_;
  std::uint64_t seed_;
  std::uint64_t path_id_;
  std::vector<double> inc_;  // [component-1][step]

 public:
  PathGrid(std::uint64_t seed, std::uint64_t path_id, int m, Interval interval, int n_steps)
      : iv_(interval), m_(m), n_steps_(n_steps), dt_(interval.delta() / n_steps),
        seed_(seed), path_id_(path_id) {
    if (m < 1) throw std::invalid_argument("PathGrid: need at least one Wiener component");
    if (n_steps < 1) throw std::invalid_argument("PathGrid: need at least one step");
    inc_.resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(n_steps));
    regenerate(seed, path_id);
  }

  /// Wraps externally supplied increments (row-major [component][step]).
  PathGrid(Interval interval, int m, int n_steps, std::vector<double> increments)
      : iv_(interval), m_(m), n_steps_(n_steps), dt_(interval.delta() / n_steps),
        seed_(0), path_id_(0), inc_(std::move(increments)) {
    if (m < 1) throw std::invalid_argument("PathGrid: need at least one Wiener component");
    if (n_steps < 1) throw std::invalid_argument("PathGrid: need at least one step");
    if (inc_.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(n_steps))
      throw std::invalid_argument("PathGrid: increments size must be m * n_steps");
  }

  void regenerate(std::uint64_t seed, std::uint64_t path_id) {
    seed_ = seed;
    path_id_ = path_id;
    const double sd = std::sqrt(dt_);
    for (int i = 1; i <= m_; ++i) {
      double* row = inc_.data() + static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_steps_);
      int n = 0;
      for (; n + 1 < n_steps_; n += 2) {
        const auto pr = detail::rng::normal_pair(detail::rng::derive_key(
            seed_, detail::rng::kTagPath, path_id_, static_cast<std::uint64_t>(i),
            static_cast<std::uint64_t>(n) >> 1));
        row[n] = sd * pr.first;
        row[n + 1] = sd * pr.second;
      }
      if (n < n_steps_)
        row[n] = sd * detail::rng::normal(seed_, detail::rng::kTagPath, path_id_,
                                          static_cast<std::uint64_t>(i),
                                          static_cast<std::uint64_t>(n));
    }
  }

  const Interval& interval() const { return iv_; }
  int components() const { return m_; }
  int n_steps() const { return n_steps_; }
  double dt() const { return dt_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t path_id() const { return path_id_; }

  /// Increment of component i (1..m) over step n.
  double increment(int i, int n) const {
    return inc_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_steps_) +
                static_cast<std::size_t>(n)];
  }

  const double* component_row(int i) const {
    return inc_.data() + static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_steps_);
  }

  /// Left endpoint of step n.
  double node(int n) const { return iv_.t() + dt_ * n; }

  double total_increment(int i) const {
    double s = 0.0;
    const double* row = component_row(i);
    for (int n = 0; n < n_steps_; ++n) s += row[n];
    return s;
  }
};

inline PathGrid simulate_path(std::uint64_t seed, std::uint64_t path_id, int m,
                              const Interval& interval, int n_steps) {
  return PathGrid(seed, path_id, m, interval, n_steps);
}

}  // namespace stochint
