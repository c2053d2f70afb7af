#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stochint/basis.hpp"
#include "stochint/detail/cheb_series.hpp"
#include "stochint/detail/kahan.hpp"
#include "stochint/detail/parallel.hpp"
#include "stochint/detail/trig_series.hpp"
#include "stochint/kernel_spec.hpp"

namespace stochint {

enum class Normalization { UnitInterval, Absolute };

inline const char* to_string(Normalization n) {
  return n == Normalization::Absolute ? "absolute" : "unit_interval";
}

namespace detail {

// Unit-interval basis functions. phi_j on [t,T] at t + u*D equals
// D^{-1/2} * phihat_j(u); the D^{k/2} factor is applied once at the end.
inline ChebSeries legendre_unit_series(int j) {
  ChebSeries s = legendre_cheb(j);
  s.scale(std::sqrt(2.0 * j + 1.0));
  return s;
}

// Weight (t - s)^alpha restricted to the unit interval: (-u)^alpha.
inline Poly unit_weight_poly(int alpha) {
  Poly p;
  p.c.assign(static_cast<std::size_t>(alpha) + 1, 0.0);
  p.c[static_cast<std::size_t>(alpha)] = (alpha % 2 == 0) ? 1.0 : -1.0;
  return p;
}

inline ChebSeries unit_weight_cheb(int alpha) {
  ChebSeries s = upow_cheb(alpha);
  if (alpha % 2 == 1) s.scale(-1.0);
  return s;
}

// One nesting level of the Legendre path: I -> int_0^u phihat_j * w * I.
inline ChebSeries legendre_level(const ChebSeries& phi, const ChebSeries& w,
                                 const ChebSeries& inner) {
  return (phi * w * inner).antiderivative_from_zero();
}

inline TrigSeries trig_apply_basis(const TrigSeries& f, int j) {
  if (j == 0) return f;
  const std::size_t r = static_cast<std::size_t>((j + 1) / 2);
  TrigSeries g = (j % 2 == 1) ? f.times_sin(r) : f.times_cos(r);
  return g.times_poly(Poly::constant(std::numbers::sqrt2));
}

inline TrigSeries trig_level(int j, const Poly& w, const TrigSeries& inner) {
  TrigSeries f = inner.times_poly(w);
  return trig_apply_basis(f, j).antiderivative_from_zero();
}

}  // namespace detail

/// Fourier coefficient C_{j_k...j_1} of the simplex kernel:
/// the nested integral int_t^T phi_{j_k} psi_k ... int_t^{t_2} phi_{j_1} psi_1.
/// Closed-form nested integration on the unit interval (polynomial algebra
/// for Legendre, poly x trig algebra for the trigonometric system); the
/// multi-index is passed in nesting order (j_1, ..., j_k).
inline double coefficient(const KernelSpec& spec, const BasisSystem& basis,
                          std::span<const int> j) {
  if (static_cast<int>(j.size()) != spec.k())
    throw std::invalid_argument("coefficient: multi-index length must equal k");
  if (!(basis.interval() == spec.interval()))
    throw std::invalid_argument("coefficient: basis and kernel intervals differ");
  for (int v : j)
    if (v < 0) throw std::invalid_argument("coefficient: indices must be >= 0");

  double unit;
  if (basis.kind() == BasisKind::Legendre) {
    detail::ChebSeries acc = detail::ChebSeries::constant(1.0);
    for (int l = 0; l < spec.k(); ++l)
      acc = detail::legendre_level(detail::legendre_unit_series(j[l]),
                                   detail::unit_weight_cheb(spec.weights()[l]), acc);
    unit = acc.eval_at_one();
  } else {
    detail::TrigSeries acc = detail::TrigSeries::constant(1.0);
    for (int l = 0; l < spec.k(); ++l)
      acc = detail::trig_level(j[l], detail::unit_weight_poly(spec.weights()[l]), acc);
    unit = acc.eval_at_one();
  }
  return spec.absolute_factor() * unit;
}

/// Dense tensor of coefficients for all multi-indices with entries <= p.
/// Storage is j_1-fastest: index = sum_l j_l (p+1)^{l-1}. The conventional
/// subscript C_{j_k...j_1} reads this tuple right to left.
class CoefficientTensor {
  KernelSpec spec_;
  BasisKind basis_;
  int p_;
  Normalization norm_;
  std::vector<double> values_;

 public:
  CoefficientTensor(KernelSpec spec, BasisKind basis, int p, Normalization norm,
                    std::vector<double> values)
      : spec_(std::move(spec)), basis_(basis), p_(p), norm_(norm), values_(std::move(values)) {
    std::size_t expect = 1;
    for (int l = 0; l < spec_.k(); ++l) expect *= static_cast<std::size_t>(p_ + 1);
    if (p_ < 0 || values_.size() != expect)
      throw std::invalid_argument("CoefficientTensor: values size does not match (p+1)^k");
  }

  const KernelSpec& spec() const { return spec_; }
  BasisKind basis_kind() const { return basis_; }
  int p() const { return p_; }
  int k() const { return spec_.k(); }
  Normalization normalization() const { return norm_; }
  const std::vector<double>& values() const { return values_; }

  std::size_t index_of(std::span<const int> j) const {
    if (static_cast<int>(j.size()) != spec_.k())
      throw std::invalid_argument("CoefficientTensor: multi-index length must equal k");
    std::size_t idx = 0, stride = 1;
    for (int l = 0; l < spec_.k(); ++l) {
      if (j[l] < 0 || j[l] > p_)
        throw std::out_of_range("CoefficientTensor: index exceeds truncation order");
      idx += static_cast<std::size_t>(j[l]) * stride;
      stride *= static_cast<std::size_t>(p_ + 1);
    }
    return idx;
  }

  double at(std::span<const int> j) const { return values_[index_of(j)]; }
  double at(std::initializer_list<int> j) const { return at(std::span<const int>(j.begin(), j.size())); }

  /// Parseval partial sum over the sub-box with all entries <= q.
  double sum_squares(int q) const {
    if (q < 0 || q > p_) throw std::out_of_range("sum_squares: q must be in [0, p]");
    detail::CompensatedSum s;
    std::vector<int> j(static_cast<std::size_t>(spec_.k()), 0);
    for (;;) {
      const double c = values_[index_of(j)];
      s.add(c * c);
      int l = 0;
      while (l < spec_.k() && ++j[static_cast<std::size_t>(l)] > q) j[static_cast<std::size_t>(l++)] = 0;
      if (l == spec_.k()) break;
    }
    return s.value();
  }

  CoefficientTensor with_normalization(Normalization target) const {
    if (target == norm_) return *this;
    const double f = spec_.absolute_factor();
    const double scale = target == Normalization::Absolute ? f : 1.0 / f;
    std::vector<double> v = values_;
    for (double& x : v) x *= scale;
    return CoefficientTensor(spec_, basis_, p_, target, std::move(v));
  }
};

inline constexpr std::size_t kDefaultTensorBudget = 10'000'000;

/// Builds the full tensor, sharing inner antiderivatives across common
/// multi-index prefixes. Deterministic: entries are pure functions of
/// (spec, basis, p), independent of the thread partition.
inline CoefficientTensor build_tensor(const KernelSpec& spec, const BasisSystem& basis,
                                      int p, Normalization norm = Normalization::Absolute,
                                      std::size_t max_entries = kDefaultTensorBudget,
                                      int threads = 0) {
  if (p < 0) throw std::invalid_argument("build_tensor: p must be >= 0");
  if (!(basis.interval() == spec.interval()))
    throw std::invalid_argument("build_tensor: basis and kernel intervals differ");
  std::size_t total = 1;
  for (int l = 0; l < spec.k(); ++l) {
    total *= static_cast<std::size_t>(p + 1);
    if (total > max_entries)
      throw std::length_error("build_tensor: tensor would need " +
                              std::to_string(static_cast<std::size_t>(std::pow(p + 1.0, spec.k()))) +
                              " entries, budget is " + std::to_string(max_entries));
  }

  const int k = spec.k();
  const double scale = norm == Normalization::Absolute ? spec.absolute_factor() : 1.0;
  std::vector<double> values(total);

  if (basis.kind() == BasisKind::Legendre) {
    std::vector<detail::ChebSeries> phi, w;
    phi.reserve(static_cast<std::size_t>(p) + 1);
    for (int j = 0; j <= p; ++j) phi.push_back(detail::legendre_unit_series(j));
    for (int l = 0; l < k; ++l) w.push_back(detail::unit_weight_cheb(spec.weights()[l]));

    // recursion over levels, innermost (j_1) first
    const std::function<void(int, const detail::ChebSeries&, std::size_t, std::size_t, int, int)> fill =
        [&](int level, const detail::ChebSeries& inner, std::size_t base, std::size_t stride,
            int jlo, int jhi) {
          for (int j = jlo; j < jhi; ++j) {
            detail::ChebSeries acc = detail::legendre_level(phi[static_cast<std::size_t>(j)],
                                                            w[static_cast<std::size_t>(level)], inner);
            const std::size_t idx = base + static_cast<std::size_t>(j) * stride;
            if (level + 1 == k)
              values[idx] = scale * acc.eval_at_one();
            else
              fill(level + 1, acc, idx, stride * static_cast<std::size_t>(p + 1), 0, p + 1);
          }
        };
    detail::parallel_for(static_cast<std::size_t>(p) + 1, total >= 4096 ? threads : 1,
                         [&](std::size_t lo, std::size_t hi) {
                           fill(0, detail::ChebSeries::constant(1.0), 0, 1,
                                static_cast<int>(lo), static_cast<int>(hi));
                         });
  } else {
    std::vector<detail::Poly> w;
    for (int l = 0; l < k; ++l) w.push_back(detail::unit_weight_poly(spec.weights()[l]));
    const std::function<void(int, const detail::TrigSeries&, std::size_t, std::size_t, int, int)> fill =
        [&](int level, const detail::TrigSeries& inner, std::size_t base, std::size_t stride,
            int jlo, int jhi) {
          for (int j = jlo; j < jhi; ++j) {
            detail::TrigSeries acc = detail::trig_level(j, w[static_cast<std::size_t>(level)], inner);
            const std::size_t idx = base + static_cast<std::size_t>(j) * stride;
            if (level + 1 == k)
              values[idx] = scale * acc.eval_at_one();
            else
              fill(level + 1, acc, idx, stride * static_cast<std::size_t>(p + 1), 0, p + 1);
          }
        };
    detail::parallel_for(static_cast<std::size_t>(p) + 1, total >= 4096 ? threads : 1,
                         [&](std::size_t lo, std::size_t hi) {
                           fill(0, detail::TrigSeries::constant(1.0), 0, 1,
                                static_cast<int>(lo), static_cast<int>(hi));
                         });
  }
  return CoefficientTensor(spec, basis.kind(), p, norm, std::move(values));
}

}  // namespace stochint
