#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "stochint/detail/gauss.hpp"
#include "stochint/interval.hpp"

namespace stochint {

enum class BasisKind { Legendre, Trigonometric };

inline const char* to_string(BasisKind k) {
  return k == BasisKind::Legendre ? "legendre" : "trigonometric";
}

/// Complete orthonormal system {phi_j} on [t, T].
///
/// Legendre:       phi_j(x) = sqrt((2j+1)/D) P_j(2(x-t)/D - 1)
/// Trigonometric:  phi_0 = 1/sqrt(D),
///                 phi_{2r-1}(x) = sqrt(2/D) sin(2 pi r (x-t)/D),
///                 phi_{2r}(x)   = sqrt(2/D) cos(2 pi r (x-t)/D),
/// with D = T - t. Evaluation, antiderivatives and inner products are
/// closed-form (Legendre inner products use a Gauss rule that is exact for
/// the polynomial degrees involved).
class BasisSystem {
  BasisKind kind_;
  Interval iv_;

  // Points within 1e-12 * D outside [t, T] are clamped; further out is a
  // domain error.
  double normalized(double x) const {
    const double d = iv_.delta();
    double u = (x - iv_.t()) / d;
    const double tol = 1e-12;
    if (u < 0.0 || u > 1.0) {
      if (u < -tol || u > 1.0 + tol)
        throw std::domain_error("BasisSystem: point " + std::to_string(x) +
                                " outside [" + std::to_string(iv_.t()) + ", " +
                                std::to_string(iv_.T()) + "]");
      u = u < 0.0 ? 0.0 : 1.0;
    }
    return u;
  }

  static double legendre_p(int j, double z) {
    if (j == 0) return 1.0;
    double p0 = 1.0, p1 = z;
    for (int n = 1; n < j; ++n) {
      const double p2 = ((2.0 * n + 1.0) * z * p1 - n * p0) / (n + 1.0);
      p0 = p1;
      p1 = p2;
    }
    return p1;
  }

 public:
  BasisSystem(BasisKind kind, Interval interval) : kind_(kind), iv_(interval) {}

  BasisKind kind() const { return kind_; }
  const Interval& interval() const { return iv_; }

  /// phi_j(x).
  double eval(int j, double x) const {
    if (j < 0) throw std::invalid_argument("BasisSystem::eval: j must be >= 0");
    const double u = normalized(x);
    const double d = iv_.delta();
    if (kind_ == BasisKind::Legendre)
      return std::sqrt((2.0 * j + 1.0) / d) * legendre_p(j, 2.0 * u - 1.0);
    if (j == 0) return 1.0 / std::sqrt(d);
    const int r = (j + 1) / 2;
    const double a = 2.0 * std::numbers::pi * r * u;
    return std::sqrt(2.0 / d) * (j % 2 == 1 ? std::sin(a) : std::cos(a));
  }

  /// int_t^s phi_j(x) dx, closed form.
  double antiderivative(int j, double s) const {
    if (j < 0) throw std::invalid_argument("BasisSystem::antiderivative: j must be >= 0");
    const double u = normalized(s);
    const double d = iv_.delta();
    if (j == 0) return std::sqrt(d) * u;
    if (kind_ == BasisKind::Legendre) {
      const double z = 2.0 * u - 1.0;
      return 0.5 * std::sqrt(d) * (legendre_p(j + 1, z) - legendre_p(j - 1, z)) /
             std::sqrt(2.0 * j + 1.0);
    }
    const int r = (j + 1) / 2;
    const double a = 2.0 * std::numbers::pi * r * u;
    const double c = std::sqrt(2.0 * d) / (2.0 * std::numbers::pi * r);
    return c * (j % 2 == 1 ? 1.0 - std::cos(a) : std::sin(a));
  }

  /// <phi_i, phi_j> on [t, T].
  double inner_product(int i, int j) const {
    if (i < 0 || j < 0) throw std::invalid_argument("BasisSystem::inner_product: indices must be >= 0");
    if (kind_ == BasisKind::Legendre) {
      // exact for i + j <= 127
      static const detail::GaussRule rule = detail::gauss_legendre(64);
      const double d = iv_.delta();
      double s = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double x = iv_.t() + 0.5 * d * (rule.nodes[q] + 1.0);
        s += rule.weights[q] * eval(i, x) * eval(j, x);
      }
      return 0.5 * d * s;
    }
    return trig_inner(i, j);
  }

 private:
  // Product-to-sum closed form on the unit interval; the interval length
  // cancels against the normalization.
  static double int_cos(int n) {  // int_0^1 cos(2 pi n u) du
    if (n == 0) return 1.0;
    const double w = 2.0 * std::numbers::pi * n;
    return std::sin(w) / w;
  }
  static double int_sin(int n) {  // int_0^1 sin(2 pi n u) du, odd in n
    if (n == 0) return 0.0;
    const double w = 2.0 * std::numbers::pi * n;
    return (1.0 - std::cos(w)) / w;
  }

  double trig_inner(int i, int j) const {
    if (i > j) std::swap(i, j);
    const int ri = (i + 1) / 2, rj = (j + 1) / 2;
    const bool si = i % 2 == 1, sj = j % 2 == 1;  // sine component?
    if (i == 0 && j == 0) return 1.0;
    if (i == 0) return std::numbers::sqrt2 * (sj ? int_sin(rj) : int_cos(rj));
    if (si && sj) return int_cos(ri - rj) - int_cos(ri + rj);
    if (!si && !sj) return int_cos(ri - rj) + int_cos(ri + rj);
    // one sine, one cosine
    const int rs = si ? ri : rj;  // sine frequency
    const int rc = si ? rj : ri;
    return int_sin(rs + rc) + int_sin(rs - rc);
  }
};

}  // namespace stochint
