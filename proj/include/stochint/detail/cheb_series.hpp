#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "stochint/detail/kahan.hpp"

namespace stochint::detail {

// Polynomial on u in [0,1] stored as a Chebyshev series in z = 2u - 1.
// All operations are finite linear algebra (no quadrature); the Chebyshev
// representation keeps coefficients O(max|f|), so nested simplex integrals
// stay accurate up to high polynomial degree where monomial coefficients
// of Legendre polynomials would overflow double precision.
class ChebSeries {
  std::vector<double> c_;

 public:
  ChebSeries() : c_(1, 0.0) {}
  explicit ChebSeries(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.assign(1, 0.0);
  }

  static ChebSeries constant(double v) { return ChebSeries({v}); }

  std::size_t degree() const { return c_.size() - 1; }
  const std::vector<double>& coeffs() const { return c_; }

  // z * f, via z*T_n = (T_{n+1} + T_{|n-1|}) / 2.
  ChebSeries times_z() const {
    std::vector<double> r(c_.size() + 1, 0.0);
    r[1] += c_[0];
    for (std::size_t n = 1; n < c_.size(); ++n) {
      r[n + 1] += 0.5 * c_[n];
      r[n - 1] += 0.5 * c_[n];
    }
    return ChebSeries(std::move(r));
  }

  ChebSeries operator*(const ChebSeries& o) const {
    std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t m = 0; m < c_.size(); ++m) {
      if (c_[m] == 0.0) continue;
      for (std::size_t n = 0; n < o.c_.size(); ++n) {
        const double h = 0.5 * c_[m] * o.c_[n];
        r[m + n] += h;
        r[m >= n ? m - n : n - m] += h;
      }
    }
    return ChebSeries(std::move(r));
  }

  ChebSeries& operator+=(const ChebSeries& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t n = 0; n < o.c_.size(); ++n) c_[n] += o.c_[n];
    return *this;
  }

  ChebSeries& scale(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }

  // F(u) = int_0^u f(v) dv; the 1/2 factor maps dz to du.
  ChebSeries antiderivative_from_zero() const {
    std::vector<double> b(c_.size() + 2, 0.0);
    b[1] += c_[0];
    if (c_.size() > 1) b[2] += c_[1] / 4.0;
    for (std::size_t n = 2; n < c_.size(); ++n) {
      b[n + 1] += c_[n] / (2.0 * (n + 1));
      b[n - 1] -= c_[n] / (2.0 * (n - 1));
    }
    for (double& v : b) v *= 0.5;
    // pin F = 0 at u = 0 (z = -1)
    double at0 = 0.0;
    for (std::size_t n = 1; n < b.size(); ++n) at0 += (n % 2 == 0) ? b[n] : -b[n];
    b[0] = -at0;
    return ChebSeries(std::move(b));
  }

  double eval_at_one() const {  // T_n(1) = 1
    CompensatedSum s;
    for (double v : c_) s.add(v);
    return s.value();
  }

  double eval(double u) const {  // Clenshaw in z
    const double z = 2.0 * u - 1.0;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t n = c_.size(); n-- > 1;) {
      const double b0 = 2.0 * z * b1 - b2 + c_[n];
      b2 = b1;
      b1 = b0;
    }
    return z * b1 - b2 + c_[0];
  }
};

// Chebyshev series of the Legendre polynomial P_j(z) via the three-term
// recurrence carried out in coefficient space.
inline ChebSeries legendre_cheb(int j) {
  ChebSeries pm1 = ChebSeries::constant(1.0);
  if (j == 0) return pm1;
  ChebSeries p = ChebSeries({0.0, 1.0});
  for (int n = 1; n < j; ++n) {
    ChebSeries next = p.times_z();
    next.scale((2.0 * n + 1.0) / (n + 1.0));
    ChebSeries tail = pm1;
    tail.scale(-static_cast<double>(n) / (n + 1.0));
    next += tail;
    pm1 = std::move(p);
    p = std::move(next);
  }
  return p;
}

// u^a as a Chebyshev series, u = (1 + z)/2.
inline ChebSeries upow_cheb(int a) {
  ChebSeries r = ChebSeries::constant(1.0);
  for (int i = 0; i < a; ++i) {
    ChebSeries zr = r.times_z();
    zr += r;
    zr.scale(0.5);
    r = std::move(zr);
  }
  return r;
}

}  // namespace stochint::detail
