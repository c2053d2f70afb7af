#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "stochint/detail/kahan.hpp"

namespace stochint::detail {

// Dense monomial polynomial, low degree only (weights and the by-products
// of integrating poly x trig terms by parts).
struct Poly {
  std::vector<double> c;  // c[d] * u^d

  static Poly zero() { return {}; }
  static Poly constant(double v) { return {{v}}; }
  bool is_zero() const {
    for (double v : c)
      if (v != 0.0) return false;
    return true;
  }
  Poly derivative() const {
    if (c.size() <= 1) return {};
    Poly r;
    r.c.resize(c.size() - 1);
    for (std::size_t d = 1; d < c.size(); ++d) r.c[d - 1] = c[d] * static_cast<double>(d);
    return r;
  }
  Poly integral_from_zero() const {
    Poly r;
    r.c.assign(c.size() + 1, 0.0);
    for (std::size_t d = 0; d < c.size(); ++d) r.c[d + 1] = c[d] / static_cast<double>(d + 1);
    return r;
  }
  double eval(double u) const {
    double s = 0.0;
    for (std::size_t d = c.size(); d-- > 0;) s = s * u + c[d];
    return s;
  }
  double at_zero() const { return c.empty() ? 0.0 : c[0]; }
  Poly scaled(double s) const {
    Poly r = *this;
    for (double& v : r.c) v *= s;
    return r;
  }
  void add_scaled(const Poly& o, double s) {
    if (o.c.size() > c.size()) c.resize(o.c.size(), 0.0);
    for (std::size_t d = 0; d < o.c.size(); ++d) c[d] += s * o.c[d];
  }
  Poly operator*(const Poly& o) const {
    if (c.empty() || o.c.empty()) return {};
    Poly r;
    r.c.assign(c.size() + o.c.size() - 1, 0.0);
    for (std::size_t a = 0; a < c.size(); ++a)
      for (std::size_t b = 0; b < o.c.size(); ++b) r.c[a + b] += c[a] * o.c[b];
    return r;
  }
};

// f(u) = sum_r [ P_r(u) cos(2 pi r u) + Q_r(u) sin(2 pi r u) ], u in [0,1].
// Closed under multiplication by the trigonometric basis functions, by
// polynomials, and under antiderivatives, which makes the nested simplex
// integrals of the trigonometric basis exactly representable.
class TrigSeries {
  std::vector<Poly> cosp_;  // index r >= 0
  std::vector<Poly> sinp_;  // index r >= 1 (slot 0 kept empty)

  Poly& cos_at(std::size_t r) {
    if (cosp_.size() <= r) cosp_.resize(r + 1);
    return cosp_[r];
  }
  Poly& sin_at(std::size_t r) {
    if (sinp_.size() <= r) sinp_.resize(r + 1);
    return sinp_[r];
  }

 public:
  TrigSeries() = default;
  static TrigSeries from_poly(Poly p) {
    TrigSeries s;
    s.cos_at(0) = std::move(p);
    return s;
  }
  static TrigSeries constant(double v) { return from_poly(Poly::constant(v)); }

  std::size_t max_freq() const {
    return (cosp_.size() > sinp_.size() ? cosp_.size() : sinp_.size());
  }

  TrigSeries times_poly(const Poly& w) const {
    TrigSeries r;
    for (std::size_t k = 0; k < cosp_.size(); ++k)
      if (!cosp_[k].is_zero()) r.cos_at(k) = cosp_[k] * w;
    for (std::size_t k = 1; k < sinp_.size(); ++k)
      if (!sinp_[k].is_zero()) r.sin_at(k) = sinp_[k] * w;
    return r;
  }

  // Multiply by cos(2 pi s u), s >= 1, via product-to-sum.
  TrigSeries times_cos(std::size_t s) const {
    TrigSeries r;
    for (std::size_t k = 0; k < cosp_.size(); ++k) {
      if (cosp_[k].is_zero()) continue;
      r.cos_at(k + s).add_scaled(cosp_[k], 0.5);
      r.cos_at(k >= s ? k - s : s - k).add_scaled(cosp_[k], 0.5);
    }
    for (std::size_t k = 1; k < sinp_.size(); ++k) {
      if (sinp_[k].is_zero()) continue;
      r.sin_at(k + s).add_scaled(sinp_[k], 0.5);
      if (k > s)
        r.sin_at(k - s).add_scaled(sinp_[k], 0.5);
      else if (s > k)
        r.sin_at(s - k).add_scaled(sinp_[k], -0.5);
    }
    return r;
  }

  // Multiply by sin(2 pi s u), s >= 1.
  TrigSeries times_sin(std::size_t s) const {
    TrigSeries r;
    for (std::size_t k = 0; k < cosp_.size(); ++k) {
      if (cosp_[k].is_zero()) continue;
      r.sin_at(k + s).add_scaled(cosp_[k], 0.5);
      if (s > k)
        r.sin_at(s - k).add_scaled(cosp_[k], 0.5);
      else if (k > s)
        r.sin_at(k - s).add_scaled(cosp_[k], -0.5);
    }
    for (std::size_t k = 1; k < sinp_.size(); ++k) {
      if (sinp_[k].is_zero()) continue;
      r.cos_at(k >= s ? k - s : s - k).add_scaled(sinp_[k], 0.5);
      r.cos_at(k + s).add_scaled(sinp_[k], -0.5);
    }
    return r;
  }

  // int_0^u f(v) dv, by parts until the polynomial factors are exhausted.
  TrigSeries antiderivative_from_zero() const {
    TrigSeries r;
    if (!cosp_.empty() && !cosp_[0].is_zero()) r.cos_at(0) = cosp_[0].integral_from_zero();
    for (std::size_t k = 1; k < cosp_.size(); ++k)
      if (!cosp_[k].is_zero()) r.accumulate_int_cos(k, cosp_[k], 1.0);
    for (std::size_t k = 1; k < sinp_.size(); ++k)
      if (!sinp_[k].is_zero()) r.accumulate_int_sin(k, sinp_[k], 1.0);
    return r;
  }

  // Endpoint u = 1: the trig arguments are exact multiples of 2 pi.
  double eval_at_one() const {
    CompensatedSum s;
    for (const Poly& p : cosp_) s.add(p.eval(1.0));
    return s.value();
  }

  double eval(double u) const {
    double s = !cosp_.empty() ? cosp_[0].eval(u) : 0.0;
    for (std::size_t k = 1; k < max_freq(); ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) * u;
      if (k < cosp_.size() && !cosp_[k].is_zero()) s += cosp_[k].eval(u) * std::cos(a);
      if (k < sinp_.size() && !sinp_[k].is_zero()) s += sinp_[k].eval(u) * std::sin(a);
    }
    return s;
  }

 private:
  // scale * int_0^u p(v) cos(w v) dv with w = 2 pi k.
  void accumulate_int_cos(std::size_t k, const Poly& p, double scale) {
    if (p.is_zero()) return;
    const double w = 2.0 * std::numbers::pi * static_cast<double>(k);
    sin_at(k).add_scaled(p, scale / w);
    const Poly dp = p.derivative();
    if (dp.is_zero()) return;
    cos_at(k).add_scaled(dp, scale / (w * w));
    cos_at(0).add_scaled(Poly::constant(dp.at_zero()), -scale / (w * w));
    accumulate_int_cos(k, dp.derivative(), -scale / (w * w));
  }

  // scale * int_0^u q(v) sin(w v) dv.
  void accumulate_int_sin(std::size_t k, const Poly& q, double scale) {
    if (q.is_zero()) return;
    const double w = 2.0 * std::numbers::pi * static_cast<double>(k);
    cos_at(k).add_scaled(q, -scale / w);
    cos_at(0).add_scaled(Poly::constant(q.at_zero()), scale / w);
    accumulate_int_cos(k, q.derivative(), scale / w);
  }
};

}  // namespace stochint::detail
