#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stochint/coefficients.hpp"
#include "stochint/detail/kahan.hpp"
#include "stochint/gaussians.hpp"

namespace stochint {

namespace detail {

// Positions (a < b) with i_a = i_b != 0: the only indicator factors that can
// fire in the transformed expansions (any zero index disables its position).
inline std::vector<std::pair<int, int>> fired_pairs(const NoiseIndexVector& noise) {
  std::vector<std::pair<int, int>> ps;
  for (int a = 0; a < noise.k(); ++a)
    for (int b = a + 1; b < noise.k(); ++b)
      if (noise[a] != 0 && noise[a] == noise[b]) ps.emplace_back(a, b);
  return ps;
}

struct DoublePair {
  int a, b, c, d;
};

inline std::vector<DoublePair> fired_double_pairs(const std::vector<std::pair<int, int>>& ps) {
  std::vector<DoublePair> ds;
  for (std::size_t x = 0; x < ps.size(); ++x)
    for (std::size_t y = x + 1; y < ps.size(); ++y) {
      const auto [a, b] = ps[x];
      const auto [c, d] = ps[y];
      if (a != c && a != d && b != c && b != d) ds.push_back({a, b, c, d});
    }
  return ds;
}

// Odometer over [0, p]^k walking the (possibly larger) tensor box.
class TupleWalker {
  int k_, p_;
  std::array<std::size_t, 5> stride_{};
  std::array<int, 5> j_{};
  std::size_t idx_ = 0;

 public:
  TupleWalker(int k, int p, int tensor_p) : k_(k), p_(p) {
    std::size_t s = 1;
    for (int l = 0; l < k; ++l) {
      stride_[static_cast<std::size_t>(l)] = s;
      s *= static_cast<std::size_t>(tensor_p + 1);
    }
  }
  const std::array<int, 5>& tuple() const { return j_; }
  int at(int l) const { return j_[static_cast<std::size_t>(l)]; }
  std::size_t index() const { return idx_; }
  bool advance() {
    for (int l = 0; l < k_; ++l) {
      if (++j_[static_cast<std::size_t>(l)] <= p_) {
        idx_ += stride_[static_cast<std::size_t>(l)];
        return true;
      }
      idx_ -= static_cast<std::size_t>(p_) * stride_[static_cast<std::size_t>(l)];
      j_[static_cast<std::size_t>(l)] = 0;
    }
    return false;
  }
};

}  // namespace detail

namespace detail {

inline void validate_truncation(const char* who, const CoefficientTensor& tensor,
                                const NoiseIndexVector& noise, int p) {
  if (tensor.k() != noise.k())
    throw std::invalid_argument(std::string(who) + ": tensor multiplicity differs from index count");
  if (p < 0 || p > tensor.p())
    throw std::invalid_argument(std::string(who) + ": truncation order exceeds tensor order");
  if (tensor.normalization() != Normalization::Absolute)
    throw std::invalid_argument(std::string(who) + ": tensor must use absolute normalization");
}

inline void validate_zeta(const char* who, const CoefficientTensor& tensor,
                          const NoiseIndexVector& noise, int p, const GaussianMatrix& z) {
  if (z.p() < p)
    throw std::invalid_argument(std::string(who) + ": zeta matrix order below truncation order");
  for (int l = 0; l < noise.k(); ++l)
    if (noise[l] > z.m())
      throw std::invalid_argument(std::string(who) + ": zeta matrix lacks component " +
                                  std::to_string(noise[l]));
  if (z.basis_kind() != tensor.basis_kind() || !(z.interval() == tensor.spec().interval()))
    throw std::invalid_argument(std::string(who) + ": zeta matrix basis/interval differ from tensor");
}

}  // namespace detail

/// Truncated expansion of an iterated Ito integral at equal limits p,
/// evaluated through the transformed forms for k = 1..5 (product of zetas
/// minus pair indicators, plus double-pair indicators for k >= 4).
struct ItoTruncation {
  std::shared_ptr<const CoefficientTensor> tensor;
  NoiseIndexVector noise;
  int p;

  ItoTruncation(std::shared_ptr<const CoefficientTensor> t, NoiseIndexVector n, int order)
      : tensor(std::move(t)), noise(std::move(n)), p(order) {
    detail::validate_truncation("ItoTruncation", *tensor, noise, p);
  }
};

inline double eval_ito(const ItoTruncation& tr, const GaussianMatrix& zeta) {
  detail::validate_zeta("eval_ito", *tr.tensor, tr.noise, tr.p, zeta);
  const int k = tr.noise.k();
  const auto pairs = detail::fired_pairs(tr.noise);
  const auto dpairs = detail::fired_double_pairs(pairs);
  const std::vector<double>& C = tr.tensor->values();

  const double* zrow[5];
  for (int l = 0; l < k; ++l) zrow[l] = zeta.row(tr.noise[l]);

  detail::CompensatedSum acc;
  detail::TupleWalker w(k, tr.p, tr.tensor->p());
  do {
    const double c = C[w.index()];
    if (c == 0.0) continue;
    double base = 1.0;
    for (int l = 0; l < k; ++l) base *= zrow[l][w.at(l)];
    double bracket = base;
    for (const auto& [a, b] : pairs) {
      if (w.at(a) != w.at(b)) continue;
      double rest = 1.0;
      for (int l = 0; l < k; ++l)
        if (l != a && l != b) rest *= zrow[l][w.at(l)];
      bracket -= rest;
    }
    for (const auto& d : dpairs) {
      if (w.at(d.a) != w.at(d.b) || w.at(d.c) != w.at(d.d)) continue;
      double rest = 1.0;
      for (int l = 0; l < k; ++l)
        if (l != d.a && l != d.b && l != d.c && l != d.d) rest *= zrow[l][w.at(l)];
      bracket += rest;
    }
    acc.add(c * bracket);
  } while (w.advance());
  return acc.value();
}

namespace detail {

// Polynomial in the independent N(0,1) variables zeta_j^{(i)}, i >= 1,
// stored as monomial -> coefficient. Deterministic row-0 entries are folded
// into the coefficients up front.
using GaussMonomial = std::vector<std::pair<std::pair<int, int>, int>>;  // ((i,j), exponent), sorted
using GaussPoly = std::map<GaussMonomial, double>;

inline double odd_double_factorial(int e) {  // (e-1)!! for even e
  double r = 1.0;
  for (int v = e - 1; v > 1; v -= 2) r *= v;
  return r;
}

inline double monomial_expectation(const GaussMonomial& m) {
  double r = 1.0;
  for (const auto& [var, e] : m) {
    if (e % 2 != 0) return 0.0;
    r *= odd_double_factorial(e);
  }
  return r;
}

inline double product_expectation(const GaussMonomial& x, const GaussMonomial& y) {
  double r = 1.0;
  std::size_t a = 0, b = 0;
  while (a < x.size() || b < y.size()) {
    int e;
    if (b == y.size() || (a < x.size() && x[a].first < y[b].first))
      e = x[a++].second;
    else if (a == x.size() || y[b].first < x[a].first)
      e = y[b++].second;
    else {
      e = x[a++].second + y[b++].second;
    }
    if (e % 2 != 0) return 0.0;
    r *= odd_double_factorial(e);
  }
  return r;
}

// Expands the truncated Ito expression into a Gaussian polynomial.
inline GaussPoly ito_gauss_poly(const ItoTruncation& tr, std::size_t term_budget) {
  const int k = tr.noise.k();
  std::size_t tuples = 1;
  for (int l = 0; l < k; ++l) tuples *= static_cast<std::size_t>(tr.p + 1);
  if (tuples > term_budget)
    throw std::length_error("second_moment_exact: " + std::to_string(tuples) +
                            " expansion terms exceed the term budget of " +
                            std::to_string(term_budget));

  const BasisSystem basis(tr.tensor->basis_kind(), tr.tensor->spec().interval());
  std::vector<double> row0(static_cast<std::size_t>(tr.p) + 1);
  for (int j = 0; j <= tr.p; ++j)
    row0[static_cast<std::size_t>(j)] = basis.antiderivative(j, basis.interval().T());

  const auto pairs = fired_pairs(tr.noise);
  const auto dpairs = fired_double_pairs(pairs);
  const std::vector<double>& C = tr.tensor->values();

  GaussPoly poly;
  const auto add_term = [&](double coeff, const std::array<int, 5>& j, unsigned skip_mask) {
    GaussMonomial m;
    for (int l = 0; l < k; ++l) {
      if (skip_mask & (1u << l)) continue;
      if (tr.noise[l] == 0) {
        coeff *= row0[static_cast<std::size_t>(j[static_cast<std::size_t>(l)])];
        continue;
      }
      m.emplace_back(std::pair<int, int>(tr.noise[l], j[static_cast<std::size_t>(l)]), 1);
    }
    std::sort(m.begin(), m.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    GaussMonomial merged;
    for (const auto& term : m) {
      if (!merged.empty() && merged.back().first == term.first)
        merged.back().second += term.second;
      else
        merged.push_back(term);
    }
    poly[merged] += coeff;
  };

  TupleWalker w(k, tr.p, tr.tensor->p());
  do {
    const double c = C[w.index()];
    if (c == 0.0) continue;
    add_term(c, w.tuple(), 0u);
    for (const auto& [a, b] : pairs)
      if (w.at(a) == w.at(b)) add_term(-c, w.tuple(), (1u << a) | (1u << b));
    for (const auto& d : dpairs)
      if (w.at(d.a) == w.at(d.b) && w.at(d.c) == w.at(d.d))
        add_term(c, w.tuple(), (1u << d.a) | (1u << d.b) | (1u << d.c) | (1u << d.d));
  } while (w.advance());
  return poly;
}

}  // namespace detail

inline constexpr std::size_t kDefaultTermBudget = 20'000;

/// E[(eval_ito)^2] by exhaustive pairing over the Gaussian monomials of the
/// truncated expression. Feasible for k <= 3 or small p; refuses above the
/// term budget.
inline double second_moment_exact(const ItoTruncation& tr,
                                  std::size_t term_budget = kDefaultTermBudget) {
  const detail::GaussPoly poly = detail::ito_gauss_poly(tr, term_budget);
  std::vector<std::pair<detail::GaussMonomial, double>> terms(poly.begin(), poly.end());
  detail::CompensatedSum s;
  for (std::size_t a = 0; a < terms.size(); ++a)
    for (std::size_t b = 0; b < terms.size(); ++b) {
      const double e = detail::product_expectation(terms[a].first, terms[b].first);
      if (e != 0.0) s.add(terms[a].second * terms[b].second * e);
    }
  return s.value();
}

/// E[eval_ito] from the same enumeration.
inline double expectation_exact(const ItoTruncation& tr,
                                std::size_t term_budget = kDefaultTermBudget) {
  const detail::GaussPoly poly = detail::ito_gauss_poly(tr, term_budget);
  detail::CompensatedSum s;
  for (const auto& [m, c] : poly) {
    const double e = detail::monomial_expectation(m);
    if (e != 0.0) s.add(c * e);
  }
  return s.value();
}

}  // namespace stochint
