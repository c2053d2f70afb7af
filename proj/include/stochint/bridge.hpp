#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochint/basis.hpp"
#include "stochint/strat_expansion.hpp"

namespace stochint {

/// Index tuples (s_r,...,s_1) of the Ito-Stratonovich correction sums:
/// s_j in 1..k-1, strictly separated (s_{j+1} > s_j + 1), grouped by the
/// pairing depth r = 1..floor(k/2). Tuples are stored ascending.
struct PairingSet {
  int k = 0;
  std::vector<std::vector<std::vector<int>>> by_r;  // by_r[r-1] -> tuples

  int max_depth() const { return static_cast<int>(by_r.size()); }
};

inline PairingSet enumerate_pairings(int k) {
  if (k < 1 || k > kMaxMultiplicity)
    throw std::invalid_argument("enumerate_pairings: multiplicity 1..5, got " + std::to_string(k));
  PairingSet ps;
  ps.k = k;
  ps.by_r.resize(static_cast<std::size_t>(k / 2));
  for (int r = 1; r <= k / 2; ++r) {
    auto& out = ps.by_r[static_cast<std::size_t>(r - 1)];
    std::vector<int> tuple(static_cast<std::size_t>(r));
    // lexicographic depth-first over s_1 < s_2 - 1 < ...
    const auto rec = [&](auto&& self, int pos, int lo) -> void {
      if (pos == r) {
        out.push_back(tuple);
        return;
      }
      for (int s = lo; s <= k - 1; ++s) {
        tuple[static_cast<std::size_t>(pos)] = s;
        self(self, pos + 1, s + 2);
      }
    };
    rec(rec, 0, 1);
  }
  return ps;
}

/// The 1/2^r conversion factor multiplying each depth-r correction term.
inline double pairing_weight(int r) { return std::ldexp(1.0, -r); }

struct BridgeTerm {
  std::string label;
  double value;
};

/// eval_strat - eval_ito on a shared tensor, index set and draw, plus the
/// per-term breakdown: the pair and double-pair indicator sums of the
/// transformed Ito forms, recomputed term by term. total and from_terms
/// agree to rounding by construction.
struct TruncationGap {
  double total = 0.0;
  double from_terms = 0.0;
  std::vector<BridgeTerm> terms;
};

inline TruncationGap truncation_gap(const ItoTruncation& ito, const StratTruncation& strat,
                                    const GaussianMatrix& zeta) {
  if (ito.tensor.get() != strat.tensor.get() || ito.p != strat.p ||
      ito.noise.indices() != strat.noise.indices())
    throw std::invalid_argument("truncation_gap: truncations must share tensor, indices and order");
  detail::validate_zeta("truncation_gap", *ito.tensor, ito.noise, ito.p, zeta);

  const int k = ito.noise.k();
  const auto pairs = detail::fired_pairs(ito.noise);
  const auto dpairs = detail::fired_double_pairs(pairs);
  const std::vector<double>& C = ito.tensor->values();
  const double* zrow[5];
  for (int l = 0; l < k; ++l) zrow[l] = zeta.row(ito.noise[l]);

  TruncationGap gap;
  gap.total = eval_strat(strat, zeta) - eval_ito(ito, zeta);

  detail::CompensatedSum sum_terms;
  const auto term_sum = [&](unsigned pair_mask, int a, int b, int c, int d) {
    detail::CompensatedSum s;
    detail::TupleWalker w(k, ito.p, ito.tensor->p());
    do {
      if (w.at(a) != w.at(b)) continue;
      if (c >= 0 && w.at(c) != w.at(d)) continue;
      const double coef = C[w.index()];
      if (coef == 0.0) continue;
      double rest = 1.0;
      for (int l = 0; l < k; ++l)
        if (!(pair_mask & (1u << l))) rest *= zrow[l][w.at(l)];
      s.add(coef * rest);
    } while (w.advance());
    return s.value();
  };

  for (const auto& [a, b] : pairs) {
    const double v = term_sum((1u << a) | (1u << b), a, b, -1, -1);
    gap.terms.push_back({"pair(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")", v});
    sum_terms.add(v);
  }
  for (const auto& d : dpairs) {
    const double v =
        term_sum((1u << d.a) | (1u << d.b) | (1u << d.c) | (1u << d.d), d.a, d.b, d.c, d.d);
    gap.terms.push_back({"pair(" + std::to_string(d.a + 1) + "," + std::to_string(d.b + 1) +
                             ")x pair(" + std::to_string(d.c + 1) + "," + std::to_string(d.d + 1) + ")",
                         -v});
    sum_terms.add(-v);
  }
  gap.from_terms = sum_terms.value();
  return gap;
}

/// Parseval deficit of the step-function expansion at order p:
/// (s - t) - sum_{j=0}^{p} (int_t^s phi_j)^2. Nonnegative, nonincreasing
/// in p, and vanishing as p grows.
inline double contraction_check(const BasisSystem& basis, int p, double s) {
  if (p < 0) throw std::invalid_argument("contraction_check: p must be >= 0");
  detail::CompensatedSum acc;
  acc.add(s - basis.interval().t());
  for (int j = 0; j <= p; ++j) {
    const double a = basis.antiderivative(j, s);
    acc.add(-a * a);
  }
  return acc.value();
}

}  // namespace stochint
