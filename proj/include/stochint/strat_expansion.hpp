#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "stochint/ito_expansion.hpp"

namespace stochint {

/// Truncated expansion of an iterated Stratonovich integral: the plain
/// product series sum_{j <= p} C_{j_k...j_1} prod_l zeta_{j_l}^{(i_l)},
/// no indicator corrections.
struct StratTruncation {
  std::shared_ptr<const CoefficientTensor> tensor;
  NoiseIndexVector noise;
  int p;

  StratTruncation(std::shared_ptr<const CoefficientTensor> t, NoiseIndexVector n, int order)
      : tensor(std::move(t)), noise(std::move(n)), p(order) {
    detail::validate_truncation("StratTruncation", *tensor, noise, p);
  }
};

/// Same deterministic accumulation order as eval_ito, so the difference of
/// the two evaluations reproduces the indicator terms to rounding.
inline double eval_strat(const StratTruncation& tr, const GaussianMatrix& zeta) {
  detail::validate_zeta("eval_strat", *tr.tensor, tr.noise, tr.p, zeta);
  const int k = tr.noise.k();
  const std::vector<double>& C = tr.tensor->values();
  const double* zrow[5];
  for (int l = 0; l < k; ++l) zrow[l] = zeta.row(tr.noise[l]);

  detail::CompensatedSum acc;
  detail::TupleWalker w(k, tr.p, tr.tensor->p());
  do {
    const double c = C[w.index()];
    if (c == 0.0) continue;
    double prod = 1.0;
    for (int l = 0; l < k; ++l) prod *= zrow[l][w.at(l)];
    acc.add(c * prod);
  } while (w.advance());
  return acc.value();
}

/// Which stated convergence condition covers a Stratonovich expansion
/// request. Requests outside the stated coverage still evaluate; the report
/// is informational (general validity is conjectured and can be probed
/// against the Monte Carlo oracle).
struct ValidityReport {
  bool covered = false;
  std::vector<std::string> rules;  // every stated condition that applies
  std::string note;
};

inline ValidityReport validity_conditions(const NoiseIndexVector& noise,
                                          const std::vector<int>& weights,
                                          [[maybe_unused]] BasisKind basis = BasisKind::Legendre) {
  const int k = noise.k();
  if (static_cast<int>(weights.size()) != k)
    throw std::invalid_argument("validity_conditions: need one weight exponent per level");
  bool unit = true;
  for (int a : weights) unit &= (a == 0);
  bool nonzero = !noise.any_zero();

  ValidityReport r;
  const auto cover = [&r](std::string rule) {
    r.rules.push_back(std::move(rule));
    r.covered = true;
  };

  switch (k) {
    case 1:
      cover("k=1: Ito and Stratonovich expansions coincide");
      break;
    case 2:
      // monomial weights are smooth; zero indices allowed
      cover("k=2: continuously differentiable weights, unconditional");
      break;
    case 3: {
      if (!nonzero) break;  // stated results require nonzero indices at k=3
      cover("k=3: smooth weights, unconditional in the indices");
      const bool d12 = noise[0] != noise[1], d13 = noise[0] != noise[2], d23 = noise[1] != noise[2];
      if (d12 && d13 && d23) cover("k=3: all indices distinct");
      if (!d12 && d13 && weights[0] == weights[1])
        cover("k=3: i1=i2 != i3 with equal first two weights");
      if (!d23 && d12 && weights[1] == weights[2])
        cover("k=3: i1 != i2=i3 with equal last two weights");
      if (weights[0] == weights[1] && weights[1] == weights[2])
        cover("k=3: equal weights, any nonzero indices");
      break;
    }
    case 4:
      if (unit) cover("k=4: unit weights, unconditional (indices may be 0)");
      break;
    case 5:
      if (unit) cover("k=5: unit weights, unconditional (indices may be 0)");
      break;
    default:
      break;
  }
  if (!r.covered)
    r.note = "not covered by a stated condition; expansion evaluates anyway "
             "(conjectured valid, testable against the brute-force oracle)";
  return r;
}

}  // namespace stochint
