#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include <json.hpp>

#include "stochint/coefficients.hpp"

namespace stochint {

/// Squared L2 norm of the simplex kernel, I_k = int K^2 over [t,T]^k.
/// Unit weights give D^k / k!; monomial weights reduce to a closed-form
/// simplex moment: D^{k + 2 sum(a)} / prod_l (2(a_1+...+a_l) + l).
inline double kernel_norm(const KernelSpec& spec) {
  const double d = spec.interval().delta();
  double denom = 1.0;
  int cum = 0;
  for (int l = 0; l < spec.k(); ++l) {
    cum += 2 * spec.weights()[static_cast<std::size_t>(l)];
    denom *= static_cast<double>(cum + l + 1);
  }
  return std::pow(d, spec.k() + 2 * spec.weight_sum()) / denom;
}

/// Mean-square error bound of the order-q Ito truncation:
/// k! (I_k - sum_{j <= q} C^2). Valid for nonzero indices on any interval,
/// and for mixed indices when T - t < 1.
inline double bound_qq4(const CoefficientTensor& tensor, int q) {
  const CoefficientTensor* t = &tensor;
  CoefficientTensor abs_t = tensor;
  if (tensor.normalization() != Normalization::Absolute) {
    abs_t = tensor.with_normalization(Normalization::Absolute);
    t = &abs_t;
  }
  double kfact = 1.0;
  for (int l = 2; l <= t->k(); ++l) kfact *= l;
  return kfact * (kernel_norm(t->spec()) - t->sum_squares(q));
}

/// Exact mean-square error of the order-q double-integral approximation
/// (Legendre, unit weights, distinct nonzero indices):
/// D^2/2 sum_{i>q} 1/(4i^2-1), telescoped to D^2 / (4(2q+1)).
inline double exact_e11(int q, const Interval& iv) {
  if (q < 0) throw std::invalid_argument("exact_e11: q must be >= 0");
  const double d = iv.delta();
  return d * d / (4.0 * (2.0 * q + 1.0));
}

/// Integral-comparison form of the same tail, (D^2/8) ln((2q+1)/(2q-1));
/// an upper bound on exact_e11 for q >= 1.
inline double e11_log_bound(int q, const Interval& iv) {
  if (q < 1) throw std::invalid_argument("e11_log_bound: defined for q >= 1");
  const double d = iv.delta();
  return d * d / 8.0 * std::log((2.0 * q + 1.0) / (2.0 * q - 1.0));
}

struct ErrorReport {
  int k = 0;
  int q = 0;
  BasisKind basis = BasisKind::Legendre;
  double t = 0.0;
  double T = 0.0;
  double i_k = 0.0;           // kernel norm
  double parseval_sum = 0.0;  // sum_{j <= q} C^2
  double bound = 0.0;         // k! (I_k - parseval_sum)
  std::optional<double> exact_double_error;  // k = 2, Legendre, unit weights
  std::optional<double> scaling_constant;    // exact_double_error / D^2
  std::string bound_regime;
};

inline ErrorReport make_error_report(const CoefficientTensor& tensor, int q) {
  ErrorReport r;
  r.k = tensor.k();
  r.q = q;
  r.basis = tensor.basis_kind();
  const Interval& iv = tensor.spec().interval();
  r.t = iv.t();
  r.T = iv.T();
  r.i_k = kernel_norm(tensor.spec());
  r.parseval_sum = tensor.with_normalization(Normalization::Absolute).sum_squares(q);
  r.bound = bound_qq4(tensor, q);
  if (r.k == 2 && r.basis == BasisKind::Legendre && tensor.spec().unit_psi()) {
    r.exact_double_error = exact_e11(q, iv);
    r.scaling_constant = *r.exact_double_error / (iv.delta() * iv.delta());
  }
  r.bound_regime = iv.delta() < 1.0
                       ? "bound valid for all index patterns (T-t < 1)"
                       : "bound valid for nonzero indices; not asserted for mixed "
                         "zero/nonzero indices with T-t >= 1";
  return r;
}

inline nlohmann::json to_json(const ErrorReport& r) {
  nlohmann::json j{{"k", r.k},
                   {"q", r.q},
                   {"basis", to_string(r.basis)},
                   {"t", r.t},
                   {"T", r.T},
                   {"kernel_norm", r.i_k},
                   {"parseval_sum", r.parseval_sum},
                   {"bound", r.bound},
                   {"bound_regime", r.bound_regime}};
  if (r.exact_double_error) j["exact_double_error"] = *r.exact_double_error;
  if (r.scaling_constant) j["scaling_constant"] = *r.scaling_constant;
  return j;
}

inline std::string format_table(const ErrorReport& r) {
  char buf[256];
  std::string out;
  const auto row = [&](const char* name, double v) {
    std::snprintf(buf, sizeof buf, "  %-18s %.12g\n", name, v);
    out += buf;
  };
  std::snprintf(buf, sizeof buf, "error report: k=%d q=%d basis=%s [t,T]=[%g, %g]\n", r.k, r.q,
                to_string(r.basis), r.t, r.T);
  out += buf;
  row("kernel_norm", r.i_k);
  row("parseval_sum", r.parseval_sum);
  row("residual", r.i_k - r.parseval_sum);
  row("bound", r.bound);
  if (r.exact_double_error) row("exact_error", *r.exact_double_error);
  if (r.scaling_constant) row("scaling_const", *r.scaling_constant);
  out += "  " + r.bound_regime + "\n";
  return out;
}

}  // namespace stochint
