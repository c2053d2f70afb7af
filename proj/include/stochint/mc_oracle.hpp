#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stochint/bridge.hpp"
#include "stochint/detail/parallel.hpp"
#include "stochint/gaussians.hpp"
#include "stochint/path_grid.hpp"

namespace stochint {

namespace detail {

// Left-point recursion for an iterated integral over the grid. tags[l] is
// the Wiener component of level l, 0 meaning dt. Levels update from the
// outside in so each uses the previous step's inner value.
inline double grid_iterated(const PathGrid& path, const std::vector<int>& tags) {
  const int depth = static_cast<int>(tags.size());
  double L[6] = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const double dt = path.dt();
  for (int n = 0; n < path.n_steps(); ++n) {
    for (int l = depth; l >= 1; --l) {
      const int tag = tags[static_cast<std::size_t>(l - 1)];
      const double dz = tag == 0 ? dt : path.increment(tag, n);
      L[l] += L[l - 1] * dz;
    }
  }
  return L[depth];
}

inline void validate_reference(const char* who, const PathGrid& path,
                               const NoiseIndexVector& noise) {
  if (noise.k() > kMaxMultiplicity)
    throw std::invalid_argument(std::string(who) + ": multiplicity above 5");
  for (int l = 0; l < noise.k(); ++l)
    if (noise[l] > path.components())
      throw std::invalid_argument(std::string(who) + ": path lacks component " +
                                  std::to_string(noise[l]));
}

}  // namespace detail

/// Grid reference for the iterated Ito integral (unit weights): nested
/// left-point sums. Discretization bias is O(N^{-1}) for the deterministic
/// levels and O(N^{-1/2}) rms for the stochastic ones.
inline double reference_ito(const PathGrid& path, const NoiseIndexVector& noise) {
  detail::validate_reference("reference_ito", path, noise);
  return detail::grid_iterated(path, noise.indices());
}

/// Grid reference for the iterated Stratonovich integral, built as the Ito
/// reference plus the correction sums: for each pairing depth r and each
/// strictly separated tuple, 2^{-r} times the grid value of the iterated
/// integral with the paired levels collapsed into a dt level, gated by the
/// coinciding-index indicators.
inline double reference_strat(const PathGrid& path, const NoiseIndexVector& noise) {
  detail::validate_reference("reference_strat", path, noise);
  double value = detail::grid_iterated(path, noise.indices());
  const PairingSet ps = enumerate_pairings(noise.k());
  for (int r = 1; r <= ps.max_depth(); ++r) {
    for (const std::vector<int>& tuple : ps.by_r[static_cast<std::size_t>(r - 1)]) {
      bool fires = true;
      for (int s : tuple)
        if (noise[s - 1] == 0 || noise[s - 1] != noise[s]) fires = false;
      if (!fires) continue;
      std::vector<int> tags = noise.indices();
      for (auto it = tuple.rbegin(); it != tuple.rend(); ++it) {
        const int s = *it;  // collapse levels s, s+1 (1-based) into one dt level
        tags.erase(tags.begin() + s);
        tags[static_cast<std::size_t>(s - 1)] = 0;
      }
      value += pairing_weight(r) * detail::grid_iterated(path, tags);
    }
  }
  return value;
}

enum class Convention { Ito, Stratonovich };

inline const char* to_string(Convention c) {
  return c == Convention::Ito ? "ito" : "strat";
}

/// A truncated expansion to be measured against its grid reference.
struct TruncationRequest {
  std::shared_ptr<const CoefficientTensor> tensor;
  NoiseIndexVector noise;
  int p;
  Convention convention;
};

struct MsErrorEstimate {
  double mean_sq = 0.0;
  double std_error = 0.0;
  long long n_paths = 0;
  int grid_steps = 0;
  std::string what;
};

struct McBudget {
  long long min_paths = 100;
  long long max_paths = 1'000'000;
  int max_steps = 1 << 14;
  unsigned long long max_path_steps = 1ULL << 32;
};

/// Mean-square error of the truncated expansion against the grid reference
/// over M independent paths. Deterministic for fixed (seed, M, N): paths are
/// counter-indexed and the reduction is a fixed-shape pairwise sum, so the
/// result is bit-identical for any thread count.
inline MsErrorEstimate measure_ms_error(std::uint64_t seed, long long M, int N,
                                        const TruncationRequest& req, int threads = 0,
                                        const McBudget& budget = {}) {
  if (M < budget.min_paths)
    throw std::invalid_argument("measure_ms_error: minimum " + std::to_string(budget.min_paths) +
                                " paths, got " + std::to_string(M));
  if (M > budget.max_paths || N < 1 || N > budget.max_steps ||
      static_cast<unsigned long long>(M) * static_cast<unsigned long long>(N) >
          budget.max_path_steps)
    throw std::length_error("measure_ms_error: M=" + std::to_string(M) + ", N=" + std::to_string(N) +
                            " exceeds the path-step budget");
  if (!req.tensor) throw std::invalid_argument("measure_ms_error: missing tensor");
  if (!req.tensor->spec().unit_psi())
    throw std::invalid_argument("measure_ms_error: grid references cover unit weights only");

  const Interval iv = req.tensor->spec().interval();
  const BasisSystem basis(req.tensor->basis_kind(), iv);
  int m = 1;
  for (int l = 0; l < req.noise.k(); ++l)
    if (req.noise[l] > m) m = req.noise[l];

  // phi_j at the grid nodes, shared across paths
  const double dt = iv.delta() / N;
  std::vector<double> table(static_cast<std::size_t>(req.p + 1) * static_cast<std::size_t>(N));
  for (int j = 0; j <= req.p; ++j)
    for (int n = 0; n < N; ++n)
      table[static_cast<std::size_t>(j) * static_cast<std::size_t>(N) + static_cast<std::size_t>(n)] =
          basis.eval(j, iv.t() + dt * n);

  const ItoTruncation ito_tr(req.tensor, req.noise, req.p);
  const StratTruncation strat_tr(req.tensor, req.noise, req.p);

  std::vector<double> errs(static_cast<std::size_t>(M));
  detail::parallel_for(static_cast<std::size_t>(M), threads, [&](std::size_t lo, std::size_t hi) {
    PathGrid path(seed, lo, m, iv, N);
    GaussianMatrix z(m, req.p, basis.kind(), iv, seed);
    for (std::size_t pid = lo; pid < hi; ++pid) {
      path.regenerate(seed, pid);
      detail::zeta_from_path_with_table(path, basis, req.p, table, z);
      double approx, ref;
      if (req.convention == Convention::Ito) {
        approx = eval_ito(ito_tr, z);
        ref = reference_ito(path, req.noise);
      } else {
        approx = eval_strat(strat_tr, z);
        ref = reference_strat(path, req.noise);
      }
      const double e = approx - ref;
      errs[pid] = e * e;
    }
  });

  MsErrorEstimate est;
  est.n_paths = M;
  est.grid_steps = N;
  est.mean_sq = detail::pairwise_sum(errs.data(), errs.size()) / static_cast<double>(M);
  for (double& e : errs) {
    const double d = e - est.mean_sq;
    e = d * d;
  }
  const double var = detail::pairwise_sum(errs.data(), errs.size()) / static_cast<double>(M - 1);
  est.std_error = std::sqrt(var / static_cast<double>(M));
  {
    std::string idx;
    for (int l = 0; l < req.noise.k(); ++l)
      idx += (l ? "," : "") + std::to_string(req.noise[l]);
    est.what = "k=" + std::to_string(req.noise.k()) + " i=(" + idx + ") p=" +
               std::to_string(req.p) + " " + to_string(req.tensor->basis_kind()) + " " +
               to_string(req.convention);
  }
  return est;
}

}  // namespace stochint
