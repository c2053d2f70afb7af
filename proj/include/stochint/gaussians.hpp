#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochint/basis.hpp"
#include "stochint/detail/rng.hpp"
#include "stochint/path_grid.hpp"

namespace stochint {

/// Component selectors (i_1,...,i_k) of an iterated integral; 0 selects the
/// time component w^{(0)}_tau = tau.
class NoiseIndexVector {
  std::vector<int> idx_;
  int m_;

 public:
  NoiseIndexVector(std::vector<int> indices, int m) : idx_(std::move(indices)), m_(m) {
    if (idx_.empty() || idx_.size() > 5)
      throw std::invalid_argument("NoiseIndexVector: length must be 1..5");
    if (m_ < 1) throw std::invalid_argument("NoiseIndexVector: m must be >= 1");
    for (int i : idx_)
      if (i < 0 || i > m_)
        throw std::invalid_argument("NoiseIndexVector: index " + std::to_string(i) +
                                    " outside 0.." + std::to_string(m_));
  }

  /// m defaults to the largest index used (at least 1).
  explicit NoiseIndexVector(std::vector<int> indices)
      : NoiseIndexVector(indices, [&] {
          int m = 1;
          for (int i : indices)
            if (i > m) m = i;
          return m;
        }()) {}

  int k() const { return static_cast<int>(idx_.size()); }
  int m() const { return m_; }
  int operator[](int l) const { return idx_[static_cast<std::size_t>(l)]; }
  const std::vector<int>& indices() const { return idx_; }

  bool all_distinct() const {
    for (std::size_t a = 0; a < idx_.size(); ++a)
      for (std::size_t b = a + 1; b < idx_.size(); ++b)
        if (idx_[a] == idx_[b]) return false;
    return true;
  }
  bool any_zero() const {
    for (int i : idx_)
      if (i == 0) return true;
    return false;
  }
};

/// The zeta_j^{(i)} inputs of an expansion: rows i = 1..m are independent
/// N(0,1) draws, row i = 0 is the deterministic column int_t^T phi_j.
class GaussianMatrix {
  int m_;
  int p_;
  BasisKind basis_;
  Interval iv_;
  std::uint64_t seed_;
  std::vector<double> v_;  // (m+1) x (p+1), row-major

 public:
  GaussianMatrix(int m, int p, BasisKind basis, Interval interval, std::uint64_t seed)
      : m_(m), p_(p), basis_(basis), iv_(interval), seed_(seed),
        v_(static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(p + 1), 0.0) {
    if (m < 1) throw std::invalid_argument("GaussianMatrix: m must be >= 1");
    if (p < 0) throw std::invalid_argument("GaussianMatrix: p must be >= 0");
  }

  int m() const { return m_; }
  int p() const { return p_; }
  BasisKind basis_kind() const { return basis_; }
  const Interval& interval() const { return iv_; }
  std::uint64_t seed() const { return seed_; }

  double operator()(int i, int j) const {
    return v_[static_cast<std::size_t>(i) * static_cast<std::size_t>(p_ + 1) +
              static_cast<std::size_t>(j)];
  }
  double& entry(int i, int j) {
    return v_[static_cast<std::size_t>(i) * static_cast<std::size_t>(p_ + 1) +
              static_cast<std::size_t>(j)];
  }
  const double* row(int i) const {
    return v_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(p_ + 1);
  }
};

/// Fresh i.i.d. N(0,1) entries for rows 1..m from the counter-based stream
/// (substream id = (path_id, component, order)); row 0 deterministic.
inline GaussianMatrix draw(std::uint64_t seed, int m, int p, const BasisSystem& basis,
                           std::uint64_t path_id = 0) {
  GaussianMatrix z(m, p, basis.kind(), basis.interval(), seed);
  for (int j = 0; j <= p; ++j) z.entry(0, j) = basis.antiderivative(j, basis.interval().T());
  for (int i = 1; i <= m; ++i) {
    int j = 0;
    for (; j + 1 <= p; j += 2) {
      const auto pr = detail::rng::normal_pair(detail::rng::derive_key(
          seed, detail::rng::kTagZeta, path_id, static_cast<std::uint64_t>(i),
          static_cast<std::uint64_t>(j) >> 1));
      z.entry(i, j) = pr.first;
      z.entry(i, j + 1) = pr.second;
    }
    if (j <= p)
      z.entry(i, j) = detail::rng::normal(seed, detail::rng::kTagZeta, path_id,
                                          static_cast<std::uint64_t>(i),
                                          static_cast<std::uint64_t>(j));
  }
  return z;
}

namespace detail {

// phi_j at the left grid nodes, [j][n]; shared across paths in MC loops.
inline std::vector<double> basis_node_table(const BasisSystem& basis, int p, const PathGrid& g) {
  std::vector<double> tab(static_cast<std::size_t>(p + 1) * static_cast<std::size_t>(g.n_steps()));
  for (int j = 0; j <= p; ++j)
    for (int n = 0; n < g.n_steps(); ++n)
      tab[static_cast<std::size_t>(j) * g.n_steps() + static_cast<std::size_t>(n)] =
          basis.eval(j, g.node(n));
  return tab;
}

inline void zeta_from_path_with_table(const PathGrid& path, const BasisSystem& basis, int p,
                                      const std::vector<double>& table, GaussianMatrix& out) {
  for (int j = 0; j <= p; ++j) out.entry(0, j) = basis.antiderivative(j, basis.interval().T());
  for (int i = 1; i <= path.components(); ++i) {
    const double* inc = path.component_row(i);
    for (int j = 0; j <= p; ++j) {
      const double* phi = table.data() + static_cast<std::size_t>(j) * path.n_steps();
      double s = 0.0;
      for (int n = 0; n < path.n_steps(); ++n) s += phi[n] * inc[n];
      out.entry(i, j) = s;
    }
  }
}

}  // namespace detail

/// zeta_j^{(i)} realized as path functionals: left-endpoint Ito sums
/// sum_n phi_j(tau_n) dw^{(i)}_n for i >= 1, exact antiderivative for row 0.
inline GaussianMatrix zeta_from_path(const PathGrid& path, const BasisSystem& basis, int p) {
  if (!(path.interval() == basis.interval()))
    throw std::invalid_argument("zeta_from_path: path and basis intervals differ");
  GaussianMatrix z(path.components(), p, basis.kind(), basis.interval(), path.seed());
  const std::vector<double> table = detail::basis_node_table(basis, p, path);
  detail::zeta_from_path_with_table(path, basis, p, table, z);
  return z;
}

}  // namespace stochint
