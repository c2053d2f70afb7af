#include <doctest.h>

#include <array>
#include <cmath>
#include <memory>
#include <set>
#include <vector>

#include "stochint/bridge.hpp"

using namespace stochint;

namespace {

std::shared_ptr<const CoefficientTensor> unit_tensor(int k, const Interval& iv, int p,
                                                     BasisKind kind = BasisKind::Legendre) {
  const BasisSystem b(kind, iv);
  return std::make_shared<CoefficientTensor>(build_tensor(KernelSpec::unit_weights(k, iv), b, p));
}

// Independent recomputation of the fifth-multiplicity indicator terms,
// written out pair by pair instead of enumerated.
double a5_indicator_terms(const CoefficientTensor& t, const NoiseIndexVector& i,
                          const GaussianMatrix& z, int p) {
  static const std::array<std::array<int, 2>, 10> pairs{{{1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3},
                                                         {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}}};
  static const std::array<std::array<int, 4>, 15> dpairs{
      {{1, 2, 3, 4}, {1, 2, 3, 5}, {1, 2, 4, 5}, {1, 3, 2, 4}, {1, 3, 2, 5},
       {1, 3, 4, 5}, {1, 4, 2, 3}, {1, 4, 2, 5}, {1, 4, 3, 5}, {1, 5, 2, 3},
       {1, 5, 2, 4}, {1, 5, 3, 4}, {2, 3, 4, 5}, {2, 4, 3, 5}, {2, 5, 3, 4}}};

  double total = 0.0;
  std::array<int, 5> j{};
  const auto sweep = [&](auto&& body) {
    j = {0, 0, 0, 0, 0};
    for (;;) {
      body();
      int l = 0;
      while (l < 5 && ++j[static_cast<std::size_t>(l)] > p) j[static_cast<std::size_t>(l++)] = 0;
      if (l == 5) break;
    }
  };

  for (const auto& pr : pairs) {
    const int a = pr[0] - 1, b = pr[1] - 1;
    if (i[a] == 0 || i[a] != i[b]) continue;
    double term = 0.0;
    sweep([&] {
      if (j[static_cast<std::size_t>(a)] != j[static_cast<std::size_t>(b)]) return;
      double rest = 1.0;
      for (int l = 0; l < 5; ++l)
        if (l != a && l != b) rest *= z(i[l], j[static_cast<std::size_t>(l)]);
      term += t.at(std::span<const int>(j.data(), 5)) * rest;
    });
    total += term;
  }
  for (const auto& dp : dpairs) {
    const int a = dp[0] - 1, b = dp[1] - 1, c = dp[2] - 1, d = dp[3] - 1;
    if (i[a] == 0 || i[a] != i[b] || i[c] == 0 || i[c] != i[d]) continue;
    double term = 0.0;
    sweep([&] {
      if (j[static_cast<std::size_t>(a)] != j[static_cast<std::size_t>(b)] ||
          j[static_cast<std::size_t>(c)] != j[static_cast<std::size_t>(d)])
        return;
      double rest = 1.0;
      for (int l = 0; l < 5; ++l)
        if (l != a && l != b && l != c && l != d) rest *= z(i[l], j[static_cast<std::size_t>(l)]);
      term += t.at(std::span<const int>(j.data(), 5)) * rest;
    });
    total -= term;
  }
  return total;
}

}  // namespace

TEST_CASE("pairing sets match brute force") {
  for (int k = 1; k <= 5; ++k) {
    const PairingSet ps = enumerate_pairings(k);
    CHECK(ps.max_depth() == k / 2);
    for (int r = 1; r <= ps.max_depth(); ++r) {
      // brute force: all r-subsets of 1..k-1 with strict separation
      std::set<std::vector<int>> want;
      std::vector<int> tuple;
      const auto rec = [&](auto&& self, int lo) -> void {
        if (static_cast<int>(tuple.size()) == r) {
          want.insert(tuple);
          return;
        }
        for (int s = lo; s <= k - 1; ++s) {
          tuple.push_back(s);
          self(self, s + 2);
          tuple.pop_back();
        }
      };
      rec(rec, 1);
      std::set<std::vector<int>> got(ps.by_r[static_cast<std::size_t>(r - 1)].begin(),
                                     ps.by_r[static_cast<std::size_t>(r - 1)].end());
      CHECK(got == want);
    }
    if (k >= 2) CHECK(ps.by_r[0].size() == static_cast<std::size_t>(k - 1));
  }

  SUBCASE("pinned examples") {
    const auto p4 = enumerate_pairings(4);
    CHECK(p4.by_r[0] == std::vector<std::vector<int>>{{1}, {2}, {3}});
    CHECK(p4.by_r[1] == std::vector<std::vector<int>>{{1, 3}});
    const auto p5 = enumerate_pairings(5);
    CHECK(p5.by_r[1] == std::vector<std::vector<int>>{{1, 3}, {1, 4}, {2, 4}});
    const auto p2 = enumerate_pairings(2);
    CHECK(p2.by_r[0] == std::vector<std::vector<int>>{{1}});
  }

  CHECK_THROWS_AS((void)enumerate_pairings(0), std::invalid_argument);
  CHECK_THROWS_AS((void)enumerate_pairings(6), std::invalid_argument);
}

TEST_CASE("pairing weights") {
  CHECK(pairing_weight(1) == 0.5);
  CHECK(pairing_weight(2) == 0.25);
}

TEST_CASE("truncation gap, k=2 lowest order") {
  const Interval iv(0.0, 1.0);
  const BasisSystem b(BasisKind::Legendre, iv);
  const auto tensor = unit_tensor(2, iv, 0);
  const NoiseIndexVector noise({1, 1});
  const ItoTruncation itr(tensor, noise, 0);
  const StratTruncation str(tensor, noise, 0);
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto z = draw(2, 1, 0, b, s);
    const auto gap = truncation_gap(itr, str, z);
    CHECK(gap.total == doctest::Approx(0.5).epsilon(1e-14));  // C_00, independent of the draw
    CHECK(gap.from_terms == doctest::Approx(0.5).epsilon(1e-14));
    REQUIRE(gap.terms.size() == 1);
    CHECK(gap.terms[0].label == "pair(1,2)");
  }
}

TEST_CASE("truncation gap vanishes for distinct indices") {
  const Interval iv(0.0, 1.0);
  const BasisSystem b(BasisKind::Legendre, iv);
  const auto tensor = unit_tensor(3, iv, 2);
  const NoiseIndexVector noise({1, 2, 3});
  const ItoTruncation itr(tensor, noise, 2);
  const StratTruncation str(tensor, noise, 2);
  const auto z = draw(3, 3, 2, b);
  const auto gap = truncation_gap(itr, str, z);
  CHECK(gap.total == 0.0);
  CHECK(gap.terms.empty());
}

TEST_CASE("k=5 gap equals the independently recomputed indicator terms") {
  const Interval iv(0.0, 0.77);
  const BasisSystem b(BasisKind::Legendre, iv);
  const int p = 3;
  const auto tensor = unit_tensor(5, iv, p);
  for (auto idx : std::vector<std::vector<int>>{{1, 1, 2, 2, 3}, {1, 1, 2, 2, 1},
                                                {1, 1, 1, 1, 1}, {0, 1, 1, 2, 2}}) {
    const NoiseIndexVector noise(idx);
    const ItoTruncation itr(tensor, noise, p);
    const StratTruncation str(tensor, noise, p);
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto z = draw(99, noise.m(), p, b, s);
      const auto gap = truncation_gap(itr, str, z);
      const double independent = a5_indicator_terms(*tensor, noise, z, p);
      CHECK(std::abs(gap.total - independent) <= 1e-12);
      CHECK(std::abs(gap.from_terms - independent) <= 1e-12);
      CHECK(std::abs(gap.total - gap.from_terms) <= 1e-12);
    }
  }
}

TEST_CASE("gap ignores unused rows") {
  const Interval iv(0.0, 1.0);
  const BasisSystem b(BasisKind::Legendre, iv);
  const auto tensor = unit_tensor(4, iv, 2);
  const NoiseIndexVector noise({1, 1, 2, 2}, 3);
  const ItoTruncation itr(tensor, noise, 2);
  const StratTruncation str(tensor, noise, 2);
  auto z1 = draw(5, 3, 2, b, 0);
  auto z2 = z1;
  for (int j = 0; j <= 2; ++j) z2.entry(3, j) = -z1(3, j) + 0.25;  // row 3 never referenced
  CHECK(truncation_gap(itr, str, z1).total == truncation_gap(itr, str, z2).total);
}

TEST_CASE("mismatched truncations rejected") {
  const Interval iv(0.0, 1.0);
  const auto t2 = unit_tensor(2, iv, 2);
  const ItoTruncation itr(t2, NoiseIndexVector({1, 1}), 2);
  const StratTruncation str_other_p(t2, NoiseIndexVector({1, 1}), 1);
  const StratTruncation str_other_noise(t2, NoiseIndexVector({1, 2}), 2);
  const auto z = draw(6, 2, 2, BasisSystem(BasisKind::Legendre, iv));
  CHECK_THROWS_AS((void)truncation_gap(itr, str_other_p, z), std::invalid_argument);
  CHECK_THROWS_AS((void)truncation_gap(itr, str_other_noise, z), std::invalid_argument);
}

TEST_CASE("contraction deficit") {
  const Interval iv(0.0, 1.0);
  const BasisSystem b(BasisKind::Legendre, iv);

  SUBCASE("pinned values") {
    CHECK(contraction_check(b, 0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(contraction_check(b, 0, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
  }

  SUBCASE("nonnegative, nonincreasing, vanishing") {
    for (BasisKind kind : {BasisKind::Legendre, BasisKind::Trigonometric}) {
      const BasisSystem bs(kind, iv);
      for (double s : {0.3, 0.5, 0.9}) {
        double prev = contraction_check(bs, 0, s);
        CHECK(prev >= 0.0);
        for (int p = 1; p <= 50; ++p) {
          const double cur = contraction_check(bs, p, s);
          CHECK(cur >= -1e-13);
          CHECK(cur <= prev + 1e-13);
          prev = cur;
        }
      }
      CHECK(contraction_check(bs, 50, 0.5) <= 0.01);
    }
  }
}
