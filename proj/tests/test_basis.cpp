#include <doctest.h>

#include <cmath>
#include <random>

#include "stochint/basis.hpp"
#include "stochint/detail/gauss.hpp"

using namespace stochint;

namespace {

// Composite Gauss quadrature of f over [a, b]; independent check path for
// antiderivatives (closed form vs integrated evaluation).
template <typename F>
double integrate(F&& f, double a, double b, int panels = 32) {
  static const auto rule = detail::gauss_legendre(16);
  double s = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      s += rule.weights[q] * f(lo + 0.5 * h * (rule.nodes[q] + 1.0));
  }
  return 0.5 * h * s;
}

}  // namespace

TEST_CASE("legendre evaluation at pinned points") {
  const BasisSystem b(BasisKind::Legendre, Interval(0.0, 1.0));
  CHECK(b.eval(0, 0.3) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.eval(1, 0.0) == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-14));
  CHECK(b.eval(2, 0.5) == doctest::Approx(-std::sqrt(5.0) / 2.0).epsilon(1e-14));

  const BasisSystem b4(BasisKind::Legendre, Interval(2.0, 6.0));
  CHECK(b4.eval(2, 4.0) == doctest::Approx(-0.5 * std::sqrt(5.0 / 4.0)).epsilon(1e-14));
}

TEST_CASE("legendre antiderivative closed form") {
  const BasisSystem b(BasisKind::Legendre, Interval(0.0, 1.0));
  CHECK(b.antiderivative(0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (int j = 1; j <= 12; ++j)
    CHECK(b.antiderivative(j, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(b.antiderivative(1, 0.5) == doctest::Approx(-std::sqrt(3.0) / 4.0).epsilon(1e-14));
}

TEST_CASE("antiderivative matches quadrature of eval") {
  for (BasisKind kind : {BasisKind::Legendre, BasisKind::Trigonometric}) {
    const Interval iv(0.25, 1.75);
    const BasisSystem b(kind, iv);
    for (int j : {0, 1, 2, 5, 9}) {
      for (double s : {0.4, 0.9, 1.3, 1.75}) {
        const double direct = integrate([&](double x) { return b.eval(j, x); }, iv.t(), s);
        CHECK(b.antiderivative(j, s) == doctest::Approx(direct).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("orthonormality audit to order 30") {
  const Interval iv(0.5, 2.25);
  SUBCASE("legendre") {
    const BasisSystem b(BasisKind::Legendre, iv);
    double worst = 0.0;
    for (int i = 0; i <= 30; ++i)
      for (int j = i; j <= 30; ++j) {
        const double want = i == j ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(b.inner_product(i, j) - want));
      }
    CHECK(worst <= 1e-12);
  }
  SUBCASE("trigonometric") {
    const BasisSystem b(BasisKind::Trigonometric, iv);
    double worst = 0.0;
    for (int i = 0; i <= 30; ++i)
      for (int j = i; j <= 30; ++j) {
        const double want = i == j ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(b.inner_product(i, j) - want));
      }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("evaluation stable at high order") {
  const BasisSystem b(BasisKind::Legendre, Interval(0.0, 1.0));
  // |P_j| <= 1 on [-1,1], so |phi_j| <= sqrt(2j+1)
  for (double x : {0.0, 0.123, 0.5, 0.987, 1.0}) {
    CHECK(std::isfinite(b.eval(60, x)));
    CHECK(std::abs(b.eval(60, x)) <= std::sqrt(121.0) + 1e-9);
  }
  CHECK(b.inner_product(60, 60) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("bessel partial sums of the step function") {
  const Interval iv(0.0, 1.0);
  for (BasisKind kind : {BasisKind::Legendre, BasisKind::Trigonometric}) {
    const BasisSystem b(kind, iv);
    for (double s : {0.3, 0.5, 0.95}) {
      double prev = 0.0;
      for (int p = 0; p <= 40; ++p) {
        const double a = b.antiderivative(p, s);
        const double cur = prev + a * a;
        CHECK(cur >= prev);             // nondecreasing in p
        CHECK(cur <= s - iv.t() + 1e-12);  // bounded by the norm of 1_[t,s]
        prev = cur;
      }
    }
  }
}

TEST_CASE("scaling relation between intervals") {
  const Interval big(1.0, 4.0);
  const BasisSystem on_big(BasisKind::Legendre, big);
  const BasisSystem on_unit(BasisKind::Legendre, Interval(0.0, 1.0));
  const BasisSystem trig_big(BasisKind::Trigonometric, big);
  const BasisSystem trig_unit(BasisKind::Trigonometric, Interval(0.0, 1.0));
  const double root_delta = std::sqrt(big.delta());
  for (int j : {0, 1, 3, 8}) {
    for (double u : {0.0, 0.25, 0.7, 1.0}) {
      const double x = big.t() + u * big.delta();
      CHECK(on_big.eval(j, x) == doctest::Approx(on_unit.eval(j, u) / root_delta).epsilon(1e-13));
      CHECK(trig_big.eval(j, x) ==
            doctest::Approx(trig_unit.eval(j, u) / root_delta).epsilon(1e-13));
    }
  }
}

TEST_CASE("domain handling") {
  const BasisSystem b(BasisKind::Legendre, Interval(0.0, 2.0));
  CHECK(b.eval(1, 2.0 + 1e-13) == doctest::Approx(b.eval(1, 2.0)));  // clamped
  CHECK_THROWS_AS((void)b.eval(1, 2.1), std::domain_error);
  CHECK_THROWS_AS((void)b.antiderivative(1, -0.5), std::domain_error);
  CHECK_THROWS_AS((void)b.eval(-1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Interval(1.0, 1.0), std::invalid_argument);
}
