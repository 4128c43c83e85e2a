#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fock/quadrature.hpp"
#include "oracles.hpp"

using namespace fock;

TEST_SUITE("quadrature") {

TEST_CASE("radial rule integrates r^k against r e^{-r^2}") {
  // int_0^inf r^k r e^{-r^2} dr = Gamma(k/2 + 1) / 2
  for (int order : {1, 5, 20, 40}) {
    const RadialGaussRule r = radial_gauss_rule(order);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(order));
    for (int k = 0; k <= 2 * order - 1; ++k) {
      long double s = 0.0L;
      for (int i = 0; i < order; ++i) s += r.weights[i] * std::pow(static_cast<long double>(r.nodes[i]), k);
      const double exact = std::tgamma(0.5 * k + 1.0) / 2.0;
      CHECK(static_cast<double>(s) == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("polar rule moments match a! t^a") {
  for (double t : {0.5, 1.0, 2.0}) {
    const FockParam p(t, 1);
    const QuadratureRule rule = build_polar_rule(p, 20, 41);
    CHECK(rule.exact_degree == 19);
    for (int a = 0; a <= 9; ++a)
      for (int b = 0; b <= 9; ++b) {
        const Complex v = integrate_mu([&](const Point& w) { return std::pow(w[0], a) * std::pow(std::conj(w[0]), b); }, rule);
        const double exact = a == b ? oracle::factorial(a) * std::pow(t, a) : 0.0;
        const double scale = std::max(1.0, std::sqrt(oracle::factorial(a) * oracle::factorial(b)) * std::pow(t, 0.5 * (a + b)));
        CHECK(std::abs(v - exact) / scale < 1e-12);
        CHECK(monomial_moment(MultiIndex{a}, MultiIndex{b}, p) == doctest::Approx(exact));
      }
  }
}

TEST_CASE("two-dimensional rule tensorizes") {
  const FockParam p(0.7, 2);
  const QuadratureRule rule = build_polar_rule(p, 8, 17);
  CHECK(rule.size() == static_cast<std::size_t>(8 * 17 * 8 * 17));
  const Complex v = integrate_mu(
      [](const Point& w) { return std::norm(w[0]) * std::norm(w[0]) * std::norm(w[1]); }, rule);
  // E|w1|^4 |w2|^2 = 2 t^2 * t
  CHECK(std::abs(v - 2.0 * 0.7 * 0.7 * 0.7) < 1e-12);
}

TEST_CASE("weights positive and node count") {
  const QuadratureRule rule = build_polar_rule(FockParam(1.3, 1), 12, 25);
  CHECK(rule.size() == 12u * 25u);
  for (double w : rule.weights) CHECK(w > 0.0);
  double s = 0.0;
  for (double w : rule.weights) s += w;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("smooth integrand against an independent Cartesian oracle") {
  const double t = 1.5;
  const QuadratureRule rule = build_polar_rule(FockParam(t, 1), 40, 81);
  auto g = [](Complex w) { return std::exp(-0.3 * std::norm(w)) * std::cos(w.real()) * (1.0 + w * w); };
  const Complex q = integrate_mu([&](const Point& w) { return g(w[0]); }, rule);
  const Complex ref = oracle::gaussian_integral_2d(g, t, 9.0, 300);
  CHECK(std::abs(q - ref) < 1e-11);
}

TEST_CASE("doubling the orders changes e^{-|w|^2} * polynomial by < 1e-10") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  const FockParam p(1.0, 1);
  const QuadratureRule r1 = build_polar_rule(p, 20, 41), r2 = build_polar_rule(p, 40, 81);
  for (int trial = 0; trial < 5; ++trial) {
    Complex c[6];
    for (auto& x : c) x = Complex(nd(rng), nd(rng));
    auto g = [&](const Point& w) {
      Complex s = 0.0;
      for (int k = 0; k < 6; ++k) s += c[k] * std::pow(w[0], k) * std::pow(std::conj(w[0]), 5 - k);
      return std::exp(-std::norm(w[0])) * s;
    };
    CHECK(std::abs(integrate_mu(g, r1) - integrate_mu(g, r2)) < 1e-10);
  }
}

TEST_CASE("lebesgue and rescaled rules") {
  const FockParam p(0.8, 1);
  const QuadratureRule g = build_polar_rule(p, 30, 61);
  const QuadratureRule leb = lebesgue_rule(g);
  CHECK(leb.measure == Measure::Lebesgue);
  // int e^{-2|z|^2} dz = pi / 2
  double s = 0.0;
  for (std::size_t i = 0; i < leb.size(); ++i) s += leb.weights[i] * std::exp(-2.0 * std::norm(leb.nodes[i][0]));
  CHECK(s == doctest::Approx(oracle::pi / 2.0).epsilon(1e-12));

  const QuadratureRule wide = rescale_rule(g, 3.0);
  CHECK(wide.param.t() == doctest::Approx(2.4));
  const Complex m = integrate_mu([](const Point& w) { return std::norm(w[0]); }, wide);
  CHECK(std::abs(m - 2.4) < 1e-12);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(build_polar_rule(FockParam(1.0, 1), 0, 10), ParameterError);
  CHECK_THROWS_AS(build_polar_rule(FockParam(1.0, 1), 10, 2), ParameterError);
  CHECK_THROWS_AS(FockParam(-1.0, 1), ParameterError);
  CHECK_THROWS_AS(FockParam(1.0, 0), ParameterError);
  const QuadratureRule rule = build_polar_rule(FockParam(1.0, 1), 4, 5);
  try {
    integrate_mu([](const Point& w) { return w[0].real() > 0 ? Complex(std::numeric_limits<double>::infinity()) : 0.0; }, rule);
    FAIL("expected NonFiniteValueError");
  } catch (const NonFiniteValueError& e) {
    CHECK(e.node()[0].real() > 0.0);
  }
}

TEST_CASE("compensated sum keeps small terms") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value().real() == 1000.0);
}

}
