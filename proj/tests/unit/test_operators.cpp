#include <doctest.h>

#include <cmath>
#include <random>

#include "fock/catalog.hpp"
#include "fock/operators.hpp"
#include "oracles.hpp"

using namespace fock;

namespace {

// <W_v e_l, e_m> from the power series of k_v(z) (z - v)^l, n = 1.
Complex weyl_entry_oracle(Complex v, int m, int l, double t) {
  Complex s = 0.0;
  for (int i = 0; i <= std::min(l, m); ++i) {
    const double binom = oracle::factorial(l) / (oracle::factorial(i) * oracle::factorial(l - i));
    s += binom * std::pow(-v, l - i) * std::pow(std::conj(v) / t, m - i) / oracle::factorial(m - i);
  }
  return s * std::exp(-std::norm(v) / (2.0 * t)) * std::sqrt(oracle::factorial(m) * std::pow(t, m)) /
         std::sqrt(oracle::factorial(l) * std::pow(t, l));
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("Toeplitz matrix of a Gaussian is diagonal (n = 1, 2)") {
  for (int n : {1, 2}) {
    const double t = 0.9, a = 0.8;
    const FockParam p(t, n);
    const BasisSpec basis(p, n == 1 ? 20 : 6);
    const auto m = toeplitz_matrix(gaussian_symbol(a), basis, build_polar_rule(p, n == 1 ? 40 : 30, n == 1 ? 81 : 25));
    for (int i = 0; i < basis.dimension(); ++i)
      for (int j = 0; j < basis.dimension(); ++j) {
        const int deg = basis.indices()[static_cast<std::size_t>(i)].degree();
        const double expect = i == j ? std::pow(1.0 + a * t, -(deg + n)) : 0.0;
        CHECK(std::abs(m.entries(i, j) - expect) < 1e-12);
      }
  }
}

TEST_CASE("Toeplitz matrix of the phase is the weighted shift") {
  const FockParam p(1.4, 1);
  const BasisSpec basis(p, 25);
  const auto m = toeplitz_matrix(phase_symbol(), basis, build_polar_rule(p));
  const auto exact = catalog_entry(p, "phase").matrix(basis);
  for (int i = 0; i < basis.dimension(); ++i)
    for (int j = 0; j < basis.dimension(); ++j) {
      const double expect = i == j + 1 ? std::tgamma(j + 1.5) / std::sqrt(oracle::factorial(j) * oracle::factorial(j + 1)) : 0.0;
      CHECK(std::abs(m.entries(i, j) - expect) < 1e-11);
      CHECK(std::abs(exact.entries(i, j) - expect) < 1e-12);
    }
}

TEST_CASE("Toeplitz matrices are Hermitian for real symbols") {
  const FockParam p(1.0, 1);
  SymbolFunction f{[](const Point& z) { return Complex(std::cos(z[0].real()) / (1.0 + std::norm(z[0]))); }, 1.0, {}, "r"};
  const auto m = toeplitz_matrix(f, BasisSpec(p, 15), build_polar_rule(p));
  CHECK((m.entries - m.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Weyl matrix against the power-series oracle") {
  for (double t : {0.5, 1.0, 2.0}) {
    const FockParam p(t, 1);
    const Complex v(0.5, 0.3);
    const BasisSpec basis(p, 20);
    const auto w = weyl_matrix(make_point({v}), basis);
    for (int m = 0; m <= 20; ++m)
      for (int l = 0; l <= 20; ++l) CHECK(std::abs(w.entries(m, l) - weyl_entry_oracle(v, m, l, t)) < 1e-11);
  }
}

TEST_CASE("Weyl operators are unitary and compose additively up to a phase") {
  const FockParam p(1.0, 1);
  const BasisSpec basis(p, 60);
  const Complex u(0.4, -0.2), v(-0.3, 0.5);
  const auto wu = weyl_matrix(make_point({u}), basis).entries;
  const auto wv = weyl_matrix(make_point({v}), basis).entries;
  const auto wuv = weyl_matrix(make_point({u + v}), basis).entries;
  const int k = 20;
  const ComplexMatrix g = (wu.adjoint() * wu).topLeftCorner(k, k);
  CHECK((g - ComplexMatrix::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-10);
  // W_u W_v = e^{-i Im(u conj v)/t} W_{u+v}
  const Complex phase = std::polar(1.0, -(u * std::conj(v)).imag());
  CHECK(((wu * wv).topLeftCorner(k, k) - phase * wuv.topLeftCorner(k, k)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Weyl matrix warns when the basis is too small for the shift") {
  const FockParam p(1.0, 1);
  const auto w = weyl_matrix(make_point({Complex(4.0, 0.0)}), BasisSpec(p, 10));
  CHECK_FALSE(w.warnings.empty());
}

TEST_CASE("Berezin transform: kernel formula against direct quadrature") {
  const FockParam p(1.0, 1);
  const QuadratureRule rule = build_polar_rule(p);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const auto g = gaussian_toeplitz_kernel(p, 0.3, Complex(1.0, -1.0));
  const auto sym = gaussian_symbol(0.3, Complex(1.0, -1.0));
  for (int i = 0; i < 8; ++i) {
    const Point w = make_point({Complex(u(rng), u(rng))}), z = make_point({Complex(u(rng), u(rng))});
    CHECK(std::abs(berezin_bivariate(g, w, z) - berezin_toeplitz_quadrature(sym, w, z, rule)) < 1e-10);
  }
}

TEST_CASE("matrix_from_kernel recovers matrices") {
  const FockParam p(1.0, 1);
  const BasisSpec basis(p, 12);
  const QuadratureRule rule = build_polar_rule(p);
  for (const auto& e : operator_catalog(p)) {
    if (e.name == "weyl") continue;
    const auto a = matrix_from_kernel(e.kernel, basis, rule);
    CHECK_MESSAGE((a.entries - e.matrix(basis).entries).cwiseAbs().maxCoeff() < 1e-12, e.name);
  }
  // quadrature kernel goes through the double-quadrature path
  const auto sym = gaussian_symbol(0.5);
  const auto q = matrix_from_kernel(toeplitz_quadrature_kernel(sym, build_polar_rule(p, 20, 41)), BasisSpec(p, 3),
                                    build_polar_rule(p, 12, 25));
  const auto ref = toeplitz_matrix(sym, BasisSpec(p, 3), rule);
  CHECK((q.entries - ref.entries).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("apply_operator reproduces matrix action") {
  const FockParam p(0.7, 1);
  const QuadratureRule rule = build_polar_rule(p);
  const auto k = gaussian_toeplitz_kernel(p, 1.0);
  const Point z = make_point({Complex(0.6, -0.2)});
  // T e_3 = (1+t)^{-4} e_3
  const Complex got = apply_operator(k, [](const Point& w) { return oracle::basis(3, w[0], 0.7); }, z, rule);
  CHECK(std::abs(got - std::pow(1.7, -4.0) * oracle::basis(3, z[0], 0.7)) < 1e-12);
}

TEST_CASE("shifted operator equals the Weyl conjugate") {
  const FockParam p(1.0, 1);
  const BasisSpec big(p, 70);
  const Point v = make_point({Complex(0.6, 0.2)});
  const SymbolFunction f = gaussian_symbol(0.8);
  const auto w = weyl_matrix(v, big).entries;
  const auto wm = weyl_matrix(-v, big).entries;
  const auto t = toeplitz_matrix(f, big, build_polar_rule(p, 80, 161)).entries;
  const auto conj = (w * t * wm).topLeftCorner(15, 15);
  const auto shifted = shifted_operator(f, v, BasisSpec(p, 14), build_polar_rule(p)).entries;
  CHECK((conj - shifted).cwiseAbs().maxCoeff() < 1e-9);
  // f(. + kShiftSign v)
  const auto g = translate_symbol(f, v);
  const Point z = make_point({Complex(0.1, 0.3)});
  CHECK(std::abs(g(z) - f(z + static_cast<double>(kShiftSign) * v)) < 1e-15);
}

TEST_CASE("scaled identity") {
  const BasisSpec basis(FockParam(1.0, 2), 3);
  const auto a = scaled_identity(basis, Complex(2.0, 1.0));
  CHECK(a.entries.isApprox(Complex(2.0, 1.0) * ComplexMatrix::Identity(10, 10)));
}

}
