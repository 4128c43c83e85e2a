#include <doctest.h>

#include <cmath>
#include <random>

#include "fock/fock_space.hpp"
#include "fock/grids.hpp"
#include "oracles.hpp"

using namespace fock;

TEST_SUITE("fock_space") {

TEST_CASE("graded lexicographic order") {
  const auto idx = graded_lex_indices(2, 2);
  REQUIRE(idx.size() == 6u);
  CHECK(idx[0] == MultiIndex{0, 0});
  CHECK(idx[1] == MultiIndex{1, 0});
  CHECK(idx[2] == MultiIndex{0, 1});
  CHECK(idx[3] == MultiIndex{2, 0});
  CHECK(idx[4] == MultiIndex{1, 1});
  CHECK(idx[5] == MultiIndex{0, 2});
  CHECK(graded_count(3, 4) == 35);
  CHECK(graded_count(1, 30) == 31);
  CHECK_THROWS_AS(MultiIndex({1, -1}), ParameterError);
}

TEST_CASE("basis values and sections") {
  const FockParam p(0.6, 1);
  const BasisSpec b(p, 12);
  CHECK(b.dimension() == 13);
  CHECK(b.section_size(5) == 6);
  const Point z = make_point({Complex(0.7, -1.1)});
  const auto v = b.values(z);
  const auto d = b.damped_values(z);
  for (int m = 0; m <= 12; ++m) {
    CHECK(std::abs(v[m] - oracle::basis(m, z[0], 0.6)) < 1e-13 * std::max(1.0, std::abs(v[m])));
    CHECK(std::abs(d[m] - v[m] * std::exp(-std::norm(z[0]) / 1.2)) < 1e-14);
  }
}

TEST_CASE("damped monomials stay finite far out") {
  std::vector<Complex> out(201);
  damped_monomials_1d(Complex(40.0, 10.0), 1.0, 200, out.data());
  for (const auto& x : out) CHECK(std::isfinite(std::abs(x)));
  // log |e_m(z)| - |z|^2/2 from lgamma, independent of the recursion
  const double r2 = 1700.0;
  for (int m : {0, 50, 200}) {
    const double lg = m * 0.5 * std::log(r2) - 0.5 * std::lgamma(m + 1.0) - r2 / 2.0;
    if (lg > -700) CHECK(std::log(std::abs(out[m])) == doctest::Approx(lg).epsilon(1e-10));
  }
}

TEST_CASE("Gram matrix is the identity (n = 1, 2)") {
  for (int n : {1, 2}) {
    const FockParam p(1.7, n);
    const BasisSpec b(p, n == 1 ? 15 : 6);
    const QuadratureRule rule = build_polar_rule(p, n == 1 ? 40 : 16, n == 1 ? 81 : 25);
    ComplexMatrix e(static_cast<Eigen::Index>(rule.size()), b.dimension());
    for (std::size_t i = 0; i < rule.size(); ++i)
      e.row(static_cast<Eigen::Index>(i)) = std::sqrt(rule.weights[i]) * b.values(rule.nodes[i]).transpose();
    const ComplexMatrix g = e.adjoint() * e;
    CHECK((g - ComplexMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("reproducing property for random polynomials") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double t : {0.5, 1.0, 2.0}) {
    const FockParam p(t, 1);
    const QuadratureRule rule = build_polar_rule(p);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<Complex> c(9);
      for (auto& x : c) x = Complex(nd(rng), nd(rng));
      auto f = [&](const Point& w) {
        Complex s = 0.0;
        for (int k = 8; k >= 0; --k) s = s * w[0] + c[k];
        return s;
      };
      const Point z = make_point({std::polar(3.0 * std::sqrt(u(rng)), 2.0 * oracle::pi * u(rng))});
      CHECK(std::abs(bergman_project(f, z, p, rule) - f(z)) < 1e-10 * std::max(1.0, std::abs(f(z))));
    }
  }
}

TEST_CASE("kernel self-consistency <K_w, K_z> = K_w(z)") {
  const FockParam p(1.0, 1);
  const QuadratureRule rule = build_polar_rule(p);
  const Point w = make_point({Complex(0.4, 0.6)}), z = make_point({Complex(-0.8, 0.1)});
  const Complex v = bergman_project([&](const Point& x) { return kernel_K(w, x, p); }, z, p, rule);
  const Complex exact = std::exp(z[0] * std::conj(w[0]));
  CHECK(std::abs(v - exact) < 1e-10);
  CHECK(std::abs(kernel_K(w, z, p) - exact) < 1e-15);
}

TEST_CASE("normalized kernel has unit norm for every p") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double t : {0.5, 1.0, 2.0}) {
    const FockParam p(t, 1);
    const QuadratureRule rule = build_polar_rule(p);
    const PointGrid grid = default_search_grid(p);
    for (int trial = 0; trial < 3; ++trial) {
      const Point z = make_point({std::polar(3.0 * std::sqrt(u(rng)), 2.0 * oracle::pi * u(rng))});
      auto kz = [&](const Point& w) { return kernel_k_normalized(z, w, p); };
      for (double q : {1.0, 2.0, 3.0}) CHECK(fock_norm_p(kz, q, p, rule) == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(fock_norm_infty(kz, p, grid) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("p-norm of a monomial against the Cartesian oracle") {
  // ||z^2||_3 with the mu_{2t/3} convention
  const double t = 1.0, q = 3.0;
  const FockParam p(t, 1);
  const double norm = fock_norm_p([](const Point& w) { return w[0] * w[0]; }, q, p, build_polar_rule(p));
  const Complex ref = oracle::gaussian_integral_2d([](Complex w) { return std::pow(std::abs(w), 6.0); }, 2.0 * t / q, 8.0, 400);
  CHECK(norm == doctest::Approx(std::cbrt(ref.real())).epsilon(1e-9));
}

TEST_CASE("grids") {
  const PointGrid g = polar_grid(1, 2.0, 5, 8);
  CHECK(g.radius == doctest::Approx(2.0));
  double rmax = 0.0;
  for (const auto& z : g.points) rmax = std::max(rmax, std::abs(z[0]));
  CHECK(rmax == doctest::Approx(2.0));
  for (int n : {1, 2, 3})
    for (const auto& x : direction_grid(n, 64)) CHECK(x.norm() == doctest::Approx(1.0));
  const OffsetLattice lat = offset_lattice(1, 0.5, 4);
  CHECK(lat.points.size() == 81u);
  CHECK(lat.cell_volume() == doctest::Approx(0.25));
  for (std::size_t i = 0; i < lat.points.size(); ++i) CHECK(lat.index_of(lat.coords_of(i)) == static_cast<long>(i));
  CHECK(lat.index_of({5, 0}) == -1);
}

}
