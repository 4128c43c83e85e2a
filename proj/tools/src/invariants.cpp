#include "fock/cli/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "fock/catalog.hpp"
#include "fock/cli/expression.hpp"
#include "fock/cli/symbols.hpp"
#include "fock/fock_space.hpp"
#include "fock/grids.hpp"
#include "fock/operators.hpp"
#include "fock/spectral.hpp"
#include "fock/wiener.hpp"

namespace fock::cli {

namespace {

using Rng = std::mt19937_64;

struct Suite {
  std::vector<CheckResult> results;

  // Records value <= tol as a pass.
  void below(const std::string& name, double value, double tol, std::string detail = {}) {
    results.push_back({name, value, tol, std::isfinite(value) && value <= tol, std::move(detail)});
  }
  void holds(const std::string& name, bool ok, std::string detail = {}) {
    results.push_back({name, ok ? 0.0 : 1.0, 0.0, ok, std::move(detail)});
  }
  // Runs f, turning an exception into a failed check.
  void guard(const std::string& name, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      results.push_back({name, INFINITY, 0.0, false, std::string("exception: ") + e.what()});
    }
  }
};

Complex normal_complex(Rng& rng) {
  std::normal_distribution<double> nd;
  return {nd(rng), nd(rng)};
}

Point random_point(Rng& rng, int n, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point p(n);
  for (int j = 0; j < n; ++j) p[j] = std::polar(radius * std::sqrt(u(rng)) / std::sqrt(double(n)), 2.0 * kPi * u(rng));
  return p;
}

struct Polynomial {
  std::vector<MultiIndex> idx;
  std::vector<Complex> coeff;
  Complex operator()(const Point& z) const {
    Complex s = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      Complex m = coeff[k];
      for (int j = 0; j < idx[k].size(); ++j) m *= std::pow(z[j], idx[k][j]);
      s += m;
    }
    return s;
  }
};

Polynomial random_polynomial(Rng& rng, int n, int degree) {
  Polynomial p;
  p.idx = graded_lex_indices(n, degree);
  for (std::size_t k = 0; k < p.idx.size(); ++k) p.coeff.push_back(normal_complex(rng) / std::sqrt(double(k + 1)));
  return p;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

// module checks
void quadrature_checks(Suite& s, const FockParam& param, const QuadratureRule& rule, Rng& rng) {
  s.guard("quadrature.moments", [&] {
    const int n = param.n();
    const int d = std::min(rule.exact_degree, n == 1 ? 30 : 12);
    double worst = 0.0;
    const auto idx = graded_lex_indices(n, d);
    for (const auto& a : idx)
      for (const auto& b : idx) {
        if (a.degree() + b.degree() > d) continue;
        const Complex v = integrate_mu(
            [&](const Point& w) {
              Complex m = 1.0;
              for (int j = 0; j < n; ++j) m *= std::pow(w[j], a[j]) * std::pow(std::conj(w[j]), b[j]);
              return m;
            },
            rule);
        // |w^a conj(w)^b| integrates to about sqrt(a! b!) t^{(|a|+|b|)/2}.
        double scale = 1.0;
        for (int j = 0; j < n; ++j) scale *= std::sqrt(factorial(a[j]) * factorial(b[j]));
        scale = std::max(1.0, scale * std::pow(param.t(), 0.5 * (a.degree() + b.degree())));
        worst = std::max(worst, std::abs(v - monomial_moment(a, b, param)) / scale);
      }
    s.below("quadrature.moments", worst, 1e-12, "max relative moment error");
  });
  s.guard("quadrature.convergence", [&] {
    const Polynomial p = random_polynomial(rng, param.n(), 4);
    auto g = [&](const Point& w) { return std::exp(-norm_sq(w)) * p(w); };
    const QuadratureRule fine = build_polar_rule(param, 2 * rule.radial_order, 2 * rule.angular_order - 1);
    s.below("quadrature.convergence", std::abs(integrate_mu(g, rule) - integrate_mu(g, fine)), 1e-10);
  });
  s.holds("quadrature.weights",
          std::all_of(rule.weights.begin(), rule.weights.end(), [](double w) { return w > 0.0; }) &&
              rule.size() == static_cast<std::size_t>(std::pow(rule.radial_order * rule.angular_order, param.n())),
          "positive weights, radial x angular nodes per coordinate");
}

void fock_space_checks(Suite& s, const FockParam& param, const QuadratureRule& rule, Rng& rng) {
  const int n = param.n();
  s.guard("fock.reproducing", [&] {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Polynomial f = random_polynomial(rng, n, n == 1 ? 8 : 4);
      const Point z = random_point(rng, n, 3.0);
      worst = std::max(worst, std::abs(bergman_project(f, z, param, rule) - f(z)) / std::max(1.0, std::abs(f(z))));
    }
    s.below("fock.reproducing", worst, 1e-10);
  });
  s.guard("fock.kernel_consistency", [&] {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Point w = random_point(rng, n, 1.0), z = random_point(rng, n, 1.0);
      const Complex v = bergman_project([&](const Point& x) { return kernel_K(w, x, param); }, z, param, rule);
      worst = std::max(worst, std::abs(v - kernel_K(w, z, param)) / std::abs(kernel_K(w, z, param)));
    }
    s.below("fock.kernel_consistency", worst, 1e-10, "<K_w, K_z> against K_w(z)");
  });
  s.guard("fock.gram", [&] {
    const BasisSpec basis(param, n == 1 ? 15 : 6);
    const std::size_t nn = rule.size();
    ComplexMatrix e(static_cast<Eigen::Index>(nn), basis.dimension());
    for (std::size_t i = 0; i < nn; ++i)
      e.row(static_cast<Eigen::Index>(i)) = std::sqrt(rule.weights[i]) * basis.values(rule.nodes[i]).transpose();
    const ComplexMatrix g = e.adjoint() * e;
    s.below("fock.gram", (g - ComplexMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff(), 1e-10);
  });
  s.guard("fock.kernel_norms", [&] {
    double worst = 0.0;
    const PointGrid search = n == 1 ? default_search_grid(param) : polar_grid(n, 6.0 * std::sqrt(param.t()), 12, 12);
    for (int k = 0; k < 3; ++k) {
      const Point z = random_point(rng, n, 3.0);
      auto kz = [&](const Point& w) { return kernel_k_normalized(z, w, param); };
      for (double p : {1.0, 2.0, 3.0}) worst = std::max(worst, std::abs(fock_norm_p(kz, p, param, rule) - 1.0));
      worst = std::max(worst, std::abs(fock_norm_infty(kz, param, search) - 1.0));
    }
    s.below("fock.kernel_norms", worst, 1e-8, "||k_z||_p for p = 1, 2, 3, inf");
  });
}

void operator_checks(Suite& s, const FockParam& param, const QuadratureRule& rule, Rng& rng) {
  const int n = param.n();
  s.guard("operators.weyl_isometry", [&] {
    const int d = n == 1 ? 25 : 8, pad = n == 1 ? 40 : 12;
    const BasisSpec big(param, d + pad);
    const int small = big.section_size(d - (n == 1 ? 10 : 4));
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Point v = random_point(rng, n, 1.0);
      const TruncatedOperator w = weyl_matrix(v, big);
      Eigen::VectorXcd f = Eigen::VectorXcd::Zero(big.dimension());
      for (int i = 0; i < small; ++i) f[i] = normal_complex(rng);
      worst = std::max(worst, std::abs((w.entries * f).norm() - f.norm()) / f.norm());
    }
    s.below("operators.weyl_isometry", worst, 1e-8);
  });
  s.guard("operators.weyl_composition", [&] {
    const int d = n == 1 ? 25 : 6, pad = n == 1 ? 40 : 12;
    const BasisSpec big(param, d + pad);
    const int k = big.section_size(d);
    const Point a = random_point(rng, n, 1.0), b = random_point(rng, n, 1.0);
    const ComplexMatrix wa = weyl_matrix(a, big).entries, wb = weyl_matrix(b, big).entries;
    const ComplexMatrix wab = weyl_matrix(Point(a + b), big).entries;
    const Complex phase = std::polar(1.0, -dot_conj(a, b).imag() / param.t());
    const ComplexMatrix lhs = (wa * wb).topLeftCorner(k, k);
    const ComplexMatrix rhs = phase * wab.topLeftCorner(k, k);
    s.below("operators.weyl_composition", (lhs - rhs).norm(), 1e-8, "Frobenius residual on the section");
  });
  if (n != 1) return;
  s.guard("operators.berezin_identity", [&] {
    const SymbolFunction f = phase_symbol(0);
    const KernelFunction k = phase_kernel(param);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const Point w = make_point({std::polar(0.4 * i, 0.7 * i)});
        const Point z = make_point({std::polar(0.4 * j, -0.5 * j)});
        worst = std::max(worst, std::abs(berezin_toeplitz_quadrature(f, w, z, rule) - k.damped(w, z)));
      }
    s.below("operators.berezin_identity", worst, 1e-8, "phase symbol, 4 x 4 grid");
  });
  s.guard("operators.matrix_kernel_roundtrip", [&] {
    struct Opaque : KernelImpl {
      std::shared_ptr<const KernelImpl> inner;
      Complex damped(const Point& w, const Point& z) const override { return inner->damped(w, z); }
    };
    const BasisSpec basis(param, 15);
    const TruncatedOperator a = toeplitz_matrix(gaussian_symbol(0.7, Complex(1.0, 0.5)), basis, rule);
    auto opaque = std::make_shared<Opaque>();
    opaque->inner = kernel_from_matrix(a).impl();
    const KernelFunction k(param, KernelProvenance::Quadrature, opaque);
    const QuadratureRule coarse = build_polar_rule(param, 24, 33);
    const TruncatedOperator back = matrix_from_kernel(k, basis, coarse);
    s.below("operators.matrix_kernel_roundtrip", (back.entries - a.entries).cwiseAbs().maxCoeff(), 1e-8);
  });
  s.guard("operators.adjoint", [&] {
    const BasisSpec basis(param, 20);
    double worst = 0.0;
    for (const auto& e : operator_catalog(param)) {
      const TruncatedOperator m = e.matrix(basis);
      const TruncatedOperator adj = matrix_from_kernel(involute_kernel(e.kernel), basis, rule);
      worst = std::max(worst, (adj.entries - m.entries.adjoint()).cwiseAbs().maxCoeff());
    }
    s.below("operators.adjoint", worst, 1e-8, "catalog operators, D = 20");
  });
}

PointGrid light_base(const FockParam& param) {
  return polar_grid(param.n(), 6.0 * std::sqrt(param.t()), param.n() == 1 ? 25 : 5, param.n() == 1 ? 24 : 6);
}

void wiener_checks(Suite& s, const FockParam& param, Rng& rng) {
  const PointGrid base = light_base(param);
  const OffsetLattice lat = default_offset_lattice(param);
  const auto catalog = operator_catalog(param);
  std::vector<DominatingProfile> profiles;
  for (const auto& e : catalog) profiles.push_back(dominating_profile(e.kernel, base, lat));

  s.guard("wiener.domination", [&] {
    std::uniform_int_distribution<std::size_t> pick_z(0, base.size() - 1), pick_u(0, lat.points.size() - 1);
    double worst = 0.0;
    for (std::size_t c = 0; c < catalog.size(); ++c)
      for (int k = 0; k < 200; ++k) {
        const std::size_t iu = pick_u(rng);
        const Point& z = base.points[pick_z(rng)];
        const double g = profiles[c].values[iu];
        const double v = std::abs(catalog[c].kernel.damped(Point(z + lat.points[iu]), z));
        worst = std::max(worst, v - g * (1.0 + 1e-9));
      }
    s.below("wiener.domination", worst, 0.0, "|damped kernel| - G(u)(1 + 1e-9)");
  });

  s.guard("wiener.bound_chain", [&] {
    const QuadratureRule schur = default_schur_rule(param, 30, 61);
    const BasisSpec basis(param, param.n() == 1 ? 30 : 8);
    double worst = -INFINITY;
    std::ostringstream detail;
    for (std::size_t c = 0; c < catalog.size(); ++c) {
      const SchurBounds sb = schur_bounds(catalog[c].kernel, schur, base);
      const double p2 = operator_norm_bound_p(sb.a1, sb.ainf, 2.0, param);
      const double wb = profiles[c].l1_estimate;
      const ComplexMatrix m = catalog[c].matrix(basis).entries;
      Eigen::JacobiSVD<ComplexMatrix> svd(m);
      const double norm = svd.singularValues()(0);
      Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
      const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
      worst = std::max({worst, norm - p2, rho - p2, p2 - wb * (1.0 + 1e-6)});
      detail << catalog[c].name << ": " << norm << " <= " << p2 << " <= " << wb << "; ";
    }
    s.below("wiener.bound_chain", worst, 1e-9, detail.str());
  });

  s.guard("wiener.submultiplicativity", [&] {
    const QuadratureRule rule = build_polar_rule(param, 30, 61);
    double product_err = 0.0, excess = -INFINITY;
    std::uniform_int_distribution<std::size_t> pick(0, catalog.size() - 1);
    for (int k = 0; k < 3; ++k) {
      const std::size_t i = pick(rng), j = pick(rng);
      const DominatingProfile conv = convolution_bound(profiles[i], profiles[j]);
      product_err = std::max(product_err, std::abs(conv.l1_estimate - profiles[i].l1_estimate * profiles[j].l1_estimate));
      const KernelFunction kk = compose_kernels(catalog[i].kernel, catalog[j].kernel, rule);
      const DominatingProfile direct = dominating_profile(kk, base, lat);
      for (std::size_t u = 0; u < conv.values.size(); ++u) excess = std::max(excess, direct.values[u] - conv.values[u]);
    }
    s.below("wiener.submultiplicativity.product", product_err, 1e-10);
    s.below("wiener.submultiplicativity.pointwise", excess, 1e-8);
  });

  s.guard("wiener.triangle", [&] {
    double worst = -INFINITY;
    for (std::size_t i = 0; i + 1 < catalog.size(); ++i) {
      const KernelFunction sum = add_kernels(catalog[i].kernel, catalog[i + 1].kernel);
      const DominatingProfile p = dominating_profile(sum, base, lat);
      worst = std::max(worst, p.l1_estimate - profiles[i].l1_estimate - profiles[i + 1].l1_estimate);
    }
    s.below("wiener.triangle", worst, 1e-9);
  });
}

void spectral_checks(Suite& s, const FockParam& param, const QuadratureRule& rule) {
  if (param.n() != 1) return;
  const double rt = std::sqrt(param.t());
  std::vector<double> radii;
  for (int i = 0; i <= 20; ++i) radii.push_back(0.5 * rt * i);

  s.guard("spectral.compactness", [&] {
    const auto gauss = compactness_test(gaussian_toeplitz_kernel(param, 1.0), radii);
    const auto ident = compactness_test(identity_kernel(param), radii);
    const auto phase = compactness_test(phase_kernel(param), radii);
    const BasisSpec basis(param, 40);
    Eigen::JacobiSVD<ComplexMatrix> svd(catalog_entry(param, "gauss1").matrix(basis).entries);
    const double sv = svd.singularValues()(20);
    std::ostringstream d;
    d << "gauss " << gauss.verdict << ", identity " << ident.verdict << ", phase " << phase.verdict
      << ", sigma_20 = " << sv;
    s.holds("spectral.compactness", gauss.verdict && !ident.verdict && !phase.verdict && sv < 1e-6 * (1.0 + param.t()),
            d.str());
  });

  s.guard("spectral.limit_operators", [&] {
    const SymbolFunction f = phase_symbol(0);
    const BasisSpec basis(param, 10);
    std::vector<double> dev;
    for (double r : {5.0, 10.0, 20.0}) {
      double worst = 0.0;
      for (const Point& x : direction_grid(1, 8)) {
        const LimitDirection ld = make_limit_direction(f, x);
        const TruncatedOperator lim = limit_operator(f, ld, basis);
        const TruncatedOperator sh = shifted_operator(f, Point(-r * rt * x), basis, rule);
        worst = std::max(worst, (lim.entries - sh.entries).operatorNorm());
      }
      dev.push_back(worst);
    }
    std::ostringstream d;
    d << dev[0] << ", " << dev[1] << ", " << dev[2];
    s.holds("spectral.limit_operators", dev[1] < dev[0] && dev[2] < dev[1] && dev[2] < 0.5 * dev[0], d.str());
  });

  const TruncatedOperator phase = catalog_entry(param, "phase").matrix(BasisSpec(param, 60));
  s.guard("spectral.fredholm_stability", [&] {
    const IndexResult r = fredholm_index(phase, 2.0, {30, 35, 40});
    const auto& sm = r.diagnostics.singular_min;
    const double lo = *std::min_element(sm.begin(), sm.end()), hi = *std::max_element(sm.begin(), sm.end());
    s.below("spectral.fredholm_stability", (hi - lo) / lo, 0.1, "relative spread of smallest singular values");
  });
  s.guard("spectral.index_agreement", [&] {
    IndexOptions opt;
    opt.kernel = phase_kernel(param);
    const IndexResult r = fredholm_index(phase, 0.0, {30, 35, 40}, opt);
    std::ostringstream d;
    d << "index " << r.index << ", winding " << (r.diagnostics.winding ? *r.diagnostics.winding : 0);
    s.holds("spectral.index_agreement", r.diagnostics.winding && r.index == -*r.diagnostics.winding && r.index == -1,
            d.str());
  });
}

void parser_checks(Suite& s, const FockParam& param, Rng& rng) {
  s.guard("cli.round_trip", [&] {
    bool ok = true;
    for (const char* src : {"1", "exp(-abs(z)^2)", "phase(z)", "conj(phase(z)) + 2i*z - 3", "-z^2/(1 + abs(z))",
                            "re(z)*im(z) - -z", "(z - 1)^-2", "exp(-0.5*z*conj(z))*phase(z)^2", "1.5e-3 - i"}) {
      const SymbolExpression e = parse_symbol(src);
      const std::string p1 = print_expr(*e.ast);
      const SymbolExpression e2 = parse_symbol(p1);
      ok = ok && same_tree(*e.ast, *e2.ast) && print_expr(*e2.ast) == p1;
    }
    s.holds("cli.round_trip", ok);
  });
  if (param.n() != 1) return;
  s.guard("cli.catalog_agreement", [&] {
    const QuadratureRule rule = build_polar_rule(param, 8, 9);
    const std::vector<std::pair<std::string, SymbolFunction>> pairs = {
        {"exp(-abs(z)^2)", gaussian_symbol(1.0)}, {"phase(z)", phase_symbol(0)}, {"1", constant_symbol(1.0)}};
    double worst = 0.0;
    for (const auto& [src, f] : pairs) {
      const ResolvedSymbol r = resolve_symbol(src, param, rule);
      for (int k = 0; k < 100; ++k) {
        const Point z = random_point(rng, 1, 4.0);
        worst = std::max(worst, std::abs(r.symbol(z) - f(z)));
      }
    }
    s.below("cli.catalog_agreement", worst, 1e-12);
  });
}

}  // namespace

std::vector<CheckResult> run_invariants(const FockParam& param, std::uint64_t seed) {
  Rng rng(seed);
  Suite s;
  const QuadratureRule rule = param.n() == 1 ? build_polar_rule(param) : build_polar_rule(param, 16, 25);
  quadrature_checks(s, param, rule, rng);
  fock_space_checks(s, param, rule, rng);
  operator_checks(s, param, rule, rng);
  wiener_checks(s, param, rng);
  spectral_checks(s, param, rule);
  parser_checks(s, param, rng);
  return s.results;
}

}  // namespace fock::cli
