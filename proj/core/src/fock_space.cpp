#include "fock/fock_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fock {

// multi-indices
namespace {

void append_degree(int n, int degree, std::vector<int>& prefix,
                   std::vector<MultiIndex>& out) {
  const int used = std::accumulate(prefix.begin(), prefix.end(), 0);
  if (static_cast<int>(prefix.size()) == n - 1) {
    prefix.push_back(degree - used);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = degree - used; e >= 0; --e) {
    prefix.push_back(e);
    append_degree(n, degree, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> graded_lex_indices(int n, int max_degree) {
  if (n < 1) throw ParameterError("graded_lex_indices: n must be positive");
  if (max_degree < 0) throw ParameterError("graded_lex_indices: negative degree");
  std::vector<MultiIndex> out;
  std::vector<int> prefix;
  for (int d = 0; d <= max_degree; ++d) append_degree(n, d, prefix, out);
  return out;
}

std::int64_t graded_count(int n, int max_degree) {
  // C(D + n, n)
  std::int64_t c = 1;
  for (int k = 1; k <= n; ++k) c = c * (max_degree + k) / k;
  return c;
}

// basis
BasisSpec::BasisSpec(const FockParam& param, int max_degree)
    : param_(param), max_degree_(max_degree) {
  if (max_degree < 0) throw ParameterError("BasisSpec: max_degree must be >= 0");
  indices_ = graded_lex_indices(param.n(), max_degree);
}

int BasisSpec::section_size(int d) const {
  if (d < 0 || d > max_degree_)
    throw ParameterError("BasisSpec::section_size: degree out of range");
  return static_cast<int>(graded_count(param_.n(), d));
}

void damped_monomials_1d(Complex z, double t, int max_m, Complex* out) {
  const double r2 = std::norm(z);
  const double damp_exp = r2 / (2.0 * t);
  if (damp_exp < 600.0) {
    out[0] = std::exp(-damp_exp);
    for (int m = 0; m < max_m; ++m)
      out[m + 1] = out[m] * z / std::sqrt((m + 1) * t);
    return;
  }
  // e^{-|z|^2/2t} underflows; build each term from its logarithm.
  const double log_r = 0.5 * std::log(r2);
  const double arg = std::arg(z);
  for (int m = 0; m <= max_m; ++m) {
    const double log_mag =
        m * log_r - 0.5 * (std::lgamma(m + 1.0) + m * std::log(t)) - damp_exp;
    out[m] = std::polar(std::exp(log_mag), m * arg);
  }
}

Eigen::VectorXcd BasisSpec::damped_values(const Point& z) const {
  const int n = param_.n();
  const int d = max_degree_;
  std::vector<Complex> per(static_cast<std::size_t>(n * (d + 1)));
  for (int j = 0; j < n; ++j)
    damped_monomials_1d(z[j], param_.t(), d, per.data() + j * (d + 1));
  Eigen::VectorXcd out(dimension());
  for (int i = 0; i < dimension(); ++i) {
    const MultiIndex& m = indices_[static_cast<std::size_t>(i)];
    Complex v = 1.0;
    for (int j = 0; j < n; ++j) v *= per[static_cast<std::size_t>(j * (d + 1) + m[j])];
    out[i] = v;
  }
  return out;
}

Eigen::VectorXcd BasisSpec::values(const Point& z) const {
  const int n = param_.n();
  const int d = max_degree_;
  std::vector<Complex> per(static_cast<std::size_t>(n * (d + 1)));
  for (int j = 0; j < n; ++j) {
    Complex* row = per.data() + j * (d + 1);
    row[0] = 1.0;
    for (int m = 0; m < d; ++m) row[m + 1] = row[m] * z[j] / std::sqrt((m + 1) * param_.t());
  }
  Eigen::VectorXcd out(dimension());
  for (int i = 0; i < dimension(); ++i) {
    const MultiIndex& m = indices_[static_cast<std::size_t>(i)];
    Complex v = 1.0;
    for (int j = 0; j < n; ++j) v *= per[static_cast<std::size_t>(j * (d + 1) + m[j])];
    out[i] = v;
  }
  return out;
}

// kernels and basis functions
Complex kernel_K(const Point& z, const Point& w, const FockParam& param) {
  return std::exp(dot_conj(w, z) / param.t());
}

Complex kernel_k_normalized(const Point& z, const Point& w, const FockParam& param) {
  return std::exp(dot_conj(w, z) / param.t() - norm_sq(z) / (2.0 * param.t()));
}

Complex basis_eval(const MultiIndex& m, const Point& z, const FockParam& param) {
  if (m.size() != param.n()) throw ParameterError("basis_eval: index length must equal n");
  Complex v = 1.0;
  for (int j = 0; j < m.size(); ++j) {
    for (int k = 0; k < m[j]; ++k) v *= z[j] / std::sqrt((k + 1) * param.t());
  }
  return v;
}

// norms
double fock_norm_p(const PointFn& f, double p, const FockParam& param,
                   const QuadratureRule& rule) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw ParameterError("fock_norm_p: p must be a finite real >= 1");
  if (rule.measure != Measure::Gaussian || !(rule.param == param))
    throw ParameterError("fock_norm_p: rule must be a Gaussian rule for the same (t, n)");
  // mu_{2t/p} from mu_t: scale nodes by sqrt(2/p), keep weights.
  const QuadratureRule scaled = rescale_rule(rule, 2.0 / p);
  const Complex integral = integrate_mu(
      [&](const Point& z) { return Complex(std::pow(std::abs(f(z)), p), 0.0); }, scaled);
  return std::pow(integral.real(), 1.0 / p);
}

namespace {

// Nelder-Mead maximization of phi over R^dim, starting from x0 with step h.
double nelder_mead_max(const std::function<double(const Eigen::VectorXd&)>& phi,
                       const Eigen::VectorXd& x0, double h) {
  const int dim = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(dim + 1), x0);
  std::vector<double> val(static_cast<std::size_t>(dim + 1));
  for (int i = 0; i < dim; ++i) simplex[static_cast<std::size_t>(i + 1)][i] += h;
  // Minimize -phi.
  auto cost = [&](const Eigen::VectorXd& x) { return -phi(x); };
  for (std::size_t i = 0; i < simplex.size(); ++i) val[i] = cost(simplex[i]);

  std::vector<std::size_t> order(simplex.size());
  for (int iter = 0; iter < 4000; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    double size = 0.0;
    for (std::size_t i = 0; i < simplex.size(); ++i)
      size = std::max(size, (simplex[i] - simplex[best]).lpNorm<Eigen::Infinity>());
    if (size < 1e-11) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < simplex.size(); ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= dim;

    const Eigen::VectorXd xr = centroid + (centroid - simplex[worst]);
    const double fr = cost(xr);
    if (fr < val[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = cost(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        val[worst] = fe;
      } else {
        simplex[worst] = xr;
        val[worst] = fr;
      }
    } else if (fr < val[second]) {
      simplex[worst] = xr;
      val[worst] = fr;
    } else {
      const Eigen::VectorXd xc = centroid + 0.5 * (simplex[worst] - centroid);
      const double fc = cost(xc);
      if (fc < val[worst]) {
        simplex[worst] = xc;
        val[worst] = fc;
      } else {
        for (std::size_t i = 0; i < simplex.size(); ++i) {
          if (i == best) continue;
          simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
          val[i] = cost(simplex[i]);
        }
      }
    }
  }
  return -*std::min_element(val.begin(), val.end());
}

}  // namespace

double fock_norm_infty(const PointFn& f, const FockParam& param, const PointGrid& grid) {
  if (grid.points.empty()) throw ParameterError("fock_norm_infty: empty grid");
  const double t = param.t();
  auto weighted = [&](const Point& z) { return std::abs(f(z)) * std::exp(-norm_sq(z) / (2.0 * t)); };

  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(grid.points.size());
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const double v = weighted(grid.points[i]);
    if (!std::isfinite(v)) throw NonFiniteValueError("fock_norm_infty: non-finite value", grid.points[i]);
    ranked.emplace_back(v, i);
  }
  const std::size_t keep = std::min<std::size_t>(3, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<long>(keep), ranked.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });

  const int n = param.n();
  auto to_point = [n](const Eigen::VectorXd& x) {
    Point p(n);
    for (int j = 0; j < n; ++j) p[j] = Complex(x[2 * j], x[2 * j + 1]);
    return p;
  };
  // A step of roughly one grid cell.
  const double h = grid.radius / std::sqrt(static_cast<double>(grid.points.size()));

  double best = ranked.front().first;
  for (std::size_t k = 0; k < keep; ++k) {
    const Point& start = grid.points[ranked[k].second];
    Eigen::VectorXd x0(2 * n);
    for (int j = 0; j < n; ++j) {
      x0[2 * j] = start[j].real();
      x0[2 * j + 1] = start[j].imag();
    }
    const double v = nelder_mead_max([&](const Eigen::VectorXd& x) { return weighted(to_point(x)); },
                                     x0, std::max(h, 1e-3));
    best = std::max(best, v);
  }
  return best;
}

Complex bergman_project(const PointFn& f, const Point& z, const FockParam& param,
                        const QuadratureRule& rule) {
  if (!(rule.param == param)) throw ParameterError("bergman_project: rule/param mismatch");
  return integrate_mu([&](const Point& w) { return f(w) * std::exp(dot_conj(z, w) / param.t()); },
                      rule);
}

}  // namespace fock
