#include "fock/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "fock/grids.hpp"
#include "fock/operators.hpp"

namespace fock {

void sort_complex(std::vector<Complex>& v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

std::vector<Complex> dedupe(const std::vector<Complex>& v, double tol) {
  std::vector<Complex> out;
  for (const Complex& x : v) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](Complex y) { return std::abs(x - y) <= tol; });
    if (!seen) out.push_back(x);
  }
  return out;
}

SpectralReport truncated_spectrum(const TruncatedOperator& a, const std::vector<int>& degrees,
                                  std::optional<Complex> probe) {
  SpectralReport rep;
  for (int d : degrees) {
    if (d < 0 || d > a.basis.max_degree())
      throw ParameterError("truncated_spectrum: degree outside the basis");
    const ComplexMatrix block = a.section(d);
    Eigen::ComplexEigenSolver<ComplexMatrix> es(block, false);
    if (es.info() != Eigen::Success) throw NumericError("truncated_spectrum: eigensolver failed");
    std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    sort_complex(ev);
    rep.degrees.push_back(d);
    rep.eigenvalues.push_back(std::move(ev));
    if (probe) {
      const ComplexMatrix shifted = block - *probe * ComplexMatrix::Identity(block.rows(), block.cols());
      Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
      rep.singular_min.push_back(svd.singularValues().minCoeff());
    }
  }
  return rep;
}

CompactnessResult compactness_test(const KernelFunction& k, const std::vector<double>& radii, double tau, int window,
                                   int samples_per_circle) {
  if (radii.empty()) throw ParameterError("compactness_test: no radii");
  if (!std::is_sorted(radii.begin(), radii.end()) ||
      std::adjacent_find(radii.begin(), radii.end()) != radii.end())
    throw ParameterError("compactness_test: radii must be strictly increasing");
  const double sqrt_t = std::sqrt(k.param().t());
  if (radii.back() < 8.0 * sqrt_t - 1e-12) throw ParameterError("compactness_test: radii must reach 8 sqrt(t)");
  if (window < 2) throw ParameterError("compactness_test: window must be at least 2");

  const int n = k.param().n();
  const std::vector<Point> dirs = direction_grid(n, samples_per_circle);
  CompactnessResult out;
  out.radii = radii;
  for (double r : radii) {
    double m = 0.0;
    if (r == 0.0) {
      m = std::abs(k.damped(zero_point(n), zero_point(n)));
    } else {
      for (const Point& x : dirs) {
        const Point z = r * x;
        m = std::max(m, std::abs(k.damped(z, z)));
      }
    }
    out.decay.push_back(m);
  }
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(window), out.decay.size());
  bool decreasing = true;
  for (std::size_t i = out.decay.size() - w + 1; i < out.decay.size(); ++i)
    decreasing = decreasing && out.decay[i] <= out.decay[i - 1];
  out.verdict = out.decay.back() < tau && decreasing;
  return out;
}

LimitDirection make_limit_direction(const SymbolFunction& f, const Point& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw ParameterError("limit direction must be a unit vector");
  if (!f.directional_limits) throw UnsupportedSymbolError("symbol has no directional-limit metadata");
  const auto c = (*f.directional_limits)(direction);
  if (!c) throw UnsupportedSymbolError("symbol has no radial limit in this direction");
  return {direction, constant_symbol(*c), *c};
}

TruncatedOperator limit_operator(const SymbolFunction& f, const LimitDirection& x, const BasisSpec& basis) {
  if (!f.directional_limits) throw UnsupportedSymbolError("symbol has no directional-limit metadata");
  if (x.constant) return scaled_identity(basis, *x.constant);
  const QuadratureRule rule =
      build_polar_rule(basis.param(), std::max(kDefaultRadialOrder, basis.max_degree() + 1), kDefaultAngularOrder);
  return toeplitz_matrix(x.limit_symbol, basis, rule);
}

std::vector<Complex> essential_spectrum_estimate(const SymbolFunction& f, const std::vector<Point>& directions,
                                                 const BasisSpec& basis) {
  if (!f.directional_limits) throw UnsupportedSymbolError("symbol has no directional-limit metadata");
  std::vector<Complex> all;
  for (const Point& x : directions) {
    if (!(*f.directional_limits)(x)) continue;
    const TruncatedOperator op = limit_operator(f, make_limit_direction(f, x), basis);
    if (op.entries.isDiagonal(0.0)) {
      // c I: skip the eigensolver.
      for (Eigen::Index i = 0; i < op.entries.rows(); ++i) all.push_back(op.entries(i, i));
    } else {
      const auto rep = truncated_spectrum(op, {basis.max_degree()});
      all.insert(all.end(), rep.eigenvalues[0].begin(), rep.eigenvalues[0].end());
    }
  }
  auto out = dedupe(all, 1e-6);
  sort_complex(out);
  return out;
}

double distance_to_set(Complex lambda, const std::vector<Complex>& set) {
  double d = std::numeric_limits<double>::infinity();
  for (const Complex& x : set) d = std::min(d, std::abs(lambda - x));
  return d;
}

double hausdorff_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  double h = 0.0;
  for (const Complex& x : a) h = std::max(h, distance_to_set(x, b));
  for (const Complex& y : b) h = std::max(h, distance_to_set(y, a));
  return h;
}

int berezin_winding(const KernelFunction& k, Complex lambda, double radius, int samples) {
  if (k.param().n() != 1) throw ParameterError("berezin_winding: needs n = 1");
  if (samples < 16 || !(radius > 0.0)) throw ParameterError("berezin_winding: bad radius or sample count");
  double total = 0.0;
  Complex prev = 0.0;
  for (int j = 0; j <= samples; ++j) {
    const Point z = make_point({std::polar(radius, 2.0 * kPi * j / samples)});
    const Complex v = k.damped(z, z) - lambda;
    if (std::abs(v) < 1e-12) throw NumericError("berezin_winding: curve passes through lambda");
    if (j > 0) {
      const double step = std::arg(v / prev);
      if (std::abs(step) > 0.5 * kPi) throw NumericError("berezin_winding: sampling too coarse");
      total += step;
    }
    prev = v;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

namespace {

int count_small(const ComplexMatrix& m, double eps, double* smin) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  // A tall N x k block has exactly k singular values.
  int c = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] < eps) ++c;
  if (smin) *smin = s.size() ? s.minCoeff() : 0.0;
  return c;
}

}  // namespace

IndexResult fredholm_index(const TruncatedOperator& a, Complex lambda, const std::vector<int>& degrees,
                           const IndexOptions& options) {
  if (degrees.empty()) throw ParameterError("fredholm_index: no degrees");
  if (options.essential_spectrum &&
      distance_to_set(lambda, *options.essential_spectrum) <= options.margin)
    throw NotFredholmError("fredholm_index: lambda lies in the estimated essential spectrum");

  const int dim = a.dimension();
  const ComplexMatrix shifted = a.entries - lambda * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix adjoint = shifted.adjoint();

  IndexResult res;
  auto& diag = res.diagnostics;
  for (int d : degrees) {
    if (d < 0 || d >= a.basis.max_degree())
      throw ParameterError("fredholm_index: degrees must lie below the basis degree");
    const int k = a.basis.section_size(d);
    double smin = 0.0;
    const int ker = count_small(shifted.leftCols(k), options.eps, &smin);
    const int coker = count_small(adjoint.leftCols(k), options.eps, nullptr);
    diag.degrees.push_back(d);
    diag.kernel_counts.push_back(ker);
    diag.cokernel_counts.push_back(coker);
    diag.singular_min.push_back(smin);
  }

  const std::size_t last = std::min<std::size_t>(3, degrees.size());
  const std::size_t first = degrees.size() - last;
  for (std::size_t i = first + 1; i < degrees.size(); ++i) {
    if (diag.kernel_counts[i] != diag.kernel_counts[first] || diag.cokernel_counts[i] != diag.cokernel_counts[first])
      throw InconclusiveIndexError("fredholm_index: kernel/cokernel counts differ across degrees",
                                   diag.kernel_counts, diag.cokernel_counts);
  }
  res.index = diag.kernel_counts.back() - diag.cokernel_counts.back();

  if (options.kernel && a.basis.param().n() == 1) {
    diag.winding_radius = options.winding_radius * std::sqrt(a.basis.param().t());
    diag.winding = berezin_winding(*options.kernel, lambda, diag.winding_radius, options.winding_samples);
  }
  return res;
}

}  // namespace fock
