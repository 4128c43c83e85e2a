#include "fock/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fock {

// symbols
SymbolFunction constant_symbol(Complex c) {
  SymbolFunction f;
  f.eval = [c](const Point&) { return c; };
  f.sup_bound = std::abs(c);
  f.directional_limits = [c](const Point&) -> std::optional<Complex> { return c; };
  std::ostringstream os;
  os << "const(" << c.real() << "," << c.imag() << ")";
  f.label = os.str();
  return f;
}

SymbolFunction phase_symbol(int coordinate) {
  if (coordinate < 0 || coordinate >= kMaxDim) throw ParameterError("phase_symbol: bad coordinate");
  SymbolFunction f;
  // The origin is a null set; 0 there keeps the symbol well defined.
  f.eval = [coordinate](const Point& z) -> Complex {
    const Complex v = z[coordinate];
    const double r = std::abs(v);
    return r == 0.0 ? Complex(0.0) : v / r;
  };
  f.sup_bound = 1.0;
  f.directional_limits = [coordinate](const Point& x) -> std::optional<Complex> {
    const Complex v = x[coordinate];
    const double r = std::abs(v);
    if (r < 1e-12) return std::nullopt;
    return v / r;
  };
  f.label = coordinate == 0 ? "phase" : "phase" + std::to_string(coordinate + 1);
  return f;
}

SymbolFunction gaussian_symbol(double a, Complex c) {
  if (!(a > 0.0)) throw ParameterError("gaussian_symbol: a must be positive");
  SymbolFunction f;
  f.eval = [a, c](const Point& z) { return c * std::exp(-a * norm_sq(z)); };
  f.sup_bound = std::abs(c);
  f.directional_limits = [](const Point&) -> std::optional<Complex> { return Complex(0.0); };
  f.label = "gauss(" + std::to_string(a) + ")";
  return f;
}

// matrices
TruncatedOperator scaled_identity(const BasisSpec& basis, Complex c) {
  const int d = basis.dimension();
  return {basis, c * ComplexMatrix::Identity(d, d), {}};
}

TruncatedOperator toeplitz_matrix(const SymbolFunction& f, const BasisSpec& basis, const QuadratureRule& rule) {
  if (rule.measure != Measure::Gaussian || !(rule.param == basis.param()))
    throw ParameterError("toeplitz_matrix: rule must be a Gaussian rule for the basis parameters");
  if (rule.radial_order <= basis.max_degree())
    throw ParameterError("toeplitz_matrix: radial order must exceed the basis degree");
  const int dim = basis.dimension();
  ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
  constexpr std::size_t kChunk = 2048;
  for (std::size_t start = 0; start < rule.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, rule.size() - start);
    ComplexMatrix e(static_cast<Eigen::Index>(count), dim);
    Eigen::VectorXcd fv(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
      const Point& x = rule.nodes[start + i];
      const Complex v = f.eval(x);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NonFiniteValueError("toeplitz_matrix: symbol is not finite", x);
      fv[static_cast<Eigen::Index>(i)] = v;
      e.row(static_cast<Eigen::Index>(i)) = std::sqrt(rule.weights[start + i]) * basis.values(x).transpose();
    }
    acc.noalias() += e.adjoint() * (fv.asDiagonal() * e);
  }
  return {basis, std::move(acc), {}};
}

QuadratureRule weyl_rule(const FockParam& param, int max_degree, double shift_norm) {
  const double x = shift_norm * shift_norm / param.t();
  const int radial = std::min(300, 2 * max_degree + 40 + static_cast<int>(std::ceil(4.0 * x)));
  return build_polar_rule(FockParam(param.t(), 1), radial, 2 * radial + 1);
}

namespace {

// <W_v e_l, e_m> for one coordinate, l, m <= d. With y = x - v/2 the
// integrand of int k_v(x) e_l(x - v) conj(e_m(x)) d mu_t(x) becomes
// e^{-|v|^2/4t} e^{i Im(y conj v)/t} e_l(y - v/2) conj(e_m(y + v/2)).
ComplexMatrix weyl_matrix_1d(Complex v, int d, const QuadratureRule& rule) {
  const double t = rule.param.t();
  const Complex half = 0.5 * v;
  ComplexMatrix g(static_cast<Eigen::Index>(rule.size()), d + 1);
  ComplexMatrix h(static_cast<Eigen::Index>(rule.size()), d + 1);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Complex y = rule.nodes[i][0];
    const double sw = std::sqrt(rule.weights[i]);
    const Complex phase = std::polar(1.0, (y * std::conj(v)).imag() / t);
    Complex a = sw * phase, b = sw;
    const auto r = static_cast<Eigen::Index>(i);
    for (int m = 0; m <= d; ++m) {
      h(r, m) = a;
      g(r, m) = b;
      a *= (y - half) / std::sqrt((m + 1) * t);
      b *= (y + half) / std::sqrt((m + 1) * t);
    }
  }
  return std::exp(-std::norm(v) / (4.0 * t)) * (g.adjoint() * h);
}

}  // namespace

TruncatedOperator weyl_matrix(const Point& v, const BasisSpec& basis, const QuadratureRule& rule) {
  const FockParam& param = basis.param();
  if (v.size() != param.n()) throw ParameterError("weyl_matrix: shift dimension must equal n");
  if (rule.param.t() != param.t() || rule.measure != Measure::Gaussian)
    throw ParameterError("weyl_matrix: rule must be a Gaussian rule with the basis t");
  const int d = basis.max_degree();
  if (rule.radial_order <= d) throw ParameterError("weyl_matrix: radial order must exceed the basis degree");
  const QuadratureRule one_d =
      rule.param.n() == 1 ? rule : build_polar_rule(FockParam(param.t(), 1), rule.radial_order, rule.angular_order);

  std::vector<ComplexMatrix> factors;
  for (int j = 0; j < param.n(); ++j) factors.push_back(weyl_matrix_1d(v[j], d, one_d));

  const auto& idx = basis.indices();
  const int dim = basis.dimension();
  TruncatedOperator out{basis, ComplexMatrix(dim, dim), {}};
  for (int m = 0; m < dim; ++m)
    for (int l = 0; l < dim; ++l) {
      Complex e = 1.0;
      for (int j = 0; j < param.n(); ++j) e *= factors[static_cast<std::size_t>(j)](idx[static_cast<std::size_t>(m)][j], idx[static_cast<std::size_t>(l)][j]);
      out.entries(m, l) = e;
    }
  for (int l = 0; l < dim; ++l) {
    const double norm = out.entries.col(l).norm();
    if (norm < 1.0 - 1e-3) {
      std::ostringstream os;
      os << "truncation leak: column " << l << " has norm " << norm;
      out.warnings.push_back(os.str());
    }
  }
  return out;
}

TruncatedOperator weyl_matrix(const Point& v, const BasisSpec& basis) {
  return weyl_matrix(v, basis, weyl_rule(basis.param(), basis.max_degree(), v.norm()));
}

KernelFunction kernel_from_matrix(const TruncatedOperator& a) {
  return {a.basis.param(), KernelProvenance::BasisExpansion,
          std::make_shared<BasisExpansionKernel>(std::make_shared<TruncatedOperator>(a)), "matrix"};
}

TruncatedOperator matrix_from_kernel(const KernelFunction& k, const BasisSpec& basis, const QuadratureRule& rule) {
  if (!(k.param() == basis.param())) throw ParameterError("matrix_from_kernel: parameter mismatch");
  const int dim = basis.dimension();
  const FockParam& param = basis.param();

  if (auto be = std::dynamic_pointer_cast<const BasisExpansionKernel>(k.impl())) {
    if (be->op().basis.max_degree() >= basis.max_degree())
      return {basis, be->op().entries.topLeftCorner(dim, dim), {}};
  }
  if (auto bs = std::dynamic_pointer_cast<const BandSeriesKernel>(k.impl())) return {basis, bs->matrix(dim), {}};
  if (auto cf = std::dynamic_pointer_cast<const ClosedFormKernel>(k.impl())) {
    switch (cf->shape()) {
      case ClosedFormKernel::Shape::Identity:
        return scaled_identity(basis, cf->scale());
      case ClosedFormKernel::Shape::Gaussian: {
        TruncatedOperator out = scaled_identity(basis, 0.0);
        const double s = 1.0 + cf->gauss_a() * param.t();
        for (int i = 0; i < dim; ++i)
          out.entries(i, i) = cf->scale() * std::pow(s, -(basis.indices()[static_cast<std::size_t>(i)].degree() + param.n()));
        return out;
      }
      case ClosedFormKernel::Shape::Weyl: {
        TruncatedOperator out = weyl_matrix(cf->weyl_shift(), basis);
        out.entries *= cf->scale();
        return out;
      }
    }
  }

  // <A e_l, e_m> = int int e_l(w) k(w, z) conj(e_m(z)) d mu(w) d mu(z), in
  // damped form against Lebesgue weights.
  const QuadratureRule leb = lebesgue_rule(rule);
  const std::size_t nn = leb.size();
  ComplexMatrix p(static_cast<Eigen::Index>(nn), dim);
  for (std::size_t i = 0; i < nn; ++i)
    p.row(static_cast<Eigen::Index>(i)) = leb.weights[i] * basis.damped_values(leb.nodes[i]).transpose();
  ComplexMatrix kz(static_cast<Eigen::Index>(nn), static_cast<Eigen::Index>(nn));
  std::vector<Complex> col(nn);
  for (std::size_t j = 0; j < nn; ++j) {
    k.damped_many_w(leb.nodes[j], leb.nodes, col);
    for (std::size_t i = 0; i < nn; ++i) kz(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = col[i];
  }
  const double c = param.normalizer() * param.normalizer();
  return {basis, c * (p.adjoint() * (kz * p)), {}};
}

Complex apply_operator(const KernelFunction& k, const PointFn& f, const Point& z, const QuadratureRule& rule) {
  if (!(rule.param == k.param())) throw ParameterError("apply_operator: rule/kernel parameter mismatch");
  std::vector<Complex> d(rule.size());
  k.damped_many_w(z, rule.nodes, d);
  const double t = k.param().t();
  const double zz = norm_sq(z) / (2.0 * t);
  CompensatedSum sum;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Point& w = rule.nodes[i];
    const Complex fv = f(w);
    const Complex v = rule.weights[i] * fv * d[i] * std::exp(norm_sq(w) / (2.0 * t) + zz);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NonFiniteValueError("apply_operator: non-finite integrand", w);
    sum.add(v);
  }
  return sum.value();
}

// algebra
namespace {

constexpr int kBandLength = 4096;

std::shared_ptr<const BandSeriesKernel> as_band(const KernelFunction& k) {
  if (k.param().n() != 1) return nullptr;
  if (auto bs = std::dynamic_pointer_cast<const BandSeriesKernel>(k.impl())) return bs;
  auto cf = std::dynamic_pointer_cast<const ClosedFormKernel>(k.impl());
  if (!cf) return nullptr;
  const double t = k.param().t();
  std::vector<Complex> c(kBandLength);
  if (cf->shape() == ClosedFormKernel::Shape::Identity) {
    std::fill(c.begin(), c.end(), cf->scale());
  } else if (cf->shape() == ClosedFormKernel::Shape::Gaussian) {
    const double q = 1.0 / (1.0 + cf->gauss_a() * t);
    Complex v = cf->scale() * q;
    for (auto& x : c) {
      x = v;
      v *= q;
    }
  } else {
    return nullptr;
  }
  return std::make_shared<BandSeriesKernel>(t, std::map<int, std::vector<Complex>>{{0, std::move(c)}});
}

// (A1 A2) e_m = sum_{b1,b2} c2_{b2}[m] c1_{b1}[m + b2] e_{m + b1 + b2}.
std::shared_ptr<const BandSeriesKernel> band_product(const BandSeriesKernel& a1, const BandSeriesKernel& a2) {
  std::map<int, std::vector<Complex>> out;
  int len = a2.length();
  for (const auto& [b2, c2] : a2.bands()) len = std::min(len, a1.length() - std::max(b2, 0));
  if (len <= 0) throw NumericError("band_product: series too short");
  for (const auto& [b2, c2] : a2.bands())
    for (const auto& [b1, c1] : a1.bands()) {
      auto& dst = out[b1 + b2];
      dst.resize(static_cast<std::size_t>(len), 0.0);
      for (int m = std::max(0, -b2); m < len; ++m)
        dst[static_cast<std::size_t>(m)] += c2[static_cast<std::size_t>(m)] * c1[static_cast<std::size_t>(m + b2)];
    }
  return std::make_shared<BandSeriesKernel>(a1.t(), std::move(out));
}

KernelProvenance weaker(KernelProvenance a, KernelProvenance b) {
  return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

}  // namespace

KernelFunction compose_kernels(const KernelFunction& k1, const KernelFunction& k2, const QuadratureRule& rule) {
  if (!(k1.param() == k2.param())) throw ParameterError("compose_kernels: parameter mismatch");
  const FockParam& param = k1.param();
  using Shape = ClosedFormKernel::Shape;
  const auto c1 = std::dynamic_pointer_cast<const ClosedFormKernel>(k1.impl());
  const auto c2 = std::dynamic_pointer_cast<const ClosedFormKernel>(k2.impl());

  if (c1 && c1->shape() == Shape::Identity) return scale_kernel(k2, c1->scale());
  if (c2 && c2->shape() == Shape::Identity) return scale_kernel(k1, c2->scale());

  if (c1 && c2 && c1->shape() == Shape::Weyl && c2->shape() == Shape::Weyl) {
    // W_a W_b = e^{-i Im(a . conj b)/t} W_{a+b}
    const Point& a = c1->weyl_shift();
    const Point& b = c2->weyl_shift();
    const Complex s = c1->scale() * c2->scale() * std::polar(1.0, -dot_conj(a, b).imag() / param.t());
    return {param, KernelProvenance::ClosedForm,
            std::make_shared<ClosedFormKernel>(param, Shape::Weyl, s, 0.0, Point(a + b)), "weyl"};
  }
  if (c1 && c2 && c1->shape() == Shape::Gaussian && c2->shape() == Shape::Gaussian) {
    // Diagonal entries multiply: (1 + a t) becomes (1 + a1 t)(1 + a2 t).
    const double t = param.t();
    const double s = (1.0 + c1->gauss_a() * t) * (1.0 + c2->gauss_a() * t);
    return gaussian_toeplitz_kernel(param, (s - 1.0) / t, c1->scale() * c2->scale());
  }
  if (c1 && c1->shape() == Shape::Weyl)
    return {param, k2.provenance(),
            std::make_shared<WeylFactorKernel>(param, k2.impl(), c1->weyl_shift(), true, c1->scale())};
  if (c2 && c2->shape() == Shape::Weyl)
    return {param, k1.provenance(),
            std::make_shared<WeylFactorKernel>(param, k1.impl(), c2->weyl_shift(), false, c2->scale())};

  const auto b1 = as_band(k1);
  const auto b2 = as_band(k2);
  if (b1 && b2) return {param, KernelProvenance::Series, band_product(*b1, *b2)};

  const auto e1 = std::dynamic_pointer_cast<const BasisExpansionKernel>(k1.impl());
  const auto e2 = std::dynamic_pointer_cast<const BasisExpansionKernel>(k2.impl());
  if (e1 && e2 && e1->op().dimension() == e2->op().dimension()) {
    TruncatedOperator prod{e1->op().basis, e1->op().entries * e2->op().entries, {}};
    return kernel_from_matrix(prod);
  }

  if (!(rule.param == param) || rule.measure != Measure::Gaussian)
    throw ParameterError("compose_kernels: needs a Gaussian rule for the kernel parameters");
  return {param, weaker(KernelProvenance::Quadrature, weaker(k1.provenance(), k2.provenance())),
          std::make_shared<QuadratureCompositionKernel>(param, k1.impl(), k2.impl(),
                                                        lebesgue_rule(rescale_rule(rule, 2.0)))};
}

KernelFunction involute_kernel(const KernelFunction& k) {
  const FockParam& param = k.param();
  if (auto cf = std::dynamic_pointer_cast<const ClosedFormKernel>(k.impl())) {
    // W_v^* = W_{-v}; the other shapes are self-adjoint up to the scale.
    const bool weyl = cf->shape() == ClosedFormKernel::Shape::Weyl;
    return {param, k.provenance(),
            std::make_shared<ClosedFormKernel>(param, cf->shape(), std::conj(cf->scale()), cf->gauss_a(),
                                               weyl ? Point(-cf->weyl_shift()) : cf->weyl_shift()),
            k.label()};
  }
  if (auto bs = std::dynamic_pointer_cast<const BandSeriesKernel>(k.impl())) {
    // A e_m has coefficient c_b[m] on e_{m+b}, so A^* e_{m+b} has conj(c_b[m]) on e_m.
    std::map<int, std::vector<Complex>> bands;
    for (const auto& [b, c] : bs->bands()) {
      std::vector<Complex> adj(static_cast<std::size_t>(std::max<int>(0, static_cast<int>(c.size()) + b)), 0.0);
      for (int m = std::max(0, -b); m < static_cast<int>(c.size()); ++m)
        adj[static_cast<std::size_t>(m + b)] = std::conj(c[static_cast<std::size_t>(m)]);
      bands[-b] = std::move(adj);
    }
    return {param, k.provenance(), std::make_shared<BandSeriesKernel>(bs->t(), std::move(bands)), k.label()};
  }
  if (auto be = std::dynamic_pointer_cast<const BasisExpansionKernel>(k.impl())) {
    TruncatedOperator adj{be->op().basis, be->op().entries.adjoint(), {}};
    return kernel_from_matrix(adj);
  }
  if (auto inv = std::dynamic_pointer_cast<const InvolutionKernel>(k.impl()))
    return {param, k.provenance(), inv->inner(), k.label()};
  return {param, k.provenance(), std::make_shared<InvolutionKernel>(k.impl()), k.label()};
}

Complex berezin_bivariate(const KernelFunction& k, const Point& w, const Point& z) { return k.damped(w, z); }

Complex berezin_toeplitz_quadrature(const SymbolFunction& f, const Point& w, const Point& z,
                                    const QuadratureRule& rule) {
  const FockParam& param = rule.param;
  return integrate_mu(
      [&](const Point& x) {
        return f.eval(x) * kernel_k_normalized(w, x, param) * std::conj(kernel_k_normalized(z, x, param));
      },
      rule);
}

SymbolFunction translate_symbol(const SymbolFunction& f, const Point& v) {
  SymbolFunction g = f;
  const Point shift = static_cast<double>(kShiftSign) * v;
  auto inner = f.eval;
  g.eval = [inner, shift](const Point& x) { return inner(Point(x + shift)); };
  g.label = f.label + "(shifted)";
  return g;
}

TruncatedOperator shifted_operator(const SymbolFunction& f, const Point& v, const BasisSpec& basis,
                                   const QuadratureRule& rule) {
  if (v.size() != basis.param().n()) throw ParameterError("shifted_operator: shift dimension must equal n");
  return toeplitz_matrix(translate_symbol(f, v), basis, rule);
}

}  // namespace fock
