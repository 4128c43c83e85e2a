#include "fock/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fock/fock_space.hpp"

namespace fock {

std::string to_string(KernelProvenance p) {
  switch (p) {
    case KernelProvenance::ClosedForm: return "closed-form";
    case KernelProvenance::BasisExpansion: return "basis-expansion";
    case KernelProvenance::Series: return "series";
    case KernelProvenance::Quadrature: return "quadrature";
  }
  return "unknown";
}

void KernelImpl::damped_many_w(const Point& z, std::span<const Point> ws,
                               std::span<Complex> out) const {
  for (std::size_t i = 0; i < ws.size(); ++i) out[i] = damped(ws[i], z);
}

void KernelImpl::damped_many_z(const Point& w, std::span<const Point> zs,
                               std::span<Complex> out) const {
  for (std::size_t i = 0; i < zs.size(); ++i) out[i] = damped(w, zs[i]);
}

KernelFunction::KernelFunction(FockParam param, KernelProvenance provenance,
                               std::shared_ptr<const KernelImpl> impl, std::string label)
    : param_(param), provenance_(provenance), impl_(std::move(impl)), label_(std::move(label)) {
  if (!impl_) throw ParameterError("KernelFunction: null implementation");
}

Complex KernelFunction::eval(const Point& w, const Point& z) const {
  return damped(w, z) * std::exp((norm_sq(w) + norm_sq(z)) / (2.0 * param_.t()));
}

// closed forms
ClosedFormKernel::ClosedFormKernel(FockParam param, Shape shape, Complex scale, double gauss_a,
                                   Point weyl_shift)
    : param_(param), shape_(shape), scale_(scale), gauss_a_(gauss_a), weyl_shift_(std::move(weyl_shift)) {
  if (shape_ == Shape::Gaussian && !(gauss_a_ > 0.0))
    throw ParameterError("gaussian kernel: a must be positive");
  if (shape_ == Shape::Weyl && weyl_shift_.size() != param_.n())
    throw ParameterError("weyl kernel: shift dimension must equal n");
}

Complex ClosedFormKernel::damped(const Point& w, const Point& z) const {
  const double t = param_.t();
  const double half = (norm_sq(w) + norm_sq(z)) / (2.0 * t);
  switch (shape_) {
    case Shape::Identity:
      return scale_ * std::exp(dot_conj(z, w) / t - half);
    case Shape::Gaussian: {
      const double s = 1.0 + gauss_a_ * t;
      return scale_ * std::pow(s, -param_.n()) * std::exp(dot_conj(z, w) / (t * s) - half);
    }
    case Shape::Weyl: {
      const Point& v = weyl_shift_;
      const Complex e = dot_conj(z, v) - 0.5 * norm_sq(v) + dot_conj(Point(z - v), w);
      return scale_ * std::exp(e / t - half);
    }
  }
  return 0.0;
}

// band series
BandSeriesKernel::BandSeriesKernel(double t, std::map<int, std::vector<Complex>> bands)
    : t_(t), bands_(std::move(bands)) {
  if (!(t > 0.0)) throw ParameterError("BandSeriesKernel: t must be positive");
  if (bands_.empty()) bands_[0] = std::vector<Complex>(1, 0.0);
  length_ = std::numeric_limits<int>::max();
  for (auto& [b, c] : bands_) {
    length_ = std::min(length_, static_cast<int>(c.size()));
    max_band_ = std::max(max_band_, std::abs(b));
    for (int m = 0; m < static_cast<int>(c.size()) && m + b < 0; ++m) c[static_cast<std::size_t>(m)] = 0.0;
  }
  inv_sqrt_.resize(static_cast<std::size_t>(length_ + max_band_ + 1));
  for (std::size_t m = 0; m < inv_sqrt_.size(); ++m) inv_sqrt_[m] = 1.0 / std::sqrt((m + 1.0) * t_);
}

int BandSeriesKernel::terms_for(double x) const {
  // Term m carries the factor |e_m(w)| e^{-|w|^2/2t}, the square root of a
  // Poisson weight with mean x = |w|^2/t; beyond x + 12 sqrt(x) + 40 it is
  // below 1e-16.
  const int needed = static_cast<int>(std::ceil(x + 12.0 * std::sqrt(x) + 40.0)) + max_band_;
  if (needed > length_)
    throw NumericError("band series kernel: " + std::to_string(length_) +
                       " coefficients cannot resolve |z|^2/t = " + std::to_string(x));
  return needed;
}

int BandSeriesKernel::first_term(double x) const {
  // Left Poisson tail: below x - 13 sqrt(x) the factor is under 1e-18.
  return std::max(0, static_cast<int>(std::floor(x - 13.0 * std::sqrt(x))) - max_band_);
}

void BandSeriesKernel::fill(Complex z, int lo, int hi, Complex* out) const {
  if (hi < lo) return;
  const double r2 = std::norm(z);
  const double damp = r2 / (2.0 * t_);
  if (lo == 0 && damp < 600.0) {
    out[0] = std::exp(-damp);
  } else if (r2 == 0.0) {
    out[lo] = lo == 0 ? 1.0 : 0.0;
  } else {
    const double log_mag = lo * 0.5 * std::log(r2 / t_) - 0.5 * std::lgamma(lo + 1.0) - damp;
    out[lo] = std::polar(std::exp(log_mag), lo * std::arg(z));
  }
  // Plain real arithmetic: std::complex products go through the slow
  // inf/nan-aware path.
  const double zr = z.real(), zi = z.imag();
  double ar = out[lo].real(), ai = out[lo].imag();
  for (int m = lo; m < hi; ++m) {
    const double s = inv_sqrt_[static_cast<std::size_t>(m)];
    const double br = (ar * zr - ai * zi) * s;
    const double bi = (ar * zi + ai * zr) * s;
    out[m + 1] = Complex(br, bi);
    ar = br;
    ai = bi;
  }
}

Complex BandSeriesKernel::sum_terms(const Complex* dz, const Complex* dw, int lo, int limit) const {
  Complex total = 0.0;
  for (const auto& [b, c] : bands_) {
    const int start = std::max(lo, -b);
    double re = 0.0, im = 0.0;
    for (int m = start; m < limit; ++m) {
      const Complex cm = c[static_cast<std::size_t>(m)], a = dz[m + b], q = dw[m];
      const double pr = cm.real() * a.real() - cm.imag() * a.imag();
      const double pi = cm.real() * a.imag() + cm.imag() * a.real();
      re += pr * q.real() + pi * q.imag();
      im += pi * q.real() - pr * q.imag();
    }
    total += Complex(re, im);
  }
  return total;
}

Complex BandSeriesKernel::damped(const Point& w, const Point& z) const {
  if (w.size() != 1 || z.size() != 1) throw ParameterError("band series kernels are one-dimensional");
  thread_local std::vector<Complex> dz, dw;
  const double xw = std::norm(w[0]) / t_, xz = std::norm(z[0]) / t_;
  const int limit = terms_for(std::min(xw, xz));
  const int lo = first_term(std::max(xw, xz));
  if (lo >= limit) return 0.0;
  dz.resize(static_cast<std::size_t>(limit + max_band_ + 1));
  dw.resize(static_cast<std::size_t>(limit + 1));
  fill(z[0], std::max(0, lo - max_band_), limit + max_band_, dz.data());
  fill(w[0], lo, limit, dw.data());
  return sum_terms(dz.data(), dw.data(), lo, limit);
}

void BandSeriesKernel::damped_many_w(const Point& z, std::span<const Point> ws,
                                     std::span<Complex> out) const {
  if (z.size() != 1) throw ParameterError("band series kernels are one-dimensional");
  thread_local std::vector<Complex> dz, dw;
  const double xz = std::norm(z[0]) / t_;
  const int zmax = terms_for(xz);
  const int zlo = std::max(0, first_term(xz) - max_band_);
  dz.resize(static_cast<std::size_t>(zmax + max_band_ + 1));
  fill(z[0], zlo, zmax + max_band_, dz.data());
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const Complex w = ws[i][0];
    const double xw = std::norm(w) / t_;
    const int limit = std::min(zmax, terms_for(std::min(xw, xz)));
    const int lo = first_term(std::max(xw, xz));
    if (lo >= limit) {
      out[i] = 0.0;
      continue;
    }
    dw.resize(static_cast<std::size_t>(limit + 1));
    fill(w, lo, limit, dw.data());
    out[i] = sum_terms(dz.data(), dw.data(), lo, limit);
  }
}

void BandSeriesKernel::damped_many_z(const Point& w, std::span<const Point> zs,
                                     std::span<Complex> out) const {
  if (w.size() != 1) throw ParameterError("band series kernels are one-dimensional");
  thread_local std::vector<Complex> dz, dw;
  const double xw = std::norm(w[0]) / t_;
  const int wmax = terms_for(xw);
  dw.resize(static_cast<std::size_t>(wmax + 1));
  fill(w[0], first_term(xw), wmax, dw.data());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const Complex z = zs[i][0];
    const double xz = std::norm(z) / t_;
    const int limit = std::min(wmax, terms_for(std::min(xw, xz)));
    const int lo = first_term(std::max(xw, xz));
    if (lo >= limit) {
      out[i] = 0.0;
      continue;
    }
    dz.resize(static_cast<std::size_t>(limit + max_band_ + 1));
    fill(z, std::max(0, lo - max_band_), limit + max_band_, dz.data());
    out[i] = sum_terms(dz.data(), dw.data(), lo, limit);
  }
}

ComplexMatrix BandSeriesKernel::matrix(int dimension) const {
  if (dimension > length_ + max_band_ && dimension > length_)
    throw ParameterError("BandSeriesKernel::matrix: dimension exceeds stored coefficients");
  ComplexMatrix a = ComplexMatrix::Zero(dimension, dimension);
  for (const auto& [b, c] : bands_) {
    for (int m = std::max(0, -b); m < dimension && m < static_cast<int>(c.size()); ++m) {
      const int row = m + b;
      if (row >= 0 && row < dimension) a(row, m) = c[static_cast<std::size_t>(m)];
    }
  }
  return a;
}

// basis expansion
BasisExpansionKernel::BasisExpansionKernel(std::shared_ptr<const TruncatedOperator> op)
    : op_(std::move(op)) {
  if (!op_) throw ParameterError("BasisExpansionKernel: null operator");
  if (op_->entries.rows() != op_->dimension() || op_->entries.cols() != op_->dimension())
    throw ParameterError("BasisExpansionKernel: matrix size does not match basis");
}

Complex BasisExpansionKernel::damped(const Point& w, const Point& z) const {
  const Eigen::VectorXcd dz = op_->basis.damped_values(z);
  const Eigen::VectorXcd dw = op_->basis.damped_values(w);
  return dz.transpose() * op_->entries * dw.conjugate();
}

void BasisExpansionKernel::damped_many_w(const Point& z, std::span<const Point> ws,
                                         std::span<Complex> out) const {
  const Eigen::VectorXcd dz = op_->basis.damped_values(z);
  const Eigen::RowVectorXcd u = dz.transpose() * op_->entries;
  for (std::size_t i = 0; i < ws.size(); ++i)
    out[i] = u * op_->basis.damped_values(ws[i]).conjugate();
}

// Toeplitz kernel by quadrature
ToeplitzQuadratureKernel::ToeplitzQuadratureKernel(SymbolFunction symbol, QuadratureRule rule)
    : symbol_(std::move(symbol)), rule_(std::move(rule)) {
  if (rule_.measure != Measure::Gaussian)
    throw ParameterError("ToeplitzQuadratureKernel: needs a Gaussian rule");
}

Complex ToeplitzQuadratureKernel::damped(const Point& w, const Point& z) const {
  const double t = rule_.param.t();
  const Point d = w - z;
  const double decay = norm_sq(d) / (4.0 * t);
  if (decay > 740.0) return 0.0;
  const Point c = 0.5 * (w + z);
  CompensatedSum sum;
  for (std::size_t i = 0; i < rule_.size(); ++i) {
    const Point& eta = rule_.nodes[i];
    const Complex fv = symbol_.eval(c + eta);
    if (!std::isfinite(fv.real()) || !std::isfinite(fv.imag()))
      throw NonFiniteValueError("symbol is not finite", Point(c + eta));
    const double phase = dot_conj(eta, d).imag() / t;
    sum.add(rule_.weights[i] * fv * std::polar(1.0, phase));
  }
  return std::exp(Complex(-decay, dot_conj(z, w).imag() / t)) * sum.value();
}

// combinators
LinearCombinationKernel::LinearCombinationKernel(std::vector<Complex> coeffs,
                                                 std::vector<std::shared_ptr<const KernelImpl>> terms)
    : coeffs_(std::move(coeffs)), terms_(std::move(terms)) {
  if (coeffs_.size() != terms_.size()) throw ParameterError("LinearCombinationKernel: size mismatch");
}

Complex LinearCombinationKernel::damped(const Point& w, const Point& z) const {
  Complex s = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) s += coeffs_[i] * terms_[i]->damped(w, z);
  return s;
}

void LinearCombinationKernel::damped_many_w(const Point& z, std::span<const Point> ws,
                                            std::span<Complex> out) const {
  std::fill(out.begin(), out.end(), Complex(0.0));
  std::vector<Complex> tmp(ws.size());
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    terms_[k]->damped_many_w(z, ws, tmp);
    for (std::size_t i = 0; i < ws.size(); ++i) out[i] += coeffs_[k] * tmp[i];
  }
}

WeylFactorKernel::WeylFactorKernel(FockParam param, std::shared_ptr<const KernelImpl> inner, Point v,
                                   bool left, Complex scale)
    : param_(param), inner_(std::move(inner)), v_(std::move(v)), left_(left), scale_(scale) {
  if (v_.size() != param_.n()) throw ParameterError("WeylFactorKernel: shift dimension must equal n");
}

Complex WeylFactorKernel::damped(const Point& w, const Point& z) const {
  const double t = param_.t();
  if (left_) {
    const double phase = dot_conj(z, v_).imag() / t;
    return scale_ * std::polar(1.0, phase) * inner_->damped(w, Point(z - v_));
  }
  const double phase = -dot_conj(v_, w).imag() / t;
  return scale_ * std::polar(1.0, phase) * inner_->damped(Point(w + v_), z);
}

QuadratureCompositionKernel::QuadratureCompositionKernel(FockParam param,
                                                         std::shared_ptr<const KernelImpl> first,
                                                         std::shared_ptr<const KernelImpl> second,
                                                         QuadratureRule lebesgue)
    : param_(param), first_(std::move(first)), second_(std::move(second)), lebesgue_(std::move(lebesgue)) {
  if (lebesgue_.measure != Measure::Lebesgue)
    throw ParameterError("QuadratureCompositionKernel: needs a Lebesgue rule");
}

Complex QuadratureCompositionKernel::damped(const Point& w, const Point& z) const {
  const Point c = 0.5 * (w + z);
  std::vector<Point> xi(lebesgue_.size());
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = c + lebesgue_.nodes[i];
  std::vector<Complex> a(xi.size()), b(xi.size());
  first_->damped_many_w(z, xi, a);   // d1(xi, z)
  second_->damped_many_z(w, xi, b);  // d2(w, xi)
  CompensatedSum sum;
  for (std::size_t i = 0; i < xi.size(); ++i) sum.add(lebesgue_.weights[i] * a[i] * b[i]);
  return param_.normalizer() * sum.value();
}

// factories
KernelFunction identity_kernel(const FockParam& param, Complex scale) {
  return {param, KernelProvenance::ClosedForm,
          std::make_shared<ClosedFormKernel>(param, ClosedFormKernel::Shape::Identity, scale, 0.0,
                                             zero_point(param.n())),
          "identity"};
}

KernelFunction gaussian_toeplitz_kernel(const FockParam& param, double a, Complex c) {
  return {param, KernelProvenance::ClosedForm,
          std::make_shared<ClosedFormKernel>(param, ClosedFormKernel::Shape::Gaussian, c, a,
                                             zero_point(param.n())),
          "gaussian"};
}

KernelFunction weyl_kernel(const FockParam& param, const Point& v) {
  return {param, KernelProvenance::ClosedForm,
          std::make_shared<ClosedFormKernel>(param, ClosedFormKernel::Shape::Weyl, 1.0, 0.0, v), "weyl"};
}

KernelFunction band_series_kernel(const FockParam& param, std::map<int, std::vector<Complex>> bands,
                                  std::string label) {
  if (param.n() != 1) throw ParameterError("band series kernels need n = 1");
  return {param, KernelProvenance::Series, std::make_shared<BandSeriesKernel>(param.t(), std::move(bands)),
          std::move(label)};
}

KernelFunction toeplitz_quadrature_kernel(const SymbolFunction& f, const QuadratureRule& rule) {
  return {rule.param, KernelProvenance::Quadrature, std::make_shared<ToeplitzQuadratureKernel>(f, rule),
          f.label.empty() ? "toeplitz" : "toeplitz(" + f.label + ")"};
}

KernelFunction conjugate_by_weyl(const KernelFunction& k, const Point& v) {
  auto right = std::make_shared<WeylFactorKernel>(k.param(), k.impl(), Point(-v), false);
  auto both = std::make_shared<WeylFactorKernel>(k.param(), right, v, true);
  return {k.param(), k.provenance(), both, k.label()};
}

namespace {

KernelProvenance weaker(KernelProvenance a, KernelProvenance b) {
  return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

}  // namespace

KernelFunction scale_kernel(const KernelFunction& k, Complex c) {
  if (auto cf = std::dynamic_pointer_cast<const ClosedFormKernel>(k.impl())) {
    return {k.param(), k.provenance(),
            std::make_shared<ClosedFormKernel>(k.param(), cf->shape(), c * cf->scale(), cf->gauss_a(),
                                               cf->weyl_shift()),
            k.label()};
  }
  if (auto bs = std::dynamic_pointer_cast<const BandSeriesKernel>(k.impl())) {
    auto bands = bs->bands();
    for (auto& [b, v] : bands)
      for (auto& x : v) x *= c;
    return {k.param(), k.provenance(), std::make_shared<BandSeriesKernel>(bs->t(), std::move(bands)), k.label()};
  }
  if (auto be = std::dynamic_pointer_cast<const BasisExpansionKernel>(k.impl())) {
    auto op = std::make_shared<TruncatedOperator>(be->op());
    op->entries *= c;
    return {k.param(), k.provenance(), std::make_shared<BasisExpansionKernel>(op), k.label()};
  }
  return {k.param(), k.provenance(),
          std::make_shared<LinearCombinationKernel>(std::vector<Complex>{c},
                                                    std::vector<std::shared_ptr<const KernelImpl>>{k.impl()}),
          k.label()};
}

KernelFunction add_kernels(const KernelFunction& k1, const KernelFunction& k2) {
  if (!(k1.param() == k2.param())) throw ParameterError("add_kernels: parameter mismatch");
  const auto prov = weaker(k1.provenance(), k2.provenance());
  auto b1 = std::dynamic_pointer_cast<const BandSeriesKernel>(k1.impl());
  auto b2 = std::dynamic_pointer_cast<const BandSeriesKernel>(k2.impl());
  if (b1 && b2) {
    auto bands = b1->bands();
    for (const auto& [b, v] : b2->bands()) {
      auto& dst = bands[b];
      if (dst.empty()) {
        dst = v;
        continue;
      }
      const std::size_t len = std::min(dst.size(), v.size());
      dst.resize(len);
      for (std::size_t m = 0; m < len; ++m) dst[m] += v[m];
    }
    return {k1.param(), prov, std::make_shared<BandSeriesKernel>(b1->t(), std::move(bands))};
  }
  auto e1 = std::dynamic_pointer_cast<const BasisExpansionKernel>(k1.impl());
  auto e2 = std::dynamic_pointer_cast<const BasisExpansionKernel>(k2.impl());
  if (e1 && e2 && e1->op().dimension() == e2->op().dimension()) {
    auto op = std::make_shared<TruncatedOperator>(e1->op());
    op->entries += e2->op().entries;
    return {k1.param(), prov, std::make_shared<BasisExpansionKernel>(op)};
  }
  return {k1.param(), prov,
          std::make_shared<LinearCombinationKernel>(
              std::vector<Complex>{1.0, 1.0}, std::vector<std::shared_ptr<const KernelImpl>>{k1.impl(), k2.impl()})};
}

double cauchy_riemann_residual(const KernelFunction& k, std::span<const std::pair<Point, Point>> samples,
                               double h) {
  double worst = 0.0;
  const int n = k.param().n();
  for (const auto& [w, z] : samples) {
    for (int j = 0; j < n; ++j) {
      Point ex = Point::Zero(n), ey = Point::Zero(n);
      ex[j] = h;
      ey[j] = Complex(0.0, h);
      // holomorphic in z: d/d conj(z) = (d_x + i d_y)/2 vanishes
      const Complex zx = (k.eval(w, Point(z + ex)) - k.eval(w, Point(z - ex))) / (2.0 * h);
      const Complex zy = (k.eval(w, Point(z + ey)) - k.eval(w, Point(z - ey))) / (2.0 * h);
      // anti-holomorphic in w: d/dw = (d_x - i d_y)/2 vanishes
      const Complex wx = (k.eval(Point(w + ex), z) - k.eval(Point(w - ex), z)) / (2.0 * h);
      const Complex wy = (k.eval(Point(w + ey), z) - k.eval(Point(w - ey), z)) / (2.0 * h);
      const Complex i(0.0, 1.0);
      const double scale_z = std::abs(zx) + std::abs(zy);
      const double scale_w = std::abs(wx) + std::abs(wy);
      if (scale_z > 1e-300) worst = std::max(worst, std::abs(0.5 * (zx + i * zy)) / scale_z);
      if (scale_w > 1e-300) worst = std::max(worst, std::abs(0.5 * (wx - i * wy)) / scale_w);
    }
  }
  return worst;
}

}  // namespace fock
