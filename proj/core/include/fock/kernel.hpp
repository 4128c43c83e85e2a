#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fock/operator_types.hpp"
#include "fock/quadrature.hpp"
#include "fock/types.hpp"

namespace fock {

enum class KernelProvenance {
  ClosedForm,      ///< analytic formula
  BasisExpansion,  ///< sum_{m,l} A_{ml} e_m(z) conj(e_l(w)) over a finite section
  Series,          ///< band-limited monomial series with unbounded length
  Quadrature,      ///< defined by a numerical integral per point
};

std::string to_string(KernelProvenance p);

/// Evaluation backend of an integral kernel. Implementations return the
/// damped kernel e^{-(|w|^2+|z|^2)/2t} k(w,z), which stays bounded for every
/// kernel of the Wiener class and cannot overflow.
class KernelImpl {
 public:
  virtual ~KernelImpl() = default;
  virtual Complex damped(const Point& w, const Point& z) const = 0;
  /// out[i] = damped(ws[i], z). Overridden where a fixed z allows reuse.
  virtual void damped_many_w(const Point& z, std::span<const Point> ws,
                             std::span<Complex> out) const;
  /// out[i] = damped(w, zs[i]).
  virtual void damped_many_z(const Point& w, std::span<const Point> zs,
                             std::span<Complex> out) const;
};

/// Integral kernel k(w, z): anti-holomorphic in w, holomorphic in z. The
/// associated operator is A_k f(z) = int f(w) k(w, z) d mu_t(w).
class KernelFunction {
 public:
  KernelFunction(FockParam param, KernelProvenance provenance,
                 std::shared_ptr<const KernelImpl> impl, std::string label = {});

  /// k(w, z). May overflow for large arguments; prefer damped().
  Complex eval(const Point& w, const Point& z) const;
  /// e^{-(|w|^2+|z|^2)/2t} k(w, z).
  Complex damped(const Point& w, const Point& z) const { return impl_->damped(w, z); }
  void damped_many_w(const Point& z, std::span<const Point> ws, std::span<Complex> out) const {
    impl_->damped_many_w(z, ws, out);
  }
  void damped_many_z(const Point& w, std::span<const Point> zs, std::span<Complex> out) const {
    impl_->damped_many_z(w, zs, out);
  }

  const FockParam& param() const { return param_; }
  KernelProvenance provenance() const { return provenance_; }
  const std::shared_ptr<const KernelImpl>& impl() const { return impl_; }
  const std::string& label() const { return label_; }

 private:
  FockParam param_;
  KernelProvenance provenance_;
  std::shared_ptr<const KernelImpl> impl_;
  std::string label_;
};

// concrete backends
/// Closed-form kernels with enough structure to compose algebraically.
class ClosedFormKernel : public KernelImpl {
 public:
  enum class Shape { Identity, Gaussian, Weyl };

  ClosedFormKernel(FockParam param, Shape shape, Complex scale, double gauss_a, Point weyl_shift);

  Complex damped(const Point& w, const Point& z) const override;

  Shape shape() const { return shape_; }
  Complex scale() const { return scale_; }
  double gauss_a() const { return gauss_a_; }
  const Point& weyl_shift() const { return weyl_shift_; }

 private:
  FockParam param_;
  Shape shape_;
  Complex scale_;
  double gauss_a_;
  Point weyl_shift_;
};

/// One-variable kernel sum_b sum_m c_b[m] e_{m+b}(z) conj(e_m(w)): the kernel
/// of an operator with A e_m = sum_b c_b[m] e_{m+b}. Covers radial symbols
/// (band 0) and radial-times-e^{ik theta} symbols (band k).
class BandSeriesKernel : public KernelImpl {
 public:
  BandSeriesKernel(double t, std::map<int, std::vector<Complex>> bands);

  Complex damped(const Point& w, const Point& z) const override;
  void damped_many_w(const Point& z, std::span<const Point> ws,
                     std::span<Complex> out) const override;
  void damped_many_z(const Point& w, std::span<const Point> zs,
                     std::span<Complex> out) const override;

  double t() const { return t_; }
  const std::map<int, std::vector<Complex>>& bands() const { return bands_; }
  /// Largest column index m for which every band has a coefficient.
  int length() const { return length_; }

  /// Exact matrix entries on a basis (n = 1).
  ComplexMatrix matrix(int dimension) const;

 private:
  int terms_for(double x) const;
  int first_term(double x) const;
  /// out[m] = e_m(z) e^{-|z|^2/2t} for lo <= m <= hi.
  void fill(Complex z, int lo, int hi, Complex* out) const;
  Complex sum_terms(const Complex* dz, const Complex* dw, int lo, int limit) const;

  double t_;
  std::map<int, std::vector<Complex>> bands_;
  int length_ = 0;
  int max_band_ = 0;
  std::vector<double> inv_sqrt_;
};

/// Kernel of a finite section: sum_{m,l} A_{ml} e_m(z) conj(e_l(w)).
class BasisExpansionKernel : public KernelImpl {
 public:
  explicit BasisExpansionKernel(std::shared_ptr<const TruncatedOperator> op);

  Complex damped(const Point& w, const Point& z) const override;
  void damped_many_w(const Point& z, std::span<const Point> ws,
                     std::span<Complex> out) const override;

  const TruncatedOperator& op() const { return *op_; }
  const std::shared_ptr<const TruncatedOperator>& op_ptr() const { return op_; }

 private:
  std::shared_ptr<const TruncatedOperator> op_;
};

/// Kernel <T_f K_w, K_z> of a Toeplitz operator, evaluated by quadrature
/// centred at the midpoint c = (w + z)/2:
///   damped = e^{(-|w-z|^2/4 + i Im(z . conj w))/t}
///            * int f(c + eta) e^{i Im(eta . conj(w - z))/t} d mu_t(eta).
class ToeplitzQuadratureKernel : public KernelImpl {
 public:
  ToeplitzQuadratureKernel(SymbolFunction symbol, QuadratureRule rule);

  Complex damped(const Point& w, const Point& z) const override;

  const SymbolFunction& symbol() const { return symbol_; }

 private:
  SymbolFunction symbol_;
  QuadratureRule rule_;
};

/// k*(w, z) = conj(k(z, w)).
class InvolutionKernel : public KernelImpl {
 public:
  explicit InvolutionKernel(std::shared_ptr<const KernelImpl> inner) : inner_(std::move(inner)) {}
  Complex damped(const Point& w, const Point& z) const override {
    return std::conj(inner_->damped(z, w));
  }
  const std::shared_ptr<const KernelImpl>& inner() const { return inner_; }

 private:
  std::shared_ptr<const KernelImpl> inner_;
};

/// sum_i c_i k_i.
class LinearCombinationKernel : public KernelImpl {
 public:
  LinearCombinationKernel(std::vector<Complex> coeffs, std::vector<std::shared_ptr<const KernelImpl>> terms);
  Complex damped(const Point& w, const Point& z) const override;
  void damped_many_w(const Point& z, std::span<const Point> ws,
                     std::span<Complex> out) const override;

 private:
  std::vector<Complex> coeffs_;
  std::vector<std::shared_ptr<const KernelImpl>> terms_;
};

/// Kernel of W_v A (left) or A W_v (right) for a kernel A:
///   left:  e^{i Im(z . conj v)/t} dA(w, z - v)
///   right: e^{-i Im(v . conj w)/t} dA(w + v, z)
/// in damped form, times `scale`.
class WeylFactorKernel : public KernelImpl {
 public:
  WeylFactorKernel(FockParam param, std::shared_ptr<const KernelImpl> inner, Point v, bool left,
                   Complex scale = 1.0);
  Complex damped(const Point& w, const Point& z) const override;

 private:
  FockParam param_;
  std::shared_ptr<const KernelImpl> inner_;
  Point v_;
  bool left_;
  Complex scale_;
};

/// Kernel of A_{k1} A_{k2} by Lebesgue quadrature centred at (w + z)/2:
///   damped(w, z) = (pi t)^{-n} int d2(w, xi) d1(xi, z) d xi.
class QuadratureCompositionKernel : public KernelImpl {
 public:
  QuadratureCompositionKernel(FockParam param, std::shared_ptr<const KernelImpl> first,
                              std::shared_ptr<const KernelImpl> second, QuadratureRule lebesgue);
  Complex damped(const Point& w, const Point& z) const override;

 private:
  FockParam param_;
  std::shared_ptr<const KernelImpl> first_, second_;
  QuadratureRule lebesgue_;
};

// factories
/// k(w, z) = e^{z . conj(w)/t}, the kernel of the identity.
KernelFunction identity_kernel(const FockParam& param, Complex scale = 1.0);

/// Kernel of T_f for f = c e^{-a|z|^2}: c (1+at)^{-n} e^{z . conj(w) / (t(1+at))}.
KernelFunction gaussian_toeplitz_kernel(const FockParam& param, double a, Complex c = 1.0);

/// Kernel of the Weyl operator W_v: e^{z . conj(v)/t - |v|^2/2t} e^{(z - v) . conj(w)/t}.
KernelFunction weyl_kernel(const FockParam& param, const Point& v);

/// Band-series kernel (n = 1).
KernelFunction band_series_kernel(const FockParam& param, std::map<int, std::vector<Complex>> bands,
                                  std::string label = {});

/// Toeplitz kernel of an arbitrary bounded symbol, evaluated by quadrature.
KernelFunction toeplitz_quadrature_kernel(const SymbolFunction& f, const QuadratureRule& rule);

/// Kernel of W_v A W_{-v}.
KernelFunction conjugate_by_weyl(const KernelFunction& k, const Point& v);

/// c k.
KernelFunction scale_kernel(const KernelFunction& k, Complex c);

/// k1 + k2.
KernelFunction add_kernels(const KernelFunction& k1, const KernelFunction& k2);

/// Maximum relative Cauchy-Riemann residual of k over the sample pairs:
/// |d k / d conj(z)| and |d k / d w| relative to the gradient size, by
/// central differences with step h.
double cauchy_riemann_residual(const KernelFunction& k, std::span<const std::pair<Point, Point>> samples,
                               double h = 1e-4);

}  // namespace fock
