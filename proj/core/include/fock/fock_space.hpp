#pragma once

#include <functional>
#include <vector>

#include "fock/grids.hpp"
#include "fock/multi_index.hpp"
#include "fock/quadrature.hpp"
#include "fock/types.hpp"

namespace fock {

using PointFn = std::function<Complex(const Point&)>;

/// Monomial orthonormal basis e_m(z) = z^m / sqrt(m! t^{|m|}) of F_t^2 up to
/// total degree D, in graded-lexicographic order. Sections for D' < D are
/// leading blocks.
class BasisSpec {
 public:
  BasisSpec(const FockParam& param, int max_degree);

  const FockParam& param() const { return param_; }
  int max_degree() const { return max_degree_; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  int dimension() const { return static_cast<int>(indices_.size()); }

  /// Number of basis functions of degree <= d (the leading-block size).
  int section_size(int d) const;

  /// e_m(z) for every index, scaled by e^{-|z|^2/2t}. Overflow-free for large |z|.
  Eigen::VectorXcd damped_values(const Point& z) const;

  /// e_m(z) for every index (undamped).
  Eigen::VectorXcd values(const Point& z) const;

 private:
  FockParam param_;
  int max_degree_;
  std::vector<MultiIndex> indices_;
};

/// z^m / sqrt(m! t^m) e^{-|z|^2/2t} for m = 0..max_m, one complex coordinate.
void damped_monomials_1d(Complex z, double t, int max_m, Complex* out);

/// K_z(w) = e^{w . conj(z) / t}.
Complex kernel_K(const Point& z, const Point& w, const FockParam& param);

/// k_z(w) = e^{w . conj(z)/t - |z|^2/(2t)}, the unit vector K_z / ||K_z||.
Complex kernel_k_normalized(const Point& z, const Point& w, const FockParam& param);

/// e_m(z).
Complex basis_eval(const MultiIndex& m, const Point& z, const FockParam& param);

/// ||f||_{F_t^p} = ( (p / 2 pi t)^n int |f|^p e^{-p|z|^2/2t} dz )^{1/p},
/// evaluated as int |f|^p d mu_{2t/p} with `rule` rescaled to width 2t/p.
double fock_norm_p(const PointFn& f, double p, const FockParam& param,
                   const QuadratureRule& rule);

/// sup |f(z)| e^{-|z|^2/2t}: maximum over `grid`, then a local Nelder-Mead
/// refinement from the best few grid points.
double fock_norm_infty(const PointFn& f, const FockParam& param, const PointGrid& grid);

/// P_t f(z) = <f, K_z> = int f(w) conj(K_z(w)) d mu_t(w).
Complex bergman_project(const PointFn& f, const Point& z, const FockParam& param,
                        const QuadratureRule& rule);

}  // namespace fock
