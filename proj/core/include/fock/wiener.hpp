#pragma once

#include <string>
#include <vector>

#include "fock/grids.hpp"
#include "fock/kernel.hpp"
#include "fock/quadrature.hpp"

namespace fock {

/// Sampled majorant G(u) = sup_z |k(z + u, z)| e^{-(|z+u|^2 + |z|^2)/2t} on an
/// offset lattice, the sup taken over a base grid.
struct DominatingProfile {
  FockParam param{1.0, 1};
  OffsetLattice lattice;
  std::vector<double> values;
  /// (pi t)^{-n} int G, as a lattice Riemann sum.
  double l1_estimate = 0.0;
  /// l1_estimate plus a Gaussian tail bound for offsets outside the lattice.
  double l1_upper = 0.0;
  std::vector<std::string> warnings;
};

DominatingProfile dominating_profile(const KernelFunction& k, const PointGrid& base, const OffsetLattice& lattice);

/// l1_estimate: the bound on ||A_k|| valid for every F_t^p.
double wiener_norm_bound(const DominatingProfile& profile);

struct SchurBounds {
  double a1 = 0.0;    ///< sup_w int |k(w,z)| e^{-(|z|^2+|w|^2)/2t} dz
  double ainf = 0.0;  ///< sup_z int |k(w,z)| e^{-(|z|^2+|w|^2)/2t} dw
};

/// Suprema over `base`; the integrals use `lebesgue` (a Lebesgue rule)
/// translated to each base point.
SchurBounds schur_bounds(const KernelFunction& k, const QuadratureRule& lebesgue, const PointGrid& base);

/// The Lebesgue rule schur_bounds expects by default: polar Gaussian rule of
/// width 2t reweighted to Lebesgue measure.
QuadratureRule default_schur_rule(const FockParam& param, int radial_order = kDefaultRadialOrder,
                                  int angular_order = kDefaultAngularOrder);

/// (pi t)^{-n} A1^{1-theta} Ainf^theta, theta = 1 - 1/p; p = infinity allowed.
double operator_norm_bound_p(double a1, double ainf, double p, const FockParam& param);

/// Lattice convolution (G1 * G2)(u) = sum_v G1(v) G2(u - v) h^{2n},
/// restricted to the lattice.
std::vector<double> lattice_convolution(const std::vector<double>& g1, const std::vector<double>& g2,
                                        const OffsetLattice& lattice);

/// Profile (pi t)^{-n} G1 * G2 that dominates the kernel of the product of the
/// two operators, rescaled so its estimate equals the product of the two
/// estimates (mass lost at the lattice edge is redistributed upwards).
DominatingProfile convolution_bound(const DominatingProfile& p1, const DominatingProfile& p2);

/// Heuristic decay diagnostic for membership in the Wiener class: a
/// least-squares fit log G(u) ~ c - rate |u|^2 / t over the outer half of the
/// lattice. Never a proof.
struct MembershipDiagnostic {
  double decay_rate = 0.0;      ///< fitted rate (1/2 for translation kernels)
  double boundary_ratio = 0.0;  ///< max G on the lattice edge over max G
  std::string confidence;       ///< "high", "moderate" or "low"
};

MembershipDiagnostic membership_diagnostic(const DominatingProfile& profile);

}  // namespace fock
