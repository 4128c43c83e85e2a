#pragma once

#include "fock/fock_space.hpp"
#include "fock/kernel.hpp"
#include "fock/operator_types.hpp"
#include "fock/quadrature.hpp"

namespace fock {

/// Matrix <f e_l, e_m>_{L^2(mu_t)} of T_f. The rule needs radial_order >
/// max_degree so that every |e_l conj(e_m)| term is integrated exactly.
TruncatedOperator toeplitz_matrix(const SymbolFunction& f, const BasisSpec& basis, const QuadratureRule& rule);

/// A polar rule fine enough for weyl_matrix at this basis degree and shift.
QuadratureRule weyl_rule(const FockParam& param, int max_degree, double shift_norm);

/// Matrix <W_v e_l, e_m> from the action W_v g(w) = k_v(w) g(w - v), by
/// quadrature in each coordinate (W_v factorizes over coordinates). Adds a
/// warning for every column whose l2-norm falls below 1 - 1e-3.
TruncatedOperator weyl_matrix(const Point& v, const BasisSpec& basis, const QuadratureRule& rule);
TruncatedOperator weyl_matrix(const Point& v, const BasisSpec& basis);

/// Kernel sum_{m,l} A_{ml} e_m(z) conj(e_l(w)) of a finite section.
KernelFunction kernel_from_matrix(const TruncatedOperator& a);

/// Matrix of an integral operator from its kernel on a basis: for series and
/// closed-form kernels where the matrix is known exactly, and otherwise
/// <A e_l, e_m> by double quadrature.
TruncatedOperator matrix_from_kernel(const KernelFunction& k, const BasisSpec& basis, const QuadratureRule& rule);

/// A_k f(z) = int f(w) k(w, z) d mu_t(w).
Complex apply_operator(const KernelFunction& k, const PointFn& f, const Point& z, const QuadratureRule& rule);

/// Kernel of the product A_{k1} A_{k2}, i.e. int k2(w, xi) k1(xi, z) d mu_t(xi).
/// Uses exact algebra where both factors allow it (matrix products, band
/// products, Weyl factors) and Lebesgue quadrature otherwise.
KernelFunction compose_kernels(const KernelFunction& k1, const KernelFunction& k2, const QuadratureRule& rule);

/// k*(w, z) = conj(k(z, w)).
KernelFunction involute_kernel(const KernelFunction& k);

/// Bivariate Berezin transform <A k_w, k_z> = e^{-(|w|^2+|z|^2)/2t} k(w, z).
Complex berezin_bivariate(const KernelFunction& k, const Point& w, const Point& z);

/// <T_f k_w, k_z> straight from the definition, int f k_w conj(k_z) d mu_t,
/// with a Gaussian rule for mu_t. Independent of any kernel formula.
Complex berezin_toeplitz_quadrature(const SymbolFunction& f, const Point& w, const Point& z,
                                    const QuadratureRule& rule);

/// Translation direction of the shift: alpha_v(T_f) = W_v T_f W_{-v} = T_{f(. + kShiftSign v)}.
inline constexpr int kShiftSign = -1;

/// f(. + kShiftSign v).
SymbolFunction translate_symbol(const SymbolFunction& f, const Point& v);

/// Matrix of alpha_v(T_f) = W_v T_f W_{-v}, realised as the Toeplitz matrix of
/// the translated symbol.
TruncatedOperator shifted_operator(const SymbolFunction& f, const Point& v, const BasisSpec& basis,
                                   const QuadratureRule& rule);

/// Matrix c I.
TruncatedOperator scaled_identity(const BasisSpec& basis, Complex c);

}  // namespace fock
