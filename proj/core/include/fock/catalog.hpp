#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fock/kernel.hpp"
#include "fock/operator_types.hpp"

namespace fock {

/// Coefficient a_m = <T_phase e_m, e_{m+1}> = Gamma(m + 3/2) / sqrt(m! (m+1)!),
/// independent of t. T_phase is a weighted shift with these weights.
double phase_shift_weight(int m);

/// Weights a_0 .. a_{count-1}.
std::vector<Complex> phase_shift_weights(int count);

/// Coefficient count used for catalog band kernels.
inline constexpr int kCatalogBandLength = 4096;

/// Band kernel of T_{z/|z|} (n = 1).
KernelFunction phase_kernel(const FockParam& param);

/// Band kernel of T_{conj(z)/|z|} (n = 1).
KernelFunction conj_phase_kernel(const FockParam& param);

/// A named operator with an exact kernel and an exact matrix.
struct CatalogEntry {
  std::string name;
  /// Present for Toeplitz operators.
  std::optional<SymbolFunction> symbol;
  KernelFunction kernel;
  std::function<TruncatedOperator(const BasisSpec&)> matrix;
};

/// n = 1: identity, gauss(a=1), gauss(a=0.5), phase, conj-phase, weyl(0.5+0.3i).
/// n > 1: identity, gauss(a=1), gauss(a=0.5), weyl.
std::vector<CatalogEntry> operator_catalog(const FockParam& param);

/// Entry by name; throws ParameterError if absent.
CatalogEntry catalog_entry(const FockParam& param, const std::string& name);

}  // namespace fock
