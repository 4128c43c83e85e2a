#pragma once

#include <functional>
#include <optional>
#include <string>

#include "fock/cli/expression.hpp"
#include "fock/kernel.hpp"
#include "fock/operator_types.hpp"
#include "fock/quadrature.hpp"

namespace fock::cli {

/// A parsed symbol with everything the commands need: the evaluable symbol,
/// the kernel of its Toeplitz operator and a matrix builder.
struct ResolvedSymbol {
  SymbolExpression expr;
  SymbolFunction symbol;
  KernelFunction kernel;
  std::function<TruncatedOperator(const BasisSpec&)> matrix;
  /// "closed-form", "series" or "quadrature".
  std::string method;
};

/// Band coefficients of T_f for f = e^{i q theta} e^{-a |z|^2} (n = 1):
/// T e_m = c_m e_{m+q} with c_m = Gamma(l + |q|/2 + 1) / sqrt(l! (l+|q|)!) (1+at)^{-(l+|q|/2+1)},
/// l = min(m, m + q).
std::vector<Complex> radial_band(int q, double a, double t, int length);

/// Recognized shapes (see decompose) get exact kernels, matrices and
/// directional limits; anything else falls back to quadrature and carries
/// directional limits only when `limit_symbol` is given, evaluated at unit
/// directions.
ResolvedSymbol resolve_symbol(const std::string& text, const FockParam& param, const QuadratureRule& rule,
                              const std::optional<std::string>& limit_symbol = std::nullopt);

}  // namespace fock::cli
