#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fock/fock_space.hpp"
#include "fock/types.hpp"

namespace fock {

/// Radial limit of a symbol at infinity along a unit direction, or nullopt if
/// the symbol has no (locally uniform) limit there.
using DirectionalLimitFn = std::function<std::optional<Complex>(const Point& direction)>;

/// A bounded measurable symbol f: C^n -> C.
struct SymbolFunction {
  PointFn eval;
  /// Known or estimated ||f||_infty.
  double sup_bound = 1.0;
  /// Present only when f has directional limits at infinity.
  std::optional<DirectionalLimitFn> directional_limits;
  std::string label;

  Complex operator()(const Point& z) const { return eval(z); }
};

/// Constant symbol c (limit c in every direction).
SymbolFunction constant_symbol(Complex c);

/// z_j / |z_j|, 0 at the origin. For n = 1 this is the phase symbol z/|z|.
SymbolFunction phase_symbol(int coordinate = 0);

/// c e^{-a |z|^2}, limit 0 in every direction.
SymbolFunction gaussian_symbol(double a, Complex c = 1.0);

/// Matrix <A e_l, e_m> of an operator in the monomial basis; entries(m, l).
struct TruncatedOperator {
  BasisSpec basis;
  ComplexMatrix entries;
  /// Non-fatal diagnostics (e.g. truncation leak of Weyl operators).
  std::vector<std::string> warnings;

  int dimension() const { return basis.dimension(); }

  /// Leading block for total degree <= d.
  ComplexMatrix section(int d) const {
    const int k = basis.section_size(d);
    return entries.topLeftCorner(k, k);
  }
};

}  // namespace fock
