#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fock/types.hpp"

namespace fock::cli {

struct CheckResult {
  std::string name;
  /// Measured quantity (an error, a ratio or a count, depending on the check).
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

/// The invariant suite behind `fock verify`: quadrature moments and
/// convergence, reproducing property, kernel norms, Gram matrix, Weyl
/// isometry and composition, Berezin identity, matrix/kernel round trip,
/// adjoints, domination, bound chain, submultiplicativity, triangle
/// inequality, spectral sandwich, compactness, limit operators, Fredholm
/// stability and index agreement, and parser round trips. Sizes are reduced
/// so the whole run stays interactive; n > 1 skips the one-variable checks.
std::vector<CheckResult> run_invariants(const FockParam& param, std::uint64_t seed);

}  // namespace fock::cli
