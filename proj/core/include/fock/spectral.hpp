#pragma once

#include <optional>
#include <vector>

#include "fock/kernel.hpp"
#include "fock/operator_types.hpp"
#include "fock/quadrature.hpp"

namespace fock {

/// Eigenvalues of nested finite sections, sorted by (re, im).
struct SpectralReport {
  std::vector<int> degrees;
  std::vector<std::vector<Complex>> eigenvalues;
  /// Smallest singular value of A_D - probe per degree; empty without a probe.
  std::vector<double> singular_min;
};

SpectralReport truncated_spectrum(const TruncatedOperator& a, const std::vector<int>& degrees,
                                  std::optional<Complex> probe = std::nullopt);

/// Sort by real part, then imaginary part.
void sort_complex(std::vector<Complex>& v);

/// Remove values within `tol` of an earlier kept value.
std::vector<Complex> dedupe(const std::vector<Complex>& v, double tol = 1e-6);

struct CompactnessResult {
  bool verdict = false;
  std::vector<double> radii;
  /// max over |z| = r of |Berezin diagonal|.
  std::vector<double> decay;
};

/// Berezin C_0 test: the diagonal curve must fall below tau and be
/// non-increasing over the last `window` radii. Radii must reach 8 sqrt(t).
CompactnessResult compactness_test(const KernelFunction& k, const std::vector<double>& radii, double tau = 1e-6,
                                   int window = 3, int samples_per_circle = 64);

/// A point of the sphere at infinity with the constant limit symbol there.
struct LimitDirection {
  Point direction;
  SymbolFunction limit_symbol;
  /// The radial limit value when the limit symbol is constant.
  std::optional<Complex> constant;
};

/// Throws UnsupportedSymbolError when f has no directional-limit metadata or
/// no limit in this direction.
LimitDirection make_limit_direction(const SymbolFunction& f, const Point& direction);

/// Toeplitz matrix of the limit symbol (c I for a constant limit c).
TruncatedOperator limit_operator(const SymbolFunction& f, const LimitDirection& x, const BasisSpec& basis);

/// Union over directions of the truncated spectra of limit operators,
/// deduplicated at 1e-6 and sorted.
std::vector<Complex> essential_spectrum_estimate(const SymbolFunction& f, const std::vector<Point>& directions,
                                                 const BasisSpec& basis);

/// Hausdorff distance between two finite point sets.
double hausdorff_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Minimum distance from lambda to a finite set (infinity when empty).
double distance_to_set(Complex lambda, const std::vector<Complex>& set);

/// Finite-section counts were not stable across degrees.
class InconclusiveIndexError : public NumericError {
 public:
  InconclusiveIndexError(const std::string& what, std::vector<int> kernel, std::vector<int> cokernel)
      : NumericError(what), kernel_(std::move(kernel)), cokernel_(std::move(cokernel)) {}
  const std::vector<int>& kernel_counts() const { return kernel_; }
  const std::vector<int>& cokernel_counts() const { return cokernel_; }

 private:
  std::vector<int> kernel_, cokernel_;
};

struct IndexDiagnostics {
  std::vector<int> degrees;
  std::vector<int> kernel_counts;
  std::vector<int> cokernel_counts;
  /// Smallest singular value of the tall section of A - lambda per degree.
  std::vector<double> singular_min;
  /// Winding number of z -> Berezin(z, z) - lambda on |z| = winding_radius (n = 1).
  std::optional<int> winding;
  double winding_radius = 0.0;
};

struct IndexResult {
  int index = 0;
  IndexDiagnostics diagnostics;
};

struct IndexOptions {
  double eps = 1e-6;
  /// When present, lambda within `margin` of this set is rejected.
  std::optional<std::vector<Complex>> essential_spectrum;
  double margin = 0.1;
  /// Kernel for the winding cross-check (n = 1 only).
  std::optional<KernelFunction> kernel;
  double winding_radius = 8.0;  ///< in units of sqrt(t)
  int winding_samples = 2048;
};

/// index = #{singular values < eps of P_N (A - lambda) P_D}
///       - #{singular values < eps of P_N (A - lambda)^* P_D},
/// with N the full size of `a` (tall sections avoid the artificial kernel of
/// square truncations). Every D in `degrees` must be below a's max degree and
/// all counts must agree.
IndexResult fredholm_index(const TruncatedOperator& a, Complex lambda, const std::vector<int>& degrees,
                           const IndexOptions& options = {});

/// Winding number of z -> k~(z, z) - lambda along |z| = radius (n = 1).
int berezin_winding(const KernelFunction& k, Complex lambda, double radius, int samples = 2048);

}  // namespace fock
