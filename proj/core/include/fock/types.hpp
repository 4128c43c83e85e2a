#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace fock {

using Complex = std::complex<double>;

/// Largest complex dimension the library supports.
inline constexpr int kMaxDim = 3;

/// A point of C^n. Storage is inline (no heap) for n <= kMaxDim.
using Point = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

// errors
/// Invalid argument or configuration (bad order, t <= 0, grid mismatch, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite value or solver breakdown during a numerical evaluation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite integrand value, carrying the offending quadrature node.
class NonFiniteValueError : public NumericError {
 public:
  NonFiniteValueError(const std::string& what, Point node)
      : NumericError(what), node_(std::move(node)) {}
  const Point& node() const { return node_; }

 private:
  Point node_;
};

/// The symbol lacks the metadata an operation needs (e.g. directional limits).
class UnsupportedSymbolError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// lambda lies in (the estimate of) the essential spectrum.
class NotFredholmError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// parameters
/// Gaussian weight parameter t and complex dimension n of F_t^p(C^n).
class FockParam {
 public:
  FockParam(double t, int n) : t_(t), n_(n) {
    if (!(t > 0.0) || !std::isfinite(t))
      throw ParameterError("FockParam: t must be positive and finite");
    if (n < 1 || n > kMaxDim)
      throw ParameterError("FockParam: n must lie in [1, " +
                           std::to_string(kMaxDim) + "]");
  }

  double t() const { return t_; }
  int n() const { return n_; }

  /// (pi t)^{-n}, the density normalizer of mu_t.
  double normalizer() const { return std::pow(kPi * t_, -n_); }

  /// (pi t)^n, the Lebesgue volume factor.
  double volume() const { return std::pow(kPi * t_, n_); }

  bool operator==(const FockParam& other) const {
    return t_ == other.t_ && n_ == other.n_;
  }

 private:
  double t_;
  int n_;
};

// small point helpers
/// w . conj(z) = sum_j w_j conj(z_j).
inline Complex dot_conj(const Point& w, const Point& z) {
  Complex s = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) s += w[j] * std::conj(z[j]);
  return s;
}

inline double norm_sq(const Point& z) { return z.squaredNorm(); }

inline Point make_point(std::initializer_list<Complex> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index j = 0;
  for (const auto& c : coords) p[j++] = c;
  return p;
}

inline Point zero_point(int n) { return Point::Zero(n); }

}  // namespace fock
