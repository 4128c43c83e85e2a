#pragma once

#include <functional>
#include <vector>

#include "fock/multi_index.hpp"
#include "fock/types.hpp"

namespace fock {

enum class Measure {
  Gaussian,  ///< the probability measure mu_t
  Lebesgue,  ///< Lebesgue measure dz on C^n
};

/// Discrete rule sum_i weights[i] g(nodes[i]) approximating an integral over C^n.
///
/// Gaussian rules target d mu_t = (pi t)^{-n} e^{-|z|^2/t} dz. Per complex
/// coordinate they combine an R-point Gauss rule in the radius (weight
/// r e^{-r^2/t} on [0, inf)) with an N-point trapezoid rule in the angle and
/// are tensorized over coordinates. Such a rule integrates w^a conj(w)^b
/// exactly whenever max(|a|, |b|) < R and |a - b| < N per coordinate.
struct QuadratureRule {
  FockParam param{1.0, 1};
  Measure measure = Measure::Gaussian;
  std::vector<Point> nodes;
  std::vector<double> weights;
  int radial_order = 0;
  int angular_order = 0;
  /// Total degree |a| + |b| integrated exactly against the measure.
  int exact_degree = 0;

  std::size_t size() const { return nodes.size(); }
};

inline constexpr int kDefaultRadialOrder = 40;
inline constexpr int kDefaultAngularOrder = 81;

/// One-dimensional radial Gauss rule for the weight r e^{-r^2} on [0, inf).
/// Weights sum to 1/2. Exact for polynomials in r of degree <= 2 order - 1.
struct RadialGaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

RadialGaussRule radial_gauss_rule(int order);

/// Polar product rule for mu_t. Throws ParameterError for radial_order < 1 or
/// angular_order < 3.
QuadratureRule build_polar_rule(const FockParam& param,
                                int radial_order = kDefaultRadialOrder,
                                int angular_order = kDefaultAngularOrder);

/// The same nodes with weights multiplied by (pi s)^n e^{|node|^2/s}, where s
/// is the width of the Gaussian rule. Integrates against Lebesgue measure.
QuadratureRule lebesgue_rule(const QuadratureRule& gaussian);

/// Nodes of `rule` scaled by sqrt(factor); a Gaussian rule for mu_t becomes a
/// rule for mu_{factor t} with identical weights.
QuadratureRule rescale_rule(const QuadratureRule& rule, double factor);

/// sum_i w_i g(x_i) with compensated summation. Throws NonFiniteValueError
/// carrying the node if g returns a non-finite value.
Complex integrate_mu(const std::function<Complex(const Point&)>& g,
                     const QuadratureRule& rule);

/// delta_{ab} a! t^{|a|}, the closed-form moment int w^a conj(w)^b d mu_t.
double monomial_moment(const MultiIndex& a, const MultiIndex& b,
                       const FockParam& param);

/// Neumaier-compensated accumulator for complex sums.
class CompensatedSum {
 public:
  void add(Complex v) {
    add_part(v.real(), re_, re_c_);
    add_part(v.imag(), im_, im_c_);
  }
  Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double v, double& sum, double& comp) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

}  // namespace fock
