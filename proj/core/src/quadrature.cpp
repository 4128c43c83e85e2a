#include "fock/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace fock {

namespace {

// The moment-based recurrence loses roughly one decimal digit per node, so the
// working precision is tiered by order.
template <unsigned Digits>
using Float = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<Digits>, boost::multiprecision::et_off>;

constexpr int kMaxRadialOrder = 300;

template <typename Real>
RadialGaussRule radial_rule_impl(int order) {
  const int n_mom = 2 * order;

  // Moments of r e^{-r^2} on [0, inf): mu_k = Gamma(k/2 + 1) / 2.
  // Gamma at integers and half integers, built by upward recurrence.
  std::vector<Real> mom(static_cast<std::size_t>(n_mom));
  const Real sqrt_pi = sqrt(boost::math::constants::pi<Real>());
  Real gamma_int = 1;           // Gamma(1)
  Real gamma_half = sqrt_pi / 2;  // Gamma(3/2)
  for (int k = 0; k < n_mom; ++k) {
    // Gamma(k/2 + 1): k even -> Gamma(j + 1), k odd -> Gamma(j + 3/2).
    if (k % 2 == 0) {
      const int j = k / 2;
      if (j > 0) gamma_int *= j;
      mom[static_cast<std::size_t>(k)] = gamma_int / 2;
    } else {
      const int j = k / 2;
      if (j > 0) gamma_half *= Real(j) + Real(1) / 2;
      mom[static_cast<std::size_t>(k)] = gamma_half / 2;
    }
  }

  // Chebyshev algorithm: recurrence coefficients from ordinary moments.
  std::vector<Real> alpha(static_cast<std::size_t>(order));
  std::vector<Real> beta(static_cast<std::size_t>(order));
  std::vector<Real> sig_prev(static_cast<std::size_t>(n_mom), Real(0));
  std::vector<Real> sig = mom;
  alpha[0] = mom[1] / mom[0];
  beta[0] = mom[0];
  for (int k = 1; k < order; ++k) {
    std::vector<Real> sig_next(static_cast<std::size_t>(n_mom), Real(0));
    for (int l = k; l < n_mom - k; ++l) {
      const auto ul = static_cast<std::size_t>(l);
      sig_next[ul] = sig[ul + 1] - alpha[static_cast<std::size_t>(k - 1)] * sig[ul] -
                     beta[static_cast<std::size_t>(k - 1)] * sig_prev[ul];
    }
    const auto uk = static_cast<std::size_t>(k);
    alpha[uk] = sig_next[uk + 1] / sig_next[uk] - sig[uk] / sig[uk - 1];
    beta[uk] = sig_next[uk] / sig[uk - 1];
    sig_prev = std::move(sig);
    sig = std::move(sig_next);
  }

  // Coefficients of the orthonormal recurrence
  //   sqrt(b_{k+1}) q_{k+1} = (x - a_k) q_k - sqrt(b_k) q_{k-1}.
  // Everything below runs in extended precision; the recurrence is stable.
  using Ext = long double;
  std::vector<Ext> a(static_cast<std::size_t>(order)), sb(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k < order; ++k) {
    a[static_cast<std::size_t>(k)] = static_cast<Ext>(alpha[static_cast<std::size_t>(k)]);
    sb[static_cast<std::size_t>(k)] = static_cast<Ext>(sqrt(beta[static_cast<std::size_t>(k)]));
  }
  // Normalizer of q_order; any positive value leaves its zeros unchanged.
  sb[static_cast<std::size_t>(order)] = 1;

  // Seed nodes from the Jacobi matrix.
  Eigen::VectorXd diag(order), sub(std::max(order - 1, 0));
  for (int k = 0; k < order; ++k) diag[k] = static_cast<double>(a[static_cast<std::size_t>(k)]);
  for (int k = 1; k < order; ++k) sub[k - 1] = static_cast<double>(sb[static_cast<std::size_t>(k)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jacobi;
  jacobi.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (jacobi.info() != Eigen::Success)
    throw NumericError("radial_gauss_rule: Jacobi eigensolver failed");

  RadialGaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    Ext x = jacobi.eigenvalues()[i];
    Ext sum = 0;
    for (int iter = 0; iter < 4; ++iter) {
      // q_order(x), its derivative, and sum_{j<order} q_j(x)^2.
      Ext q_prev = 0, q = 1 / sb[0], dq_prev = 0, dq = 0;
      sum = q * q;
      for (int k = 0; k < order; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const Ext lower = k == 0 ? Ext(0) : sb[uk];
        const Ext q_next = ((x - a[uk]) * q - lower * q_prev) / sb[uk + 1];
        const Ext dq_next = (q + (x - a[uk]) * dq - lower * dq_prev) / sb[uk + 1];
        q_prev = q;
        q = q_next;
        dq_prev = dq;
        dq = dq_next;
        if (k + 1 < order) sum += q * q;
      }
      const Ext step = q / dq;
      x -= step;
      if (std::abs(step) <= std::abs(x) * Ext(1e-19)) break;
    }
    // Christoffel number 1 / sum_j q_j(x)^2 at the refined node.
    Ext q_prev = 0, q = 1 / sb[0];
    sum = q * q;
    for (int k = 0; k + 1 < order; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const Ext lower = k == 0 ? Ext(0) : sb[uk];
      const Ext q_next = ((x - a[uk]) * q - lower * q_prev) / sb[uk + 1];
      q_prev = q;
      q = q_next;
      sum += q * q;
    }
    rule.nodes[static_cast<std::size_t>(i)] = static_cast<double>(x);
    rule.weights[static_cast<std::size_t>(i)] = static_cast<double>(1 / sum);
  }
  return rule;
}

}  // namespace

RadialGaussRule radial_gauss_rule(int order) {
  if (order < 1 || order > kMaxRadialOrder)
    throw ParameterError("radial_gauss_rule: order must lie in [1, " +
                         std::to_string(kMaxRadialOrder) + "]");
  static std::mutex mutex;
  static std::map<int, RadialGaussRule> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(order); it != cache.end()) return it->second;
  }
  RadialGaussRule rule;
  if (order <= 60)
    rule = radial_rule_impl<Float<120>>(order);
  else if (order <= 140)
    rule = radial_rule_impl<Float<200>>(order);
  else
    rule = radial_rule_impl<Float<400>>(order);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(order, rule);
  return rule;
}

QuadratureRule build_polar_rule(const FockParam& param, int radial_order,
                                int angular_order) {
  if (radial_order < 1)
    throw ParameterError("build_polar_rule: radial_order must be >= 1");
  if (angular_order < 3)
    throw ParameterError("build_polar_rule: angular_order must be >= 3");

  const RadialGaussRule radial = radial_gauss_rule(radial_order);
  const double scale = std::sqrt(param.t());

  // One complex coordinate: w = sqrt(t) rho e^{i theta}, weight 2 lambda / N.
  std::vector<Complex> nodes1;
  std::vector<double> weights1;
  nodes1.reserve(static_cast<std::size_t>(radial_order * angular_order));
  weights1.reserve(nodes1.capacity());
  for (int k = 0; k < radial_order; ++k) {
    const double rho = radial.nodes[static_cast<std::size_t>(k)] * scale;
    const double w = 2.0 * radial.weights[static_cast<std::size_t>(k)] / angular_order;
    for (int j = 0; j < angular_order; ++j) {
      const double theta = 2.0 * kPi * j / angular_order;
      nodes1.push_back(std::polar(rho, theta));
      weights1.push_back(w);
    }
  }

  QuadratureRule rule;
  rule.param = param;
  rule.measure = Measure::Gaussian;
  rule.radial_order = radial_order;
  rule.angular_order = angular_order;
  rule.exact_degree = std::min(radial_order - 1, angular_order - 1);

  const int n = param.n();
  const std::size_t m = nodes1.size();
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= m;
  rule.nodes.reserve(total);
  rule.weights.reserve(total);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Point p(n);
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      p[d] = nodes1[idx[static_cast<std::size_t>(d)]];
      w *= weights1[idx[static_cast<std::size_t>(d)]];
    }
    rule.nodes.push_back(p);
    rule.weights.push_back(w);
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < m) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  return rule;
}

QuadratureRule lebesgue_rule(const QuadratureRule& gaussian) {
  if (gaussian.measure != Measure::Gaussian)
    throw ParameterError("lebesgue_rule: input must be a Gaussian rule");
  QuadratureRule out = gaussian;
  out.measure = Measure::Lebesgue;
  const double s = gaussian.param.t();
  const double vol = gaussian.param.volume();
  for (std::size_t i = 0; i < out.nodes.size(); ++i)
    out.weights[i] *= vol * std::exp(norm_sq(out.nodes[i]) / s);
  return out;
}

QuadratureRule rescale_rule(const QuadratureRule& rule, double factor) {
  if (!(factor > 0.0)) throw ParameterError("rescale_rule: factor must be positive");
  QuadratureRule out = rule;
  out.param = FockParam(rule.param.t() * factor, rule.param.n());
  const double s = std::sqrt(factor);
  for (auto& p : out.nodes) p *= s;
  return out;
}

Complex integrate_mu(const std::function<Complex(const Point&)>& g,
                     const QuadratureRule& rule) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Complex v = g(rule.nodes[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream msg;
      msg << "integrate_mu: non-finite integrand at node " << i;
      throw NonFiniteValueError(msg.str(), rule.nodes[i]);
    }
    sum.add(rule.weights[i] * v);
  }
  return sum.value();
}

double monomial_moment(const MultiIndex& a, const MultiIndex& b,
                       const FockParam& param) {
  if (a.size() != param.n() || b.size() != param.n())
    throw ParameterError("monomial_moment: multi-index length must equal n");
  if (a != b) return 0.0;
  double v = 1.0;
  for (int j = 0; j < a.size(); ++j) v *= std::tgamma(a[j] + 1.0);
  return v * std::pow(param.t(), a.degree());
}

}  // namespace fock
