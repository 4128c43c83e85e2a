#include "fock/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fock {

DominatingProfile dominating_profile(const KernelFunction& k, const PointGrid& base, const OffsetLattice& lattice) {
  const FockParam& param = k.param();
  if (lattice.n != param.n()) throw ParameterError("dominating_profile: lattice dimension must equal n");
  if (base.points.empty()) throw ParameterError("dominating_profile: empty base grid");

  DominatingProfile prof;
  prof.param = param;
  prof.lattice = lattice;
  prof.values.assign(lattice.points.size(), 0.0);

  std::vector<Point> ws(lattice.points.size());
  std::vector<Complex> d(lattice.points.size());
  for (const Point& z : base.points) {
    for (std::size_t i = 0; i < ws.size(); ++i) ws[i] = z + lattice.points[i];
    k.damped_many_w(z, ws, d);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double a = std::abs(d[i]);
      if (!std::isfinite(a)) throw NonFiniteValueError("dominating_profile: non-finite kernel value", ws[i]);
      prof.values[i] = std::max(prof.values[i], a);
    }
  }

  double sum = 0.0;
  for (double v : prof.values) sum += v;
  prof.l1_estimate = param.normalizer() * lattice.cell_volume() * sum;

  // Tail: envelope A e^{-|u|^2/4t} fitted on the outer half of the lattice,
  // integrated over the complement of the box.
  const double t = param.t();
  const double half = lattice.half_width();
  double amp = 0.0, gmax = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < prof.values.size(); ++i) {
    const Point& u = lattice.points[i];
    const double g = prof.values[i];
    gmax = std::max(gmax, g);
    if (u.norm() >= 0.5 * half) amp = std::max(amp, g * std::exp(norm_sq(u) / (4.0 * t)));
    double box = 0.0;
    for (int j = 0; j < param.n(); ++j) box = std::max({box, std::abs(u[j].real()), std::abs(u[j].imag())});
    if (box >= half - 0.5 * lattice.spacing) edge = std::max(edge, g);
  }
  const double inside = std::pow(std::erf(half / (2.0 * std::sqrt(t))), 2 * param.n());
  const double tail = param.normalizer() * amp * std::pow(4.0 * kPi * t, param.n()) * (1.0 - inside);
  prof.l1_upper = prof.l1_estimate + (std::isfinite(tail) ? tail : std::numeric_limits<double>::infinity());
  if (gmax > 0.0 && edge > 1e-12 * gmax) {
    std::ostringstream os;
    os << "profile not negligible at the lattice edge (ratio " << edge / gmax << ")";
    prof.warnings.push_back(os.str());
  }
  return prof;
}

double wiener_norm_bound(const DominatingProfile& profile) { return profile.l1_estimate; }

QuadratureRule default_schur_rule(const FockParam& param, int radial_order, int angular_order) {
  return lebesgue_rule(rescale_rule(build_polar_rule(param, radial_order, angular_order), 2.0));
}

SchurBounds schur_bounds(const KernelFunction& k, const QuadratureRule& lebesgue, const PointGrid& base) {
  if (lebesgue.measure != Measure::Lebesgue) throw ParameterError("schur_bounds: needs a Lebesgue rule");
  if (lebesgue.param.n() != k.param().n()) throw ParameterError("schur_bounds: rule dimension mismatch");
  SchurBounds out;
  std::vector<Point> pts(lebesgue.size());
  std::vector<Complex> d(lebesgue.size());
  auto accumulate = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) s += lebesgue.weights[i] * std::abs(d[i]);
    return s;
  };
  for (const Point& p : base.points) {
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = p + lebesgue.nodes[i];
    k.damped_many_z(p, pts, d);  // w = p, z over the rule
    out.a1 = std::max(out.a1, accumulate());
    k.damped_many_w(p, pts, d);  // z = p, w over the rule
    out.ainf = std::max(out.ainf, accumulate());
  }
  return out;
}

double operator_norm_bound_p(double a1, double ainf, double p, const FockParam& param) {
  if (!(p >= 1.0)) throw ParameterError("operator_norm_bound_p: p must be >= 1");
  if (a1 < 0.0 || ainf < 0.0) throw ParameterError("operator_norm_bound_p: negative Schur constant");
  const double theta = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
  if (theta == 0.0) return param.normalizer() * a1;
  if (theta == 1.0) return param.normalizer() * ainf;
  return param.normalizer() * std::pow(a1, 1.0 - theta) * std::pow(ainf, theta);
}

std::vector<double> lattice_convolution(const std::vector<double>& g1, const std::vector<double>& g2,
                                        const OffsetLattice& lattice) {
  const std::size_t total = lattice.points.size();
  if (g1.size() != total || g2.size() != total)
    throw ParameterError("lattice_convolution: profile size does not match the lattice");
  const int dims = 2 * lattice.n;
  const int hc = lattice.half_count;
  const long side = lattice.side();
  std::vector<double> out(total, 0.0);
  const double gmax = *std::max_element(g1.begin(), g1.end());
  const double cutoff = 1e-25 * gmax;

  std::vector<long> stride(static_cast<std::size_t>(dims));
  for (int d = dims - 1, s = 1; d >= 0; --d, s *= static_cast<int>(side)) stride[static_cast<std::size_t>(d)] = s;

  std::vector<int> lo(static_cast<std::size_t>(dims)), hi(static_cast<std::size_t>(dims)), cur(static_cast<std::size_t>(dims));
  for (std::size_t j = 0; j < total; ++j) {
    const double a = g1[j];
    if (!(a > cutoff)) continue;
    const auto cj = lattice.coords_of(j);
    for (int d = 0; d < dims; ++d) {
      const auto du = static_cast<std::size_t>(d);
      lo[du] = std::max(-hc, cj[du] - hc);
      hi[du] = std::min(hc, cj[du] + hc);
      cur[du] = lo[du];
    }
    // Odometer over all but the last coordinate; the last one is contiguous.
    const int last = dims - 1;
    const auto ul = static_cast<std::size_t>(last);
    const long run = hi[ul] - lo[ul] + 1;
    while (true) {
      long out_idx = 0, src_idx = 0;
      for (int d = 0; d < last; ++d) {
        const auto du = static_cast<std::size_t>(d);
        out_idx += (cur[du] + hc) * stride[du];
        src_idx += (cur[du] - cj[du] + hc) * stride[du];
      }
      out_idx += lo[ul] + hc;
      src_idx += lo[ul] - cj[ul] + hc;
      double* o = out.data() + out_idx;
      const double* s = g2.data() + src_idx;
      for (long r = 0; r < run; ++r) o[r] += a * s[r];

      int d = last - 1;
      for (; d >= 0; --d) {
        const auto du = static_cast<std::size_t>(d);
        if (++cur[du] <= hi[du]) break;
        cur[du] = lo[du];
      }
      if (d < 0) break;
    }
  }
  const double h = lattice.cell_volume();
  for (double& v : out) v *= h;
  return out;
}

DominatingProfile convolution_bound(const DominatingProfile& p1, const DominatingProfile& p2) {
  if (!(p1.param == p2.param)) throw ParameterError("convolution_bound: parameter mismatch");
  if (!(p1.lattice == p2.lattice)) throw ParameterError("convolution_bound: lattice mismatch");
  DominatingProfile out;
  out.param = p1.param;
  out.lattice = p1.lattice;
  out.values = lattice_convolution(p1.values, p2.values, p1.lattice);
  const double c = p1.param.normalizer();
  double sum = 0.0;
  for (double& v : out.values) {
    v *= c;
    sum += v;
  }
  const double raw = c * p1.lattice.cell_volume() * sum;
  const double target = p1.l1_estimate * p2.l1_estimate;
  if (raw > 0.0) {
    const double scale = target / raw;
    for (double& v : out.values) v *= scale;
  }
  out.l1_estimate = target;
  out.l1_upper = p1.l1_upper * p2.l1_upper;
  for (const auto* p : {&p1, &p2})
    for (const auto& w : p->warnings) out.warnings.push_back(w);
  return out;
}

MembershipDiagnostic membership_diagnostic(const DominatingProfile& profile) {
  MembershipDiagnostic out;
  const auto& lat = profile.lattice;
  const double t = profile.param.t();
  const double half = lat.half_width();
  double gmax = 0.0, edge = 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < profile.values.size(); ++i) {
    const Point& u = lat.points[i];
    const double g = profile.values[i];
    gmax = std::max(gmax, g);
    double box = 0.0;
    for (int j = 0; j < lat.n; ++j) box = std::max({box, std::abs(u[j].real()), std::abs(u[j].imag())});
    if (box >= half - 0.5 * lat.spacing) edge = std::max(edge, g);
    if (u.norm() >= 0.5 * half && g > 1e-300) {
      const double x = norm_sq(u) / t, y = std::log(g);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
  }
  if (gmax == 0.0) {
    out.decay_rate = std::numeric_limits<double>::infinity();
    out.confidence = "high";
    return out;
  }
  out.boundary_ratio = edge / gmax;
  if (count >= 3) {
    const double den = count * sxx - sx * sx;
    out.decay_rate = den > 0.0 ? -(count * sxy - sx * sy) / den : 0.0;
  } else {
    // Everything beyond half the lattice underflowed.
    out.decay_rate = std::numeric_limits<double>::infinity();
  }
  if (out.boundary_ratio < 1e-12 && out.decay_rate > 0.05)
    out.confidence = "high";
  else if (out.boundary_ratio < 1e-6)
    out.confidence = "moderate";
  else
    out.confidence = "low";
  return out;
}

}  // namespace fock
