#include "fock/catalog.hpp"

#include <cmath>

#include "fock/operators.hpp"

namespace fock {

double phase_shift_weight(int m) {
  if (m < 0) throw ParameterError("phase_shift_weight: negative index");
  // int |z|^{2m+1} d mu_t = t^{m+1/2} Gamma(m + 3/2); the powers of t cancel.
  return std::exp(std::lgamma(m + 1.5) - 0.5 * (std::lgamma(m + 1.0) + std::lgamma(m + 2.0)));
}

std::vector<Complex> phase_shift_weights(int count) {
  std::vector<Complex> a(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) a[static_cast<std::size_t>(m)] = phase_shift_weight(m);
  return a;
}

KernelFunction phase_kernel(const FockParam& param) {
  if (param.n() != 1) throw ParameterError("phase_kernel: needs n = 1");
  return band_series_kernel(param, {{1, phase_shift_weights(kCatalogBandLength)}}, "phase");
}

KernelFunction conj_phase_kernel(const FockParam& param) {
  if (param.n() != 1) throw ParameterError("conj_phase_kernel: needs n = 1");
  // T_{conj phase} = T_phase^*, so e_m goes to a_{m-1} e_{m-1}.
  std::vector<Complex> c(kCatalogBandLength, 0.0);
  for (int m = 1; m < kCatalogBandLength; ++m) c[static_cast<std::size_t>(m)] = phase_shift_weight(m - 1);
  return band_series_kernel(param, {{-1, std::move(c)}}, "conj-phase");
}

namespace {

SymbolFunction conj_phase_symbol() {
  SymbolFunction f = phase_symbol(0);
  auto inner = f.eval;
  auto lim = *f.directional_limits;
  f.eval = [inner](const Point& z) { return std::conj(inner(z)); };
  f.directional_limits = [lim](const Point& x) -> std::optional<Complex> {
    const auto v = lim(x);
    if (!v) return std::nullopt;
    return std::conj(*v);
  };
  f.label = "conj-phase";
  return f;
}

CatalogEntry gauss_entry(const FockParam& param, double a, const std::string& name) {
  KernelFunction k = gaussian_toeplitz_kernel(param, a);
  const double t = param.t();
  return {name, gaussian_symbol(a), k, [a, t](const BasisSpec& basis) {
            TruncatedOperator out = scaled_identity(basis, 0.0);
            const int n = basis.param().n();
            for (int i = 0; i < basis.dimension(); ++i)
              out.entries(i, i) = std::pow(1.0 + a * t, -(basis.indices()[static_cast<std::size_t>(i)].degree() + n));
            return out;
          }};
}

CatalogEntry band_entry(const std::string& name, SymbolFunction f, KernelFunction k) {
  auto band = std::dynamic_pointer_cast<const BandSeriesKernel>(k.impl());
  return {name, std::move(f), k, [band](const BasisSpec& basis) {
            return TruncatedOperator{basis, band->matrix(basis.dimension()), {}};
          }};
}

}  // namespace

std::vector<CatalogEntry> operator_catalog(const FockParam& param) {
  std::vector<CatalogEntry> out;
  out.push_back({"identity", constant_symbol(1.0), identity_kernel(param),
                 [](const BasisSpec& basis) { return scaled_identity(basis, 1.0); }});
  out.push_back(gauss_entry(param, 1.0, "gauss1"));
  out.push_back(gauss_entry(param, 0.5, "gauss05"));
  if (param.n() == 1) {
    out.push_back(band_entry("phase", phase_symbol(0), phase_kernel(param)));
    out.push_back(band_entry("conj-phase", conj_phase_symbol(), conj_phase_kernel(param)));
  }
  Point v = zero_point(param.n());
  v[0] = Complex(0.5, 0.3);
  out.push_back({"weyl", std::nullopt, weyl_kernel(param, v),
                 [v](const BasisSpec& basis) { return weyl_matrix(v, basis); }});
  return out;
}

CatalogEntry catalog_entry(const FockParam& param, const std::string& name) {
  for (auto& e : operator_catalog(param))
    if (e.name == name) return e;
  throw ParameterError("unknown catalog operator: " + name);
}

}  // namespace fock
