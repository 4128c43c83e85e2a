#include "fock/cli/symbols.hpp"

#include <cmath>
#include <map>

#include "fock/catalog.hpp"
#include "fock/grids.hpp"
#include "fock/operators.hpp"

namespace fock::cli {

std::vector<Complex> radial_band(int q, double a, double t, int length) {
  const int p = std::abs(q);
  std::vector<Complex> c(static_cast<std::size_t>(length), 0.0);
  const double s = std::log1p(a * t);
  for (int m = std::max(0, -q); m < length; ++m) {
    const int l = std::min(m, m + q);
    const double e = l + 0.5 * p + 1.0;
    c[static_cast<std::size_t>(m)] =
        std::exp(std::lgamma(e) - 0.5 * (std::lgamma(l + 1.0) + std::lgamma(l + p + 1.0)) - e * s);
  }
  return c;
}

namespace {

ResolvedSymbol exact(SymbolExpression expr, const std::vector<RadialTerm>& terms, const FockParam& param) {
  const int n = param.n();
  const double t = param.t();
  ResolvedSymbol out{std::move(expr), {}, identity_kernel(param, 0.0), {}, "closed-form"};

  SymbolFunction f;
  auto ast = out.expr.ast;
  f.eval = [ast](const Point& z) { return evaluate(*ast, z); };
  f.sup_bound = 0.0;
  for (const auto& term : terms) f.sup_bound += std::abs(term.coeff);
  f.directional_limits = [terms](const Point& x) -> std::optional<Complex> {
    Complex s = 0.0;
    const double r = std::abs(x[0]);
    for (const auto& term : terms) {
      if (term.gauss != 0.0) continue;
      if (term.winding == 0) {
        s += term.coeff;
        continue;
      }
      if (r < 1e-12) return std::nullopt;
      s += term.coeff * std::pow(x[0] / r, term.winding);
    }
    return s;
  };
  f.label = print_expr(*out.expr.ast);
  out.symbol = f;

  bool radial = true;
  for (const auto& term : terms) radial = radial && term.winding == 0;

  if (radial) {
    // Sum of closed forms; the matrix is diagonal.
    bool first = true;
    for (const auto& term : terms) {
      KernelFunction k = term.gauss == 0.0 ? identity_kernel(param, term.coeff)
                                           : gaussian_toeplitz_kernel(param, term.gauss, term.coeff);
      out.kernel = first ? k : add_kernels(out.kernel, k);
      first = false;
    }
    out.matrix = [terms, t, n](const BasisSpec& basis) {
      TruncatedOperator op = scaled_identity(basis, 0.0);
      for (int i = 0; i < basis.dimension(); ++i) {
        const int deg = basis.indices()[static_cast<std::size_t>(i)].degree();
        Complex v = 0.0;
        for (const auto& term : terms) v += term.coeff * std::pow(1.0 + term.gauss * t, -(deg + n));
        op.entries(i, i) = v;
      }
      return op;
    };
    return out;
  }

  std::map<int, std::vector<Complex>> bands;
  for (const auto& term : terms) {
    auto& dst = bands[term.winding];
    dst.resize(kCatalogBandLength, 0.0);
    const auto c = radial_band(term.winding, term.gauss, t, kCatalogBandLength);
    for (std::size_t m = 0; m < c.size(); ++m) dst[m] += term.coeff * c[m];
  }
  out.kernel = band_series_kernel(param, std::move(bands), f.label);
  out.method = "series";
  auto band = std::dynamic_pointer_cast<const BandSeriesKernel>(out.kernel.impl());
  out.matrix = [band](const BasisSpec& basis) {
    return TruncatedOperator{basis, band->matrix(basis.dimension()), {}};
  };
  return out;
}

}  // namespace

ResolvedSymbol resolve_symbol(const std::string& text, const FockParam& param, const QuadratureRule& rule,
                              const std::optional<std::string>& limit_symbol) {
  SymbolExpression expr = parse_symbol(text);
  if (expr.arity > param.n())
    throw ParameterError("symbol uses z" + std::to_string(expr.arity) + " but n = " + std::to_string(param.n()));

  std::optional<SymbolExpression> limit;
  if (limit_symbol) {
    limit = parse_symbol(*limit_symbol);
    if (limit->arity > param.n()) throw ParameterError("limit symbol uses more coordinates than n");
  }

  if (auto terms = decompose(*expr.ast, param.n())) {
    ResolvedSymbol out = exact(std::move(expr), *terms, param);
    if (limit) {
      auto last = limit->ast;
      out.symbol.directional_limits = [last](const Point& x) -> std::optional<Complex> { return evaluate(*last, x); };
    }
    return out;
  }

  SymbolFunction f;
  auto ast = expr.ast;
  f.eval = [ast](const Point& z) { return evaluate(*ast, z); };
  f.label = print_expr(*expr.ast);
  if (limit) {
    auto last = limit->ast;
    f.directional_limits = [last](const Point& x) -> std::optional<Complex> { return evaluate(*last, x); };
  }
  // Sup estimate on a coarse grid: only used for reporting.
  const PointGrid grid = polar_grid(param.n(), 6.0 * std::sqrt(param.t()), 16, 16);
  for (const Point& z : grid.points) f.sup_bound = std::max(f.sup_bound, std::abs(f.eval(z)));

  if (rule.measure != Measure::Gaussian || !(rule.param == param))
    throw ParameterError("resolve_symbol: rule does not match the parameters");
  ResolvedSymbol out{std::move(expr), f, toeplitz_quadrature_kernel(f, rule), {}, "quadrature"};
  out.matrix = [f, rule](const BasisSpec& basis) { return toeplitz_matrix(f, basis, rule); };
  return out;
}

}  // namespace fock::cli
