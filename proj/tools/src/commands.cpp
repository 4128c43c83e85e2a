#include "fock/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/SVD>
#include <json.hpp>

#include "fock/cli/expression.hpp"
#include "fock/cli/invariants.hpp"
#include "fock/cli/symbols.hpp"
#include "fock/grids.hpp"
#include "fock/operators.hpp"
#include "fock/spectral.hpp"
#include "fock/wiener.hpp"

#ifndef FOCK_VERSION
#define FOCK_VERSION "0.0.0"
#endif

namespace fock::cli {

using nlohmann::json;

namespace {

struct Globals {
  double t = 1.0;
  int n = 1;
  int degree = -1;
  int radial_order = kDefaultRadialOrder;
  int angular_order = kDefaultAngularOrder;
  std::string out;
  std::uint64_t seed = 0;
  double eps = 1e-6;

  int resolved_degree() const {
    if (degree >= 0) return degree;
    return n == 1 ? 30 : n == 2 ? 12 : 8;
  }
};

// Usage problems detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json cplx(Complex c) { return json::array({c.real(), c.imag()}); }

json cplx_list(const std::vector<Complex>& v) {
  json a = json::array();
  for (const Complex& c : v) a.push_back(cplx(c));
  return a;
}

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(cplx(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_csv(const std::string& path, const std::string& header, const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open " + path + " for writing");
  f << header << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << csv_number(r[i]);
    f << '\n';
  }
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("bad integer list '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

class Context {
 public:
  explicit Context(const Globals& g)
      : g_(g), param_(g.t, g.n), rule_(build_polar_rule(param_, g.radial_order, g.angular_order)) {}

  const Globals& globals() const { return g_; }
  const FockParam& param() const { return param_; }
  const QuadratureRule& rule() const { return rule_; }
  BasisSpec basis(int degree) const { return BasisSpec(param_, degree); }

  ResolvedSymbol symbol(const std::string& text, const std::optional<std::string>& limit = std::nullopt) const {
    return resolve_symbol(text, param_, rule_, limit);
  }

  json meta(const std::string& command) const {
    return {{"t", g_.t}, {"n", g_.n}, {"degree", g_.resolved_degree()}, {"command", command}, {"version", FOCK_VERSION}};
  }

 private:
  Globals g_;
  FockParam param_;
  QuadratureRule rule_;
};

json symbol_json(const ResolvedSymbol& s) {
  return {{"expression", print_expr(*s.expr.ast)}, {"method", s.method},
          {"provenance", to_string(s.kernel.provenance())}};
}

// commands
json cmd_toeplitz(const Context& ctx, const std::string& sym) {
  const ResolvedSymbol s = ctx.symbol(sym);
  const TruncatedOperator op = s.matrix(ctx.basis(ctx.globals().resolved_degree()));
  return {{"symbol", symbol_json(s)}, {"dimension", op.dimension()}, {"matrix", matrix_json(op.entries)}};
}

json cmd_berezin(const Context& ctx, const std::string& sym, double radius, int steps, const std::string& csv,
                 const std::optional<std::string>& w, const std::optional<std::string>& z) {
  if (steps < 2) throw UsageError("--steps must be at least 2");
  const ResolvedSymbol s = ctx.symbol(sym);
  const int n = ctx.param().n();
  const double r_max = radius * std::sqrt(ctx.param().t());
  const std::vector<Point> dirs = direction_grid(n, 64);
  json curve = json::array();
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < steps; ++i) {
    const double r = r_max * i / (steps - 1);
    Point p = zero_point(n);
    p[0] = r;
    const Complex v = s.kernel.damped(p, p);
    double m = std::abs(v);
    if (r > 0.0)
      for (const Point& x : dirs) {
        const Point q = r * x;
        m = std::max(m, std::abs(s.kernel.damped(q, q)));
      }
    curve.push_back({{"radius", r}, {"value", cplx(v)}, {"max_abs", m}});
    rows.push_back({r, v.real(), v.imag(), m});
  }
  if (!csv.empty()) write_csv(csv, "radius,re,im,max_abs", rows);
  json data = {{"symbol", symbol_json(s)}, {"curve", curve}};
  if (w || z) {
    if (!w || !z) throw UsageError("--w and --z go together");
    if (n != 1) throw UsageError("--w/--z need n = 1");
    const Point pw = make_point({parse_constant(*w)});
    const Point pz = make_point({parse_constant(*z)});
    data["bivariate"] = {{"w", cplx(pw[0])}, {"z", cplx(pz[0])}, {"value", cplx(berezin_bivariate(s.kernel, pw, pz))}};
  }
  return data;
}

json cmd_spectrum(const Context& ctx, const std::string& sym, const std::string& degrees_text,
                  const std::optional<std::string>& probe_text) {
  const ResolvedSymbol s = ctx.symbol(sym);
  std::vector<int> degrees =
      degrees_text.empty() ? std::vector<int>{ctx.globals().resolved_degree()} : parse_int_list(degrees_text);
  int top = 0;
  for (int d : degrees) top = std::max(top, d);
  const TruncatedOperator op = s.matrix(ctx.basis(top));
  std::optional<Complex> probe;
  if (probe_text) probe = parse_constant(*probe_text);
  const SpectralReport rep = truncated_spectrum(op, degrees, probe);
  json sections = json::array();
  for (std::size_t i = 0; i < rep.degrees.size(); ++i) {
    json sec = {{"degree", rep.degrees[i]}, {"eigenvalues", cplx_list(rep.eigenvalues[i])}};
    if (probe) sec["singular_min"] = rep.singular_min[i];
    sections.push_back(std::move(sec));
  }
  json data = {{"symbol", symbol_json(s)}, {"sections", sections}};
  if (probe) data["probe"] = cplx(*probe);
  return data;
}

json cmd_ess_spectrum(const Context& ctx, const std::string& sym, int directions,
                      const std::optional<std::string>& limit) {
  const ResolvedSymbol s = ctx.symbol(sym, limit);
  if (!s.symbol.directional_limits)
    throw UnsupportedSymbolError("no directional limits known for '" + sym + "'; pass --limit-symbol");
  const std::vector<Point> dirs = direction_grid(ctx.param().n(), directions);
  const auto values = essential_spectrum_estimate(s.symbol, dirs, ctx.basis(ctx.globals().resolved_degree()));
  return {{"symbol", symbol_json(s)}, {"directions", static_cast<int>(dirs.size())}, {"values", cplx_list(values)}};
}

json profile_json(const DominatingProfile& p) {
  return {{"l1_estimate", p.l1_estimate}, {"l1_upper", p.l1_upper}, {"warnings", p.warnings}};
}

json cmd_norm_bounds(const Context& ctx, const std::string& sym) {
  const ResolvedSymbol s = ctx.symbol(sym);
  const FockParam& param = ctx.param();
  const PointGrid base = default_base_grid(param);
  const DominatingProfile prof = dominating_profile(s.kernel, base, default_offset_lattice(param));
  const SchurBounds sb = schur_bounds(s.kernel, default_schur_rule(param), base);
  const MembershipDiagnostic md = membership_diagnostic(prof);
  const TruncatedOperator op = s.matrix(ctx.basis(ctx.globals().resolved_degree()));
  Eigen::JacobiSVD<ComplexMatrix> svd(op.entries);
  json p_bounds = {{"1", operator_norm_bound_p(sb.a1, sb.ainf, 1.0, param)},
                   {"2", operator_norm_bound_p(sb.a1, sb.ainf, 2.0, param)},
                   {"inf", operator_norm_bound_p(sb.a1, sb.ainf, INFINITY, param)}};
  return {{"symbol", symbol_json(s)},
          {"wiener", profile_json(prof)},
          {"schur", {{"a1", sb.a1}, {"ainf", sb.ainf}, {"p_bounds", p_bounds}}},
          {"truncation_norm", svd.singularValues()(0)},
          {"membership",
           {{"decay_rate", md.decay_rate}, {"boundary_ratio", md.boundary_ratio}, {"confidence", md.confidence}}}};
}

json cmd_compose(const Context& ctx, const std::string& sym1, const std::string& sym2) {
  const ResolvedSymbol s1 = ctx.symbol(sym1);
  const ResolvedSymbol s2 = ctx.symbol(sym2);
  const FockParam& param = ctx.param();
  const PointGrid base = default_base_grid(param);
  const OffsetLattice lat = default_offset_lattice(param);
  const DominatingProfile p1 = dominating_profile(s1.kernel, base, lat);
  const DominatingProfile p2 = dominating_profile(s2.kernel, base, lat);
  const DominatingProfile conv = convolution_bound(p1, p2);
  const KernelFunction k = compose_kernels(s1.kernel, s2.kernel, ctx.rule());
  const DominatingProfile direct = dominating_profile(k, base, lat);
  double excess = -INFINITY;
  for (std::size_t i = 0; i < conv.values.size(); ++i) excess = std::max(excess, direct.values[i] - conv.values[i]);
  return {{"first", symbol_json(s1)},
          {"second", symbol_json(s2)},
          {"composed_provenance", to_string(k.provenance())},
          {"bound_first", p1.l1_estimate},
          {"bound_second", p2.l1_estimate},
          {"convolved_bound", conv.l1_estimate},
          {"composed_bound", direct.l1_estimate},
          {"max_profile_excess", excess}};
}

json cmd_compactness(const Context& ctx, const std::string& sym, double radius, int steps, double tau,
                     const std::string& csv) {
  if (steps < 3) throw UsageError("--steps must be at least 3");
  const ResolvedSymbol s = ctx.symbol(sym);
  const double r_max = radius * std::sqrt(ctx.param().t());
  std::vector<double> radii;
  for (int i = 0; i < steps; ++i) radii.push_back(r_max * i / (steps - 1));
  const CompactnessResult res = compactness_test(s.kernel, radii, tau);
  json curve = json::array();
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < res.radii.size(); ++i) {
    curve.push_back({{"radius", res.radii[i]}, {"value", res.decay[i]}});
    rows.push_back({res.radii[i], res.decay[i]});
  }
  if (!csv.empty()) write_csv(csv, "radius,value", rows);
  return {{"symbol", symbol_json(s)}, {"compact", res.verdict}, {"tau", tau}, {"curve", curve}};
}

json cmd_index(const Context& ctx, const std::string& sym, const std::string& lambda_text,
               const std::string& degrees_text, int pad, const std::optional<std::string>& limit) {
  const ResolvedSymbol s = ctx.symbol(sym, limit);
  const Complex lambda = parse_constant(lambda_text);
  const std::vector<int> degrees = parse_int_list(degrees_text);
  if (pad < 1) throw UsageError("--pad must be positive");
  int top = 0;
  for (int d : degrees) top = std::max(top, d);
  const BasisSpec basis = ctx.basis(top + pad);
  const TruncatedOperator op = s.matrix(basis);

  IndexOptions opt;
  opt.eps = ctx.globals().eps;
  json ess = nullptr;
  if (s.symbol.directional_limits) {
    const auto values =
        essential_spectrum_estimate(s.symbol, direction_grid(ctx.param().n(), 64), ctx.basis(top));
    opt.essential_spectrum = values;
    ess = distance_to_set(lambda, values);
  }
  if (ctx.param().n() == 1) opt.kernel = s.kernel;
  const IndexResult res = fredholm_index(op, lambda, degrees, opt);
  const auto& d = res.diagnostics;
  json data = {{"symbol", symbol_json(s)},
               {"lambda", cplx(lambda)},
               {"index", res.index},
               {"basis_degree", top + pad},
               {"degrees", d.degrees},
               {"kernel_counts", d.kernel_counts},
               {"cokernel_counts", d.cokernel_counts},
               {"singular_min", d.singular_min},
               {"distance_to_essential_spectrum", ess}};
  if (d.winding) {
    data["winding"] = *d.winding;
    data["winding_radius"] = d.winding_radius;
  }
  return data;
}

json cmd_verify(const Context& ctx, bool& all_pass) {
  const auto checks = run_invariants(ctx.param(), ctx.globals().seed);
  json list = json::array();
  all_pass = true;
  for (const auto& c : checks) {
    all_pass = all_pass && c.pass;
    list.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass},
                    {"detail", c.detail}});
  }
  return {{"checks", list}, {"all_pass", all_pass}};
}

void emit(const Globals& g, std::ostream& out, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw UsageError("cannot open " + g.out + " for writing");
  f << text;
}

json error_json(const std::string& type, const std::string& message) {
  return {{"type", type}, {"message", message}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical operator calculus on Fock spaces", "fock"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", FOCK_VERSION);

  Globals g;
  app.add_option("--t", g.t, "Gaussian parameter t")->capture_default_str();
  app.add_option("--n", g.n, "complex dimension")->capture_default_str()->check(CLI::Range(1, kMaxDim));
  app.add_option("--degree", g.degree, "truncation degree D (default 30 for n=1, 12 for n=2, 8 for n=3)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--radial-order", g.radial_order, "radial quadrature order")->capture_default_str();
  app.add_option("--angular-order", g.angular_order, "angular quadrature order")->capture_default_str();
  app.add_option("--out", g.out, "output JSON file (stdout if absent)");
  app.add_option("--seed", g.seed, "seed for randomized checks")->capture_default_str();
  app.add_option("--eps", g.eps, "singular-value threshold for index counts")->capture_default_str();

  std::string symbol, symbol2, degrees = "", csv;
  std::optional<std::string> probe, limit, w, z;
  std::string lambda = "0";
  std::string index_degrees = "30,35,40";
  double radius = 8.0, tau = 1e-6, comp_radius = 10.0;
  int steps = 33, comp_steps = 21, directions = 64, pad = 20;

  auto* toeplitz = app.add_subcommand("toeplitz", "matrix of T_f on the monomial basis");
  auto* berezin = app.add_subcommand("berezin", "Berezin transform of T_f along the diagonal");
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of finite sections");
  auto* ess = app.add_subcommand("ess-spectrum", "essential spectrum from limit operators");
  auto* norms = app.add_subcommand("norm-bounds", "Wiener and Schur norm bounds");
  auto* compose = app.add_subcommand("compose", "submultiplicativity of the Wiener bound");
  auto* compact = app.add_subcommand("compactness", "Berezin compactness test");
  auto* index = app.add_subcommand("index", "Fredholm index of T_f - lambda");
  app.add_subcommand("verify", "run the invariant suite");

  for (auto* sub : {toeplitz, berezin, spectrum, ess, norms, compose, compact, index})
    sub->add_option("--symbol", symbol, "symbol expression in z (z1..z3)")->required();
  compose->add_option("--symbol2", symbol2, "second symbol expression")->required();
  berezin->add_option("--radius", radius, "largest radius in units of sqrt(t)")->capture_default_str();
  berezin->add_option("--steps", steps, "number of radii")->capture_default_str();
  berezin->add_option("--csv", csv, "CSV mirror of the curve");
  berezin->add_option("--w", w, "bivariate transform: first point (n = 1)");
  berezin->add_option("--z", z, "bivariate transform: second point (n = 1)");
  spectrum->add_option("--degrees", degrees, "comma-separated section degrees (default: --degree)");
  spectrum->add_option("--probe", probe, "report the smallest singular value of A_D - probe");
  ess->add_option("--directions", directions, "number of boundary directions")->capture_default_str();
  ess->add_option("--limit-symbol", limit, "directional limit as an expression of the unit direction");
  compact->add_option("--radius", comp_radius, "largest radius in units of sqrt(t)")->capture_default_str();
  compact->add_option("--steps", comp_steps, "number of radii")->capture_default_str();
  compact->add_option("--tau", tau, "decay threshold")->capture_default_str();
  compact->add_option("--csv", csv, "CSV mirror of the decay curve");
  index->add_option("--lambda", lambda, "spectral parameter")->capture_default_str();
  index->add_option("--degrees", index_degrees, "section degrees")->capture_default_str();
  index->add_option("--pad", pad, "rows beyond the largest section degree")->capture_default_str();
  index->add_option("--limit-symbol", limit, "directional limit as an expression of the unit direction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  std::optional<Context> ctx;
  try {
    ctx.emplace(g);
    if (g.n > 1 && ctx->globals().resolved_degree() > 40)
      throw UsageError("--degree too large for n > 1");
    json data;
    bool ok = true;
    if (name == "toeplitz") data = cmd_toeplitz(*ctx, symbol);
    else if (name == "berezin") data = cmd_berezin(*ctx, symbol, radius, steps, csv, w, z);
    else if (name == "spectrum") data = cmd_spectrum(*ctx, symbol, degrees, probe);
    else if (name == "ess-spectrum") data = cmd_ess_spectrum(*ctx, symbol, directions, limit);
    else if (name == "norm-bounds") data = cmd_norm_bounds(*ctx, symbol);
    else if (name == "compose") data = cmd_compose(*ctx, symbol, symbol2);
    else if (name == "compactness") data = cmd_compactness(*ctx, symbol, comp_radius, comp_steps, tau, csv);
    else if (name == "index") data = cmd_index(*ctx, symbol, lambda, index_degrees, pad, limit);
    else data = cmd_verify(*ctx, ok);
    emit(g, out, {{"meta", ctx->meta(name)}, {"data", data}});
    if (!ok) {
      err << "fock verify: some checks failed\n";
      return kExitVerifyFailed;
    }
    return kExitOk;
  } catch (const ParseError& e) {
    err << "fock: " << e.what();
    if (!e.expected().empty()) {
      err << "; expected one of:";
      for (const auto& x : e.expected()) err << ' ' << x;
    }
    err << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "fock: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedSymbolError& e) {
    err << "fock: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "fock: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InconclusiveIndexError& e) {
    json diag = error_json("inconclusive-index", e.what());
    diag["kernel_counts"] = e.kernel_counts();
    diag["cokernel_counts"] = e.cokernel_counts();
    err << "fock: " << e.what() << '\n';
    emit(g, out, {{"meta", ctx ? ctx->meta(name) : json()}, {"error", diag}});
    return kExitNumeric;
  } catch (const NonFiniteValueError& e) {
    json diag = error_json("non-finite", e.what());
    json node = json::array();
    for (Eigen::Index j = 0; j < e.node().size(); ++j) node.push_back(cplx(e.node()[j]));
    diag["node"] = node;
    err << "fock: " << e.what() << '\n';
    emit(g, out, {{"meta", ctx ? ctx->meta(name) : json()}, {"error", diag}});
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "fock: " << e.what() << '\n';
    emit(g, out, {{"meta", ctx ? ctx->meta(name) : json()}, {"error", error_json("numeric", e.what())}});
    return kExitNumeric;
  } catch (const NotFredholmError& e) {
    err << "fock: " << e.what() << '\n';
    emit(g, out, {{"meta", ctx ? ctx->meta(name) : json()}, {"error", error_json("not-fredholm", e.what())}});
    return kExitNumeric;
  }
}

}  // namespace fock::cli
