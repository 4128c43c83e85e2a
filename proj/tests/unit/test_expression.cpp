#include <doctest.h>

#include <cmath>
#include <random>

#include "fock/catalog.hpp"
#include "fock/cli/expression.hpp"
#include "fock/cli/symbols.hpp"
#include "fock/operators.hpp"

using namespace fock;
using namespace fock::cli;

namespace {

Complex at(const std::string& s, Complex z) { return parse_symbol(s)(make_point({z})); }

// Random source text from the grammar; depth-limited.
std::string random_source(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 3);
  switch (pick(rng)) {
    case 0: return "z";
    case 1: return std::to_string(std::uniform_int_distribution<int>(0, 20)(rng)) + ".25";
    case 2: return "2i";
    case 3: return "i";
    case 4: return "(" + random_source(rng, depth - 1) + " + " + random_source(rng, depth - 1) + ")";
    case 5: return random_source(rng, depth - 1) + " - " + random_source(rng, depth - 1);
    case 6: return random_source(rng, depth - 1) + "*" + random_source(rng, depth - 1);
    case 7: return "-" + random_source(rng, depth - 1);
    case 8: {
      static const char* f[] = {"exp", "conj", "abs", "re", "im", "phase"};
      return std::string(f[std::uniform_int_distribution<int>(0, 5)(rng)]) + "(" + random_source(rng, depth - 1) + ")";
    }
    default: return "(" + random_source(rng, depth - 1) + ")^" + std::to_string(std::uniform_int_distribution<int>(-2, 3)(rng));
  }
}

}  // namespace

TEST_SUITE("expression") {

TEST_CASE("evaluation against direct formulas") {
  const Complex z(0.7, -1.3);
  CHECK(std::abs(at("exp(-abs(z)^2)", z) - std::exp(-std::norm(z))) < 1e-15);
  CHECK(std::abs(at("z/abs(z)", z) - z / std::abs(z)) < 1e-15);
  CHECK(std::abs(at("phase(z)", z) - z / std::abs(z)) < 1e-15);
  CHECK(std::abs(at("2*z + 3i", z) - (2.0 * z + Complex(0, 3))) < 1e-15);
  CHECK(std::abs(at("re(z)*im(z) - conj(z)", z) - (z.real() * z.imag() - std::conj(z))) < 1e-15);
  CHECK(std::abs(at("z^-2", z) - 1.0 / (z * z)) < 1e-14);
  CHECK(std::abs(at("1 - 2 - 3", z) - Complex(-4.0)) < 1e-15);
  CHECK(std::abs(at("8/4/2", z) - Complex(1.0)) < 1e-15);
  CHECK(at("phase(z)", 0.0) == Complex(0.0));
  const Point w = make_point({Complex(1, 0), Complex(0, 2)});
  CHECK(std::abs(parse_symbol("z1*z2")(w) - Complex(0, 2)) < 1e-15);
}

TEST_CASE("precedence: power over unary minus over products") {
  const Complex z(1.5, 0.0);
  CHECK(at("-z^2", z) == Complex(-2.25));
  CHECK(at("(-z)^2", z) == Complex(2.25));
  CHECK(at("-2*3", z) == Complex(-6.0));
  CHECK(at("1+2*3", z) == Complex(7.0));
  CHECK(at("2*3i", z) == Complex(0, 6));
  CHECK(parse_symbol("z1 + z3").arity == 3);
  CHECK(parse_symbol("2 + i").is_constant());
}

TEST_CASE("syntax errors carry offsets and expected tokens") {
  try {
    parse_symbol("1 + * z");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4u);
    CHECK_FALSE(e.expected().empty());
  }
  try {
    parse_symbol("exp(z");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 5u);
    CHECK(e.expected().count(")") == 1u);
  }
  try {
    parse_symbol("2*foo(z)");
    FAIL("no error");
  } catch (const UnknownIdentifierError& e) {
    CHECK(e.name() == "foo");
    CHECK(e.offset() == 2u);
  }
  CHECK_THROWS_AS(parse_symbol("z4"), UnknownIdentifierError);
  CHECK_THROWS_AS(parse_symbol("z^1.5"), ParseError);
  CHECK_THROWS_AS(parse_symbol(""), ParseError);
  CHECK_THROWS_AS(parse_symbol("(z"), ParseError);
  CHECK_THROWS_AS(parse_constant("z + 1"), ParseError);
  CHECK(parse_constant("0.5 - 2i") == Complex(0.5, -2.0));
}

TEST_CASE("print/parse round trip on random expressions") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string src = random_source(rng, 4);
    CAPTURE(src);
    const auto e = parse_symbol(src);
    const std::string printed = print_expr(*e.ast);
    const auto again = parse_symbol(printed);
    CHECK(same_tree(*e.ast, *again.ast));
    CHECK(print_expr(*again.ast) == printed);
    const Point z = make_point({Complex(0.3, -0.7)});
    const Complex a = e(z), b = again(z);
    if (std::isfinite(std::abs(a))) CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("number printing is exact") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23}) {
    const auto e = parse_symbol(print_expr(*parse_symbol(std::to_string(v)).ast));
    CHECK(e(make_point({Complex(0.0)})).real() == parse_symbol(std::to_string(v))(make_point({Complex(0.0)})).real());
  }
}

TEST_CASE("radial decomposition") {
  auto d = decompose(*parse_symbol("exp(-abs(z)^2)").ast, 1);
  REQUIRE(d);
  REQUIRE(d->size() == 1u);
  CHECK((*d)[0].gauss == doctest::Approx(1.0));
  CHECK((*d)[0].winding == 0);

  d = decompose(*parse_symbol("2*z/abs(z)*exp(-0.5*z*conj(z)) + 3").ast, 1);
  REQUIRE(d);
  REQUIRE(d->size() == 2u);
  int found = 0;
  for (const auto& term : *d) {
    if (term.winding == 1) {
      CHECK(term.coeff == Complex(2.0));
      CHECK(term.gauss == doctest::Approx(0.5));
      ++found;
    } else if (term.winding == 0) {
      CHECK(term.coeff == Complex(3.0));
      CHECK(term.gauss == 0.0);
      ++found;
    }
  }
  CHECK(found == 2);

  d = decompose(*parse_symbol("conj(phase(z))^2").ast, 1);
  REQUIRE(d);
  CHECK((*d)[0].winding == -2);

  CHECK_FALSE(decompose(*parse_symbol("re(z)").ast, 1));
  CHECK_FALSE(decompose(*parse_symbol("exp(abs(z)^2)").ast, 1));
  CHECK_FALSE(decompose(*parse_symbol("z").ast, 1));
  CHECK(decompose(*parse_symbol("exp(-abs(z1)^2 - abs(z2)^2)").ast, 2));
  CHECK_FALSE(decompose(*parse_symbol("exp(-abs(z1)^2)").ast, 2));
  CHECK_FALSE(decompose(*parse_symbol("phase(z1)").ast, 2));
}

TEST_CASE("radial bands against known coefficients") {
  const auto b = radial_band(1, 0.0, 1.3, 50);
  for (int m = 0; m < 50; ++m) CHECK(std::abs(b[static_cast<std::size_t>(m)] - phase_shift_weight(m)) < 1e-13);
  const auto g = radial_band(0, 0.7, 1.3, 20);
  for (int m = 0; m < 20; ++m) CHECK(std::abs(g[static_cast<std::size_t>(m)] - std::pow(1.0 + 0.7 * 1.3, -(m + 1.0))) < 1e-14);
}

TEST_CASE("symbol resolution chooses the right backend") {
  const FockParam p(1.0, 1);
  const auto rule = build_polar_rule(p);
  CHECK(resolve_symbol("exp(-abs(z)^2) + 1", p, rule).method == "closed-form");
  CHECK(resolve_symbol("phase(z)", p, rule).method == "series");
  const auto q = resolve_symbol("re(z)/(1+abs(z)^2)", p, rule);
  CHECK(q.method == "quadrature");
  CHECK_FALSE(q.symbol.directional_limits);
  const auto ql = resolve_symbol("re(z)/(1+abs(z)^2)", p, rule, std::string("0"));
  REQUIRE(ql.symbol.directional_limits);
  CHECK(*(*ql.symbol.directional_limits)(make_point({Complex(1.0)})) == Complex(0.0));
  const auto ph = resolve_symbol("phase(z)", p, rule);
  REQUIRE(ph.symbol.directional_limits);
  const Point x = make_point({std::polar(1.0, 0.4)});
  CHECK(std::abs(*(*ph.symbol.directional_limits)(x) - x[0]) < 1e-15);
  // resolved matrices agree with quadrature Toeplitz matrices
  const BasisSpec basis(p, 10);
  for (const char* s : {"exp(-abs(z)^2) + 1", "phase(z)*exp(-0.3*abs(z)^2)", "conj(z)/abs(z)"}) {
    const auto r = resolve_symbol(s, p, rule);
    const auto ref = toeplitz_matrix(r.symbol, basis, rule);
    CHECK_MESSAGE((r.matrix(basis).entries - ref.entries).cwiseAbs().maxCoeff() < 1e-10, s);
  }
}

}
