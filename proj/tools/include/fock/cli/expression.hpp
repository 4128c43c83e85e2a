#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fock/types.hpp"

namespace fock::cli {

/// Syntax error at a byte offset, with the set of tokens that would have been accepted.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset, std::set<std::string> expected)
      : std::runtime_error(what), offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::set<std::string> expected_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t offset)
      : ParseError("unknown identifier '" + name + "'", offset, {}), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

enum class Func { Exp, Conj, Abs, Re, Im, Phase };

struct Expr {
  enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

  Kind kind = Kind::Number;
  /// Number: the value (the parser only creates real or purely imaginary literals).
  Complex value = 0.0;
  /// Variable: coordinate index (z and z1 are both 0).
  int var = 0;
  /// Pow: the integer exponent.
  int exponent = 0;
  Func func = Func::Exp;
  std::shared_ptr<const Expr> lhs, rhs;
  /// Byte offset of the node in the source.
  std::size_t offset = 0;
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Structural equality, ignoring offsets.
bool same_tree(const Expr& a, const Expr& b);

struct SymbolExpression {
  std::string source;
  ExprPtr ast;
  /// Highest coordinate index used plus one (0 for constants).
  int arity = 0;

  Complex operator()(const Point& z) const;
  bool is_constant() const { return arity == 0; }
};

/// Grammar (precedence climbing):
///   expr    := unary (('+' | '-' | '*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' ['-'] INTEGER)?
///   primary := NUMBER ['i'] | 'i' | VAR | FUNC '(' expr ')' | '(' expr ')'
/// with VAR in {z, z1, z2, z3} and FUNC in {exp, conj, abs, re, im, phase}.
/// '^' binds tighter than unary minus, which binds tighter than '*' and '/'.
SymbolExpression parse_symbol(const std::string& text);

/// Canonical text: parse(print(e)) reproduces e's tree and print is idempotent.
std::string print_expr(const Expr& e);

Complex evaluate(const Expr& e, const Point& z);

/// Evaluates a variable-free expression; throws ParseError otherwise.
Complex parse_constant(const std::string& text);

/// A term c e^{i q theta} e^{-a |z|^2} of a symbol in one variable. Sums of
/// such terms have exact band kernels and directional limits.
struct RadialTerm {
  Complex coeff = 0.0;
  int winding = 0;
  double gauss = 0.0;
};

/// Recognizes n = 1 symbols that are finite sums of RadialTerms, where
/// abs(z)^2 may also be written z*conj(z) and phase(z) as z/abs(z).
/// For n > 1, recognizes sums of c e^{-a (|z1|^2 + ... + |zn|^2)} with
/// winding 0 only. Returns nullopt for anything else.
std::optional<std::vector<RadialTerm>> decompose(const Expr& e, int n);

}  // namespace fock::cli
