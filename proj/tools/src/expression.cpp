#include "fock/cli/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <tuple>

namespace fock::cli {

namespace {

struct FuncName {
  const char* name;
  Func func;
};

constexpr std::array<FuncName, 6> kFuncs{{{"exp", Func::Exp},
                                          {"conj", Func::Conj},
                                          {"abs", Func::Abs},
                                          {"re", Func::Re},
                                          {"im", Func::Im},
                                          {"phase", Func::Phase}}};

const char* func_name(Func f) {
  for (const auto& e : kFuncs)
    if (e.func == f) return e.name;
  return "?";
}

std::set<std::string> operand_start() {
  std::set<std::string> s{"number", "i", "z", "z1", "z2", "z3", "(", "-"};
  for (const auto& e : kFuncs) s.insert(e.name);
  return s;
}

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

class Parser {
 public:
  explicit Parser(const std::string& src) : s_(src) {}

  ExprPtr parse() {
    ExprPtr e = expr(0);
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'", {"+", "-", "*", "/", "^", "end of input"});
    return e;
  }

  int arity() const { return arity_; }

 private:
  static int binary_prec(char c) {
    switch (c) {
      case '+':
      case '-': return 1;
      case '*':
      case '/': return 2;
      default: return -1;
    }
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg, std::set<std::string> expected) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_), pos_, std::move(expected));
  }

  ExprPtr expr(int min_prec) {
    ExprPtr lhs = unary();
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      const char op = s_[pos_];
      const int prec = binary_prec(op);
      if (prec < 0 || prec < min_prec) break;
      const std::size_t at = pos_++;
      ExprPtr rhs = expr(prec + 1);
      Expr e;
      e.kind = op == '+' ? Expr::Kind::Add : op == '-' ? Expr::Kind::Sub : op == '*' ? Expr::Kind::Mul : Expr::Kind::Div;
      e.lhs = lhs;
      e.rhs = rhs;
      e.offset = at;
      lhs = make(std::move(e));
    }
    return lhs;
  }

  ExprPtr unary() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '-') {
      Expr e;
      e.kind = Expr::Kind::Neg;
      e.offset = pos_++;
      e.lhs = unary();
      return make(std::move(e));
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      Expr e;
      e.kind = Expr::Kind::Pow;
      e.offset = pos_++;
      skip();
      bool neg = false;
      if (pos_ < s_.size() && s_[pos_] == '-') {
        neg = true;
        ++pos_;
      }
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == start) fail("'^' needs an integer exponent", {"integer"});
      if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'i'))
        fail("'^' needs an integer exponent", {"integer"});
      int k = 0;
      const auto r = std::from_chars(s_.data() + start, s_.data() + pos_, k);
      if (r.ec != std::errc() || k > 1000) {
        pos_ = start;
        fail("exponent out of range", {"integer"});
      }
      e.exponent = neg ? -k : k;
      e.lhs = base;
      return make(std::move(e));
    }
    return base;
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ > b;
    };
    bool any = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      any = digits() || any;
    }
    if (!any) {
      pos_ = start;
      fail("malformed number", {"digit"});
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        digits();
      }
    }
    double v = 0.0;
    const auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (r.ec != std::errc() || r.ptr != s_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      fail("number out of range", {"number"});
    }
    Expr e;
    e.kind = Expr::Kind::Number;
    e.offset = start;
    e.value = v;
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        !(pos_ + 1 < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '_'))) {
      ++pos_;
      e.value = Complex(0.0, v);
    }
    return make(std::move(e));
  }

  ExprPtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input", operand_start());
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr(0);
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("unbalanced parenthesis", {")", "+", "-", "*", "/"});
      ++pos_;
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      Expr e;
      e.offset = start;
      if (id == "i") {
        e.kind = Expr::Kind::Number;
        e.value = Complex(0.0, 1.0);
        return make(std::move(e));
      }
      if (id == "z" || id == "z1" || id == "z2" || id == "z3") {
        e.kind = Expr::Kind::Variable;
        e.var = id == "z" ? 0 : id[1] - '1';
        arity_ = std::max(arity_, e.var + 1);
        return make(std::move(e));
      }
      for (const auto& f : kFuncs) {
        if (id != f.name) continue;
        skip();
        if (pos_ >= s_.size() || s_[pos_] != '(') fail("function '" + id + "' needs an argument list", {"("});
        ++pos_;
        std::vector<ExprPtr> args;
        skip();
        if (pos_ < s_.size() && s_[pos_] == ')') fail("function '" + id + "' expects 1 argument, got 0", operand_start());
        while (true) {
          args.push_back(expr(0));
          skip();
          if (pos_ < s_.size() && s_[pos_] == ',') {
            ++pos_;
            continue;
          }
          break;
        }
        if (pos_ >= s_.size() || s_[pos_] != ')') fail("unbalanced parenthesis", {")", ",", "+", "-", "*", "/"});
        if (args.size() != 1) {
          pos_ = start;
          fail("function '" + id + "' expects 1 argument, got " + std::to_string(args.size()), {});
        }
        ++pos_;
        e.kind = Expr::Kind::Call;
        e.func = f.func;
        e.lhs = args.front();
        return make(std::move(e));
      }
      throw UnknownIdentifierError(id, start);
    }
    fail("unexpected '" + std::string(1, c) + "'", operand_start());
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int arity_ = 0;
};

int prec(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    case Expr::Kind::Number:
      if (e.value.real() != 0.0 && e.value.imag() != 0.0) return 5;  // printed in parens
      if (e.value.real() < 0.0 || e.value.imag() < 0.0) return 3;
      return 5;
    default: return 5;
  }
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

std::string print_number(Complex v) {
  if (v.imag() == 0.0) return format_double(v.real());
  if (v.real() == 0.0) {
    if (v.imag() == 1.0) return "i";
    if (v.imag() == -1.0) return "-i";
    return format_double(v.imag()) + "i";
  }
  return "(" + format_double(v.real()) + (v.imag() < 0.0 ? "-" : "+") + format_double(std::abs(v.imag())) + "i)";
}

Complex ipow(Complex b, int k) {
  const bool inv = k < 0;
  unsigned u = static_cast<unsigned>(inv ? -k : k);
  Complex r = 1.0;
  while (u) {
    if (u & 1u) r *= b;
    b *= b;
    u >>= 1u;
  }
  return inv ? 1.0 / r : r;
}

}  // namespace

bool same_tree(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Number: return a.value == b.value;
    case Expr::Kind::Variable: return a.var == b.var;
    case Expr::Kind::Neg: return same_tree(*a.lhs, *b.lhs);
    case Expr::Kind::Pow: return a.exponent == b.exponent && same_tree(*a.lhs, *b.lhs);
    case Expr::Kind::Call: return a.func == b.func && same_tree(*a.lhs, *b.lhs);
    default: return same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
  }
}

SymbolExpression parse_symbol(const std::string& text) {
  Parser p(text);
  SymbolExpression out;
  out.source = text;
  out.ast = p.parse();
  out.arity = p.arity();
  return out;
}

Complex SymbolExpression::operator()(const Point& z) const { return evaluate(*ast, z); }

std::string print_expr(const Expr& e) {
  auto wrap = [](const Expr& c, bool paren) { return paren ? "(" + print_expr(c) + ")" : print_expr(c); };
  switch (e.kind) {
    case Expr::Kind::Number: return print_number(e.value);
    case Expr::Kind::Variable: return e.var == 0 ? "z" : "z" + std::to_string(e.var + 1);
    case Expr::Kind::Neg: return "-" + wrap(*e.lhs, prec(*e.lhs) < 3);
    case Expr::Kind::Pow: return wrap(*e.lhs, prec(*e.lhs) < 5) + "^" + std::to_string(e.exponent);
    case Expr::Kind::Call: return std::string(func_name(e.func)) + "(" + print_expr(*e.lhs) + ")";
    default: {
      const int p = prec(e);
      const char* op = e.kind == Expr::Kind::Add ? " + " : e.kind == Expr::Kind::Sub ? " - " : e.kind == Expr::Kind::Mul ? "*" : "/";
      return wrap(*e.lhs, prec(*e.lhs) < p) + op + wrap(*e.rhs, prec(*e.rhs) <= p);
    }
  }
}

Complex evaluate(const Expr& e, const Point& z) {
  switch (e.kind) {
    case Expr::Kind::Number: return e.value;
    case Expr::Kind::Variable:
      if (e.var >= z.size()) throw ParameterError("expression uses z" + std::to_string(e.var + 1) + " but n = " + std::to_string(z.size()));
      return z[e.var];
    case Expr::Kind::Neg: return -evaluate(*e.lhs, z);
    case Expr::Kind::Add: return evaluate(*e.lhs, z) + evaluate(*e.rhs, z);
    case Expr::Kind::Sub: return evaluate(*e.lhs, z) - evaluate(*e.rhs, z);
    case Expr::Kind::Mul: return evaluate(*e.lhs, z) * evaluate(*e.rhs, z);
    case Expr::Kind::Div: return evaluate(*e.lhs, z) / evaluate(*e.rhs, z);
    case Expr::Kind::Pow: return ipow(evaluate(*e.lhs, z), e.exponent);
    case Expr::Kind::Call: {
      const Complex a = evaluate(*e.lhs, z);
      switch (e.func) {
        case Func::Exp: return std::exp(a);
        case Func::Conj: return std::conj(a);
        case Func::Abs: return std::abs(a);
        case Func::Re: return a.real();
        case Func::Im: return a.imag();
        case Func::Phase: {
          const double r = std::abs(a);
          return r == 0.0 ? Complex(0.0) : a / r;
        }
      }
    }
  }
  return 0.0;
}

Complex parse_constant(const std::string& text) {
  const SymbolExpression e = parse_symbol(text);
  if (!e.is_constant()) throw ParseError("expected a constant expression", 0, {"number"});
  return e(Point());
}

// decomposition
namespace {

// c prod_j e^{i q_j theta_j} r_j^{p_j} e^{-a_j r_j^2}
struct Key {
  std::array<int, kMaxDim> q{};
  std::array<int, kMaxDim> p{};
  std::array<double, kMaxDim> a{};
  auto tie() const { return std::tie(q, p, a); }
  bool operator<(const Key& o) const { return tie() < o.tie(); }
  bool operator==(const Key& o) const { return tie() == o.tie(); }
};

using Poly = std::map<Key, Complex>;

constexpr std::size_t kMaxTerms = 64;

Poly constant(Complex c) { return c == 0.0 ? Poly{} : Poly{{Key{}, c}}; }

void add_into(Poly& acc, const Poly& x, Complex scale) {
  for (const auto& [k, c] : x) {
    acc[k] += scale * c;
    if (acc[k] == 0.0) acc.erase(k);
  }
}

std::optional<Poly> mul(const Poly& x, const Poly& y) {
  Poly out;
  for (const auto& [kx, cx] : x)
    for (const auto& [ky, cy] : y) {
      Key k;
      for (int j = 0; j < kMaxDim; ++j) {
        const auto u = static_cast<std::size_t>(j);
        k.q[u] = kx.q[u] + ky.q[u];
        k.p[u] = kx.p[u] + ky.p[u];
        k.a[u] = kx.a[u] + ky.a[u];
      }
      out[k] += cx * cy;
      if (out[k] == 0.0) out.erase(k);
    }
  if (out.size() > kMaxTerms) return std::nullopt;
  return out;
}

std::optional<Poly> inverse(const Poly& x) {
  if (x.size() != 1) return std::nullopt;
  const auto& [k, c] = *x.begin();
  Key r;
  for (std::size_t j = 0; j < kMaxDim; ++j) {
    r.q[j] = -k.q[j];
    r.p[j] = -k.p[j];
    r.a[j] = -k.a[j];
  }
  return Poly{{r, 1.0 / c}};
}

Poly conjugate(const Poly& x) {
  Poly out;
  for (const auto& [k, c] : x) {
    Key r = k;
    for (auto& q : r.q) q = -q;
    out[r] += std::conj(c);
  }
  return out;
}

std::optional<Poly> lift(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Number: return constant(e.value);
    case K::Variable: {
      Key k;
      k.q[static_cast<std::size_t>(e.var)] = 1;
      k.p[static_cast<std::size_t>(e.var)] = 1;
      return Poly{{k, 1.0}};
    }
    case K::Neg: {
      auto x = lift(*e.lhs);
      if (!x) return std::nullopt;
      for (auto& [k, c] : *x) c = -c;
      return x;
    }
    case K::Add:
    case K::Sub: {
      auto x = lift(*e.lhs), y = lift(*e.rhs);
      if (!x || !y) return std::nullopt;
      add_into(*x, *y, e.kind == K::Add ? 1.0 : -1.0);
      return x;
    }
    case K::Mul:
    case K::Div: {
      auto x = lift(*e.lhs), y = lift(*e.rhs);
      if (!x || !y) return std::nullopt;
      if (e.kind == K::Div) {
        y = inverse(*y);
        if (!y) return std::nullopt;
      }
      return mul(*x, *y);
    }
    case K::Pow: {
      auto b = lift(*e.lhs);
      if (!b) return std::nullopt;
      if (e.exponent < 0) {
        b = inverse(*b);
        if (!b) return std::nullopt;
      }
      Poly r = constant(1.0);
      for (int i = 0; i < std::abs(e.exponent); ++i) {
        auto m = mul(r, *b);
        if (!m) return std::nullopt;
        r = std::move(*m);
      }
      return r;
    }
    case K::Call: {
      auto x = lift(*e.lhs);
      if (!x) return std::nullopt;
      switch (e.func) {
        case Func::Conj: return conjugate(*x);
        case Func::Re:
        case Func::Im: {
          Poly out = *x;
          const Poly cx = conjugate(*x);
          if (e.func == Func::Re) {
            for (auto& [k, c] : out) c *= 0.5;
            add_into(out, cx, 0.5);
          } else {
            for (auto& [k, c] : out) c *= Complex(0.0, -0.5);
            add_into(out, cx, Complex(0.0, 0.5));
          }
          return out;
        }
        case Func::Abs:
        case Func::Phase: {
          if (x->empty()) return constant(0.0);
          if (x->size() != 1) return std::nullopt;
          Key k = x->begin()->first;
          const Complex c = x->begin()->second;
          if (e.func == Func::Abs) {
            k.q.fill(0);
            return Poly{{k, std::abs(c)}};
          }
          k.p.fill(0);
          k.a.fill(0.0);
          return Poly{{k, c / std::abs(c)}};
        }
        case Func::Exp: {
          // c0 + sum_j c_j r_j^2 with real c_j <= 0.
          Complex c0 = 0.0;
          Key g;
          for (const auto& [k, c] : *x) {
            if (k == Key{}) {
              c0 += c;
              continue;
            }
            int hits = 0;
            std::size_t at = 0;
            for (std::size_t j = 0; j < kMaxDim; ++j) {
              if (k.q[j] != 0 || k.a[j] != 0.0) return std::nullopt;
              if (k.p[j] == 2) {
                ++hits;
                at = j;
              } else if (k.p[j] != 0) {
                return std::nullopt;
              }
            }
            if (hits != 1 || c.imag() != 0.0 || c.real() > 0.0) return std::nullopt;
            g.a[at] -= c.real();
          }
          return Poly{{g, std::exp(c0)}};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<RadialTerm>> decompose(const Expr& e, int n) {
  const auto poly = lift(e);
  if (!poly) return std::nullopt;
  std::vector<RadialTerm> out;
  for (const auto& [k, c] : *poly) {
    for (std::size_t j = 0; j < kMaxDim; ++j) {
      if (k.p[j] != 0) return std::nullopt;
      if (static_cast<int>(j) >= n && (k.q[j] != 0 || k.a[j] != 0.0)) return std::nullopt;
    }
    RadialTerm t{c, k.q[0], k.a[0]};
    if (n > 1) {
      for (int j = 0; j < n; ++j) {
        const auto u = static_cast<std::size_t>(j);
        if (k.q[u] != 0 || k.a[u] != k.a[0]) return std::nullopt;
      }
    }
    if (t.gauss < 0.0) return std::nullopt;
    out.push_back(t);
  }
  return out;
}

}  // namespace fock::cli
