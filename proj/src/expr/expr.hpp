#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "support/errors.hpp"

namespace pss {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Symbols: jet coordinates z_{x^a t^b}, scalar parameters, and abstract
// differentiable functions of z carried with a derivative order (rho, rho',
// rho'', ...).
// ---------------------------------------------------------------------------

enum class SymKind { jet, param, fn };

struct Sym {
  SymKind kind = SymKind::param;
  std::string name;  // parameter / function name; jets are always named "z"
  int dx = 0;        // jet: number of x-derivatives
  int dt = 0;        // jet: number of t-derivatives
  int order = 0;     // abstract function: derivative order

  static Sym jet(int dx, int dt);
  static Sym param(std::string name);
  static Sym fn(std::string name, int order = 0);

  bool is_jet() const { return kind == SymKind::jet; }
  bool is_z() const { return kind == SymKind::jet && dx == 0 && dt == 0; }
  int jet_order() const { return dx + dt; }

  // Canonical spelling: "z", "z_xxt", "m", "rho''".
  std::string str() const;

  friend bool operator==(const Sym& a, const Sym& b);
  friend bool operator<(const Sym& a, const Sym& b);
};

inline const Sym kZ = Sym::jet(0, 0);
inline const Sym kZx = Sym::jet(1, 0);
inline const Sym kZt = Sym::jet(0, 1);
inline const Sym kZxx = Sym::jet(2, 0);
inline const Sym kZxt = Sym::jet(1, 1);
inline const Sym kZtt = Sym::jet(0, 2);

// Builtin unary functions admitted by the grammar.
enum class Fn1 { sin, cos, exp, ln, sqrt, abs, atan };

const char* fn1_name(Fn1 f);
std::optional<Fn1> fn1_from_name(std::string_view s);

// ---------------------------------------------------------------------------
// Expr: immutable expression tree. Construction never simplifies beyond
// trivial constant folding in the convenience operators; normalize() produces
// the canonical form.
// ---------------------------------------------------------------------------

class Expr;

namespace detail {
struct Node {
  enum class K { cst, sym, add, mul, pow, quo, call };
  K k = K::cst;
  Rational c;              // cst
  Sym s;                   // sym
  std::vector<Expr> kids;  // add/mul children; quo {num,den}; pow {base}; call {arg}
  int ip = 1;              // pow exponent
  Fn1 f = Fn1::sin;        // call target
};
}  // namespace detail

class Expr {
public:
  Expr();  // the constant 0
  static Expr constant(Rational r);
  static Expr integer(long long v);
  static Expr symbol(const Sym& s);
  static Expr add(std::vector<Expr> kids);
  static Expr mul(std::vector<Expr> kids);
  static Expr pow(Expr base, int e);
  static Expr quot(Expr num, Expr den);
  static Expr call(Fn1 f, Expr arg);

  using K = detail::Node::K;
  K kind() const;
  const Rational& cst() const;
  const Sym& sym() const;
  const std::vector<Expr>& kids() const;
  int ipow() const;
  Fn1 fn() const;

  bool is_literal_zero() const;
  bool is_literal_one() const;
  bool is_constant() const { return kind() == K::cst; }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

private:
  std::shared_ptr<const detail::Node> n_;
  explicit Expr(std::shared_ptr<const detail::Node> n) : n_(std::move(n)) {}
};

// Shorthands used throughout the library and tests.
Expr ex_int(long long v);
Expr ex_rat(long long num, long long den);
Expr ex_sym(const Sym& s);
Expr ex_param(const std::string& name);
Expr ex_fn(const std::string& name, int order = 0);
Expr ex_jet(int dx, int dt);

// ---------------------------------------------------------------------------
// Structural operations.
// ---------------------------------------------------------------------------

std::string to_string(const Expr& e);

// Exact partial derivative. Jet coordinates are mutually independent;
// d rho^{(k)} / dz = rho^{(k+1)}.
Expr diff(const Expr& e, const Sym& v);

// Generic derivation: carrier(s) supplies the derivative of each bare symbol,
// the engine supplies linearity, Leibniz, and chain rules.
Expr derive_with(const Expr& e, const std::function<Expr(const Sym&)>& carrier);

// Replace symbols by expressions (no binding of call arguments).
Expr substitute(const Expr& e, const std::map<Sym, Expr>& repl);

// Replace every occurrence of an abstract function `name` (any derivative
// order k) by d^k/dz^k of `value`, which must be an expression in z alone.
Expr instantiate_fn(const Expr& e, const std::string& name, const Expr& value);

void collect_symbols(const Expr& e, std::set<Sym>& out);
std::set<Sym> free_symbols(const Expr& e);
int max_jet_order(const Expr& e);
bool depends_on(const Expr& e, const Sym& v);

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

struct Binding {
  std::map<Sym, double> values;

  Binding() = default;
  Binding(std::initializer_list<std::pair<const Sym, double>> init) : values(init) {}
  Binding& set(const Sym& s, double v) {
    values[s] = v;
    return *this;
  }
  std::optional<double> get(const Sym& s) const {
    auto it = values.find(s);
    if (it == values.end()) return std::nullopt;
    return it->second;
  }
};

// Throws UnboundVariable / SingularPoint / DomainError.
double eval(const Expr& e, const Binding& b);
// Higher-precision path for oracles.
long double eval_ld(const Expr& e, const Binding& b);

// Evaluates a top-level sum while tracking the largest term magnitude, for
// scale-aware residual tolerances |sum| <= tol * (1 + max|term|).
struct TermEval {
  double value = 0.0;
  double max_term = 0.0;
};
TermEval eval_terms(const Expr& e, const Binding& b);

// Non-throwing evaluation with a configurable denominator floor; used by the
// admissible-point sampler.
struct GuardedEval {
  std::optional<double> value;
  Errc err = Errc::domain_error;
};
GuardedEval eval_guarded(const Expr& e, const Binding& b, double den_floor);

// ---------------------------------------------------------------------------
// Parsing and canonical form.
// ---------------------------------------------------------------------------

Expr parse_expr(std::string_view src);

// Canonical rational-function form over atoms (symbols and builtin-function
// applications). sqrt-free rational subexpressions are expanded and reduced to
// lowest terms with a deterministic monomial order; delta^2 -> 1; even powers
// of sqrt/abs atoms with polynomial arguments are rewritten into the argument.
Expr normalize(const Expr& e);
bool is_zero(const Expr& e);
bool equal_normalized(const Expr& a, const Expr& b);

}  // namespace pss
