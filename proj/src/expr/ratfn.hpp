#pragma once

// Canonical rational-function arithmetic over "atoms": symbols plus opaque
// builtin-function applications. Two rewrite rules live inside the ring:
// delta^2 -> 1 (delta is a sign parameter) and sqrt(u)^2 -> u / abs(u)^2 ->
// u^2 when u is a polynomial. GCD results are always verified by exact
// division, so a failed heuristic can only cost simplification, never
// soundness.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "expr/expr.hpp"

namespace pss::rf {

struct AtomEntry {
  bool is_call = false;
  Sym sym;
  Fn1 f = Fn1::sin;
  Expr arg;  // canonical argument for calls
  bool has_poly_arg = false;
};

// key -> exponent (> 0); keys are canonical prints of atoms
using Mono = std::map<std::string, int>;

struct MonoOrder {
  bool operator()(const Mono& a, const Mono& b) const;  // graded lex, ascending
};

struct Poly {
  std::map<Mono, Rational, MonoOrder> t;

  static Poly zero() { return {}; }
  static Poly constant(const Rational& c);
  static Poly atom(const std::string& key);

  bool is_zero() const { return t.empty(); }
  bool is_constant() const { return t.empty() || (t.size() == 1 && t.begin()->first.empty()); }
  Rational constant_value() const;
  bool depends_on(const std::string& key) const;
  std::set<std::string> atoms() const;
  int deg(const std::string& key) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly neg() const;
  Poly pow(int k) const;  // k >= 0
  friend bool operator==(const Poly& a, const Poly& b) { return a.t == b.t; }
};

// Atom registry (process-wide, append-only, thread-safe).
std::string intern_sym_atom(const Sym& s);
std::string intern_call_atom(Fn1 f, const Expr& canonical_arg, std::optional<Poly> poly_arg);
const AtomEntry& atom_entry(const std::string& key);
// Polynomial form of a call atom's argument, when the argument is polynomial.
const Poly* atom_poly_arg(const std::string& key);

// Exact division in the reduced ring; nullopt when not divisible (or when the
// step budget is exhausted, which callers must treat as "not divisible").
std::optional<Poly> try_divide(const Poly& p, const Poly& d);

// Primitive multivariate gcd (integer coefficients, content 1, positive
// leading coefficient). Falls back to 1 whenever verification fails.
Poly gcd_primitive(const Poly& a, const Poly& b);

// p = scale * result, result with integer coefficients, content 1, and
// positive leading coefficient. p must be nonzero.
std::pair<Poly, Rational> primitive_int(const Poly& p);
Poly scale(const Poly& p, const Rational& c);

struct RatFn {
  Poly num;
  Poly den = Poly::constant(1);

  static RatFn from_poly(Poly p) { return {std::move(p), Poly::constant(1)}; }
  bool is_zero() const { return num.is_zero(); }
  bool is_poly() const { return den.is_constant() && den.constant_value() == 1; }

  void canon();

  friend RatFn operator+(const RatFn& a, const RatFn& b);
  friend RatFn operator-(const RatFn& a, const RatFn& b);
  friend RatFn operator*(const RatFn& a, const RatFn& b);
  friend RatFn operator/(const RatFn& a, const RatFn& b);
  RatFn neg() const;
  RatFn pow(int k) const;
};

RatFn to_ratfn(const Expr& e);
Expr poly_to_expr(const Poly& p);
Expr ratfn_to_expr(const RatFn& r);

}  // namespace pss::rf
