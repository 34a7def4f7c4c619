#include <cctype>
#include <string>

#include "expr/expr.hpp"

namespace pss {

namespace {

struct Parser {
  std::string_view src;
  size_t pos = 0;
  std::set<std::string> fn_names;  // names seen with primes or applied to z

  [[noreturn]] void fail(const std::string& msg) const {
    raise(Errc::parse_error, "parse error at position " + std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos != src.size()) fail("unexpected trailing input");
    return e;
  }

  Expr parse_sum() {
    Expr e = parse_term();
    while (true) {
      if (eat('+')) {
        e = e + parse_term();
      } else if (eat('-')) {
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    while (true) {
      if (eat('*')) {
        e = e * parse_unary();
      } else if (eat('/')) {
        e = e / parse_unary();
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (eat('-')) return -parse_unary();
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    skip_ws();
    if (!eat('^')) return base;
    int e = parse_int_exponent();
    return Expr::pow(base, e);
  }

  int parse_int_exponent() {
    skip_ws();
    bool paren = eat('(');
    bool neg = eat('-');
    skip_ws();
    if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
      fail("expected integer exponent");
    long long v = 0;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
      v = v * 10 + (src[pos] - '0');
      if (v > 1000) fail("exponent too large");
      ++pos;
    }
    if (paren && !eat(')')) fail("expected ')' after exponent");
    return static_cast<int>(neg ? -v : v);
  }

  Expr parse_primary() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of input");
    char c = src[pos];
    if (c == '(') {
      ++pos;
      Expr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    BigInt ip(std::string(src.substr(start, pos - start)));
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      size_t fstart = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      if (fstart == pos) fail("expected digits after decimal point");
      std::string frac(src.substr(fstart, pos - fstart));
      BigInt den = 1;
      for (size_t i = 0; i < frac.size(); ++i) den *= 10;
      return Expr::constant(Rational(ip * den + BigInt(frac), den));
    }
    return Expr::constant(Rational(ip));
  }

  // jet names: z, z_x, z_t, z_xx, z_xt, ... ('x's first, then 't's)
  static bool jet_orders(const std::string& name, int* dx, int* dt) {
    if (name == "z") {
      *dx = *dt = 0;
      return true;
    }
    if (name.size() < 3 || name[0] != 'z' || name[1] != '_') return false;
    size_t i = 2;
    int a = 0, b = 0;
    while (i < name.size() && name[i] == 'x') {
      ++a;
      ++i;
    }
    while (i < name.size() && name[i] == 't') {
      ++b;
      ++i;
    }
    if (i != name.size() || a + b == 0) return false;
    *dx = a;
    *dt = b;
    return true;
  }

  Expr parse_ident() {
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    std::string name(src.substr(start, pos - start));

    int primes = 0;
    while (pos < src.size() && src[pos] == '\'') {
      ++primes;
      ++pos;
    }

    int dx = 0, dt = 0;
    if (primes == 0 && jet_orders(name, &dx, &dt)) {
      if (peek() == '(') fail("jet coordinate '" + name + "' cannot be applied");
      return Expr::symbol(Sym::jet(dx, dt));
    }

    if (auto f = fn1_from_name(name)) {
      if (primes > 0) fail("builtin function '" + name + "' cannot carry primes");
      if (!eat('(')) fail("expected '(' after function '" + name + "'");
      Expr arg = parse_sum();
      if (!eat(')')) fail("expected ')' after argument of '" + name + "'");
      return Expr::call(*f, arg);
    }

    // abstract function of z, or a bare parameter
    if (peek() == '(') {
      eat('(');
      Expr arg = parse_sum();
      if (!eat(')')) fail("expected ')'");
      if (!(arg.kind() == Expr::K::sym && arg.sym().is_z()))
        raise(Errc::unknown_function,
              "unknown function '" + name + "': abstract functions take the argument z");
      fn_names.insert(name);
      return Expr::symbol(Sym::fn(name, primes));
    }
    if (primes > 0) {
      fn_names.insert(name);
      return Expr::symbol(Sym::fn(name, primes));
    }
    return Expr::symbol(Sym::param(name));
  }
};

// A name used as an abstract function anywhere in the source promotes every
// bare occurrence of the same name to the order-0 function.
Expr unify_fn_names(const Expr& e, const std::set<std::string>& fns) {
  if (fns.empty()) return e;
  std::map<Sym, Expr> repl;
  for (const Sym& s : free_symbols(e)) {
    if (s.kind == SymKind::param && fns.count(s.name))
      repl.emplace(s, Expr::symbol(Sym::fn(s.name, 0)));
  }
  return repl.empty() ? e : substitute(e, repl);
}

}  // namespace

Expr parse_expr(std::string_view src) {
  Parser p;
  p.src = src;
  Expr e = p.parse();
  return unify_fn_names(e, p.fn_names);
}

}  // namespace pss
