#include "expr/expr.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

namespace pss {

// ---------------------------------------------------------------------------
// Sym
// ---------------------------------------------------------------------------

Sym Sym::jet(int dx, int dt) {
  Sym s;
  s.kind = SymKind::jet;
  s.name = "z";
  s.dx = dx;
  s.dt = dt;
  return s;
}

Sym Sym::param(std::string name) {
  Sym s;
  s.kind = SymKind::param;
  s.name = std::move(name);
  return s;
}

Sym Sym::fn(std::string name, int order) {
  Sym s;
  s.kind = SymKind::fn;
  s.name = std::move(name);
  s.order = order;
  return s;
}

std::string Sym::str() const {
  switch (kind) {
    case SymKind::jet: {
      if (dx == 0 && dt == 0) return "z";
      std::string out = "z_";
      out.append(static_cast<size_t>(dx), 'x');
      out.append(static_cast<size_t>(dt), 't');
      return out;
    }
    case SymKind::param:
      return name;
    case SymKind::fn: {
      std::string out = name;
      out.append(static_cast<size_t>(order), '\'');
      return out;
    }
  }
  return name;
}

static std::tuple<int, std::string, int, int, int> sym_key(const Sym& s) {
  return {static_cast<int>(s.kind), s.name, s.dx, s.dt, s.order};
}

bool operator==(const Sym& a, const Sym& b) { return sym_key(a) == sym_key(b); }
bool operator<(const Sym& a, const Sym& b) { return sym_key(a) < sym_key(b); }

const char* fn1_name(Fn1 f) {
  switch (f) {
    case Fn1::sin: return "sin";
    case Fn1::cos: return "cos";
    case Fn1::exp: return "exp";
    case Fn1::ln: return "ln";
    case Fn1::sqrt: return "sqrt";
    case Fn1::abs: return "abs";
    case Fn1::atan: return "atan";
  }
  return "?";
}

std::optional<Fn1> fn1_from_name(std::string_view s) {
  if (s == "sin") return Fn1::sin;
  if (s == "cos") return Fn1::cos;
  if (s == "exp") return Fn1::exp;
  if (s == "ln") return Fn1::ln;
  if (s == "sqrt") return Fn1::sqrt;
  if (s == "abs") return Fn1::abs;
  if (s == "atan") return Fn1::atan;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Expr construction
// ---------------------------------------------------------------------------

using Node = detail::Node;
using K = Node::K;

Expr::Expr() {
  auto n = std::make_shared<Node>();
  n->k = K::cst;
  n->c = 0;
  n_ = std::move(n);
}

Expr Expr::constant(Rational r) {
  auto n = std::make_shared<Node>();
  n->k = K::cst;
  n->c = std::move(r);
  return Expr(std::move(n));
}

Expr Expr::integer(long long v) { return constant(Rational(v)); }

Expr Expr::symbol(const Sym& s) {
  auto n = std::make_shared<Node>();
  n->k = K::sym;
  n->s = s;
  return Expr(std::move(n));
}

Expr Expr::add(std::vector<Expr> kids) {
  if (kids.empty()) return Expr();
  if (kids.size() == 1) return kids.front();
  auto n = std::make_shared<Node>();
  n->k = K::add;
  n->kids = std::move(kids);
  return Expr(std::move(n));
}

Expr Expr::mul(std::vector<Expr> kids) {
  if (kids.empty()) return integer(1);
  if (kids.size() == 1) return kids.front();
  auto n = std::make_shared<Node>();
  n->k = K::mul;
  n->kids = std::move(kids);
  return Expr(std::move(n));
}

Expr Expr::pow(Expr base, int e) {
  if (e == 1) return base;
  auto n = std::make_shared<Node>();
  n->k = K::pow;
  n->kids.push_back(std::move(base));
  n->ip = e;
  return Expr(std::move(n));
}

Expr Expr::quot(Expr num, Expr den) {
  auto n = std::make_shared<Node>();
  n->k = K::quo;
  n->kids.push_back(std::move(num));
  n->kids.push_back(std::move(den));
  return Expr(std::move(n));
}

Expr Expr::call(Fn1 f, Expr arg) {
  auto n = std::make_shared<Node>();
  n->k = K::call;
  n->kids.push_back(std::move(arg));
  n->f = f;
  return Expr(std::move(n));
}

Expr::K Expr::kind() const { return n_->k; }
const Rational& Expr::cst() const { return n_->c; }
const Sym& Expr::sym() const { return n_->s; }
const std::vector<Expr>& Expr::kids() const { return n_->kids; }
int Expr::ipow() const { return n_->ip; }
Fn1 Expr::fn() const { return n_->f; }

bool Expr::is_literal_zero() const { return n_->k == K::cst && n_->c == 0; }
bool Expr::is_literal_one() const { return n_->k == K::cst && n_->c == 1; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_literal_zero()) return b;
  if (b.is_literal_zero()) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.cst() + b.cst());
  return Expr::add({a, b});
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.cst());
  return Expr::mul({Expr::integer(-1), a});
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_literal_zero()) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.cst() - b.cst());
  return a + (-b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_literal_zero() || b.is_literal_zero()) return Expr();
  if (a.is_literal_one()) return b;
  if (b.is_literal_one()) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.cst() * b.cst());
  return Expr::mul({a, b});
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_literal_one()) return a;
  if (a.is_literal_zero() && !b.is_literal_zero()) return a;
  return Expr::quot(a, b);
}

Expr ex_int(long long v) { return Expr::integer(v); }
Expr ex_rat(long long num, long long den) { return Expr::constant(Rational(num, den)); }
Expr ex_sym(const Sym& s) { return Expr::symbol(s); }
Expr ex_param(const std::string& name) { return Expr::symbol(Sym::param(name)); }
Expr ex_fn(const std::string& name, int order) { return Expr::symbol(Sym::fn(name, order)); }
Expr ex_jet(int dx, int dt) { return Expr::symbol(Sym::jet(dx, dt)); }

// ---------------------------------------------------------------------------
// Printing. Parenthesization by precedence: add(1) < mul/quo(2) < unary(3) <
// pow(4) < atom(5).
// ---------------------------------------------------------------------------

namespace {

std::string rat_str(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

void print(const Expr& e, std::ostream& os, int parent_prec);

// True when a product starts with a bare -1 constant we can fold into a sign.
bool negated_product(const Expr& e, Expr* rest) {
  if (e.kind() != K::mul) return false;
  const auto& ks = e.kids();
  if (ks.front().kind() == K::cst && ks.front().cst() == -1 && ks.size() >= 2) {
    if (ks.size() == 2)
      *rest = ks[1];
    else
      *rest = Expr::mul(std::vector<Expr>(ks.begin() + 1, ks.end()));
    return true;
  }
  return false;
}

void print(const Expr& e, std::ostream& os, int parent_prec) {
  switch (e.kind()) {
    case K::cst: {
      const bool neg = e.cst() < 0;
      const bool frac = denominator(e.cst()) != 1;
      int prec = neg ? 3 : (frac ? 2 : 5);
      if (prec < parent_prec) {
        os << "(" << rat_str(e.cst()) << ")";
      } else {
        os << rat_str(e.cst());
      }
      break;
    }
    case K::sym:
      os << e.sym().str();
      if (e.sym().kind == SymKind::fn) os << "(z)";
      break;
    case K::add: {
      const bool par = parent_prec > 1;
      if (par) os << "(";
      bool first = true;
      for (const auto& k : e.kids()) {
        Expr rest;
        if (!first && k.kind() == K::cst && k.cst() < 0) {
          os << " - " << rat_str(-k.cst());
        } else if (!first && negated_product(k, &rest)) {
          os << " - ";
          print(rest, os, 2);
        } else {
          if (!first) os << " + ";
          print(k, os, first ? 1 : 2);
        }
        first = false;
      }
      if (par) os << ")";
      break;
    }
    case K::mul: {
      Expr rest;
      if (negated_product(e, &rest)) {
        const bool par = parent_prec > 2;
        if (par) os << "(";
        os << "-";
        print(rest, os, 3);
        if (par) os << ")";
        break;
      }
      const bool par = parent_prec > 2;
      if (par) os << "(";
      bool first = true;
      for (const auto& k : e.kids()) {
        if (!first) os << "*";
        print(k, os, 3);
        first = false;
      }
      if (par) os << ")";
      break;
    }
    case K::quo: {
      const bool par = parent_prec > 2;
      if (par) os << "(";
      print(e.kids()[0], os, 3);
      os << "/";
      print(e.kids()[1], os, 4);
      if (par) os << ")";
      break;
    }
    case K::pow: {
      const bool par = parent_prec > 4;
      if (par) os << "(";
      print(e.kids()[0], os, 5);
      os << "^";
      if (e.ipow() < 0)
        os << "(" << e.ipow() << ")";
      else
        os << e.ipow();
      if (par) os << ")";
      break;
    }
    case K::call: {
      os << fn1_name(e.fn()) << "(";
      print(e.kids()[0], os, 1);
      os << ")";
      break;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(e, os, 1);
  return os.str();
}

// ---------------------------------------------------------------------------
// Generic derivation engine. carrier(s) gives the derivative of the bare
// symbol s; everything else follows by linearity, Leibniz, and chain rules.
// ---------------------------------------------------------------------------

namespace {

Expr derive(const Expr& e, const std::function<Expr(const Sym&)>& carrier) {
  switch (e.kind()) {
    case K::cst:
      return Expr();
    case K::sym:
      return carrier(e.sym());
    case K::add: {
      std::vector<Expr> out;
      for (const auto& k : e.kids()) {
        Expr d = derive(k, carrier);
        if (!d.is_literal_zero()) out.push_back(std::move(d));
      }
      return Expr::add(std::move(out));
    }
    case K::mul: {
      std::vector<Expr> terms;
      const auto& ks = e.kids();
      for (size_t i = 0; i < ks.size(); ++i) {
        Expr d = derive(ks[i], carrier);
        if (d.is_literal_zero()) continue;
        std::vector<Expr> factors;
        for (size_t j = 0; j < ks.size(); ++j) factors.push_back(j == i ? d : ks[j]);
        terms.push_back(Expr::mul(std::move(factors)));
      }
      return Expr::add(std::move(terms));
    }
    case K::pow: {
      Expr d = derive(e.kids()[0], carrier);
      if (d.is_literal_zero()) return Expr();
      return Expr::integer(e.ipow()) * Expr::pow(e.kids()[0], e.ipow() - 1) * d;
    }
    case K::quo: {
      const Expr& a = e.kids()[0];
      const Expr& b = e.kids()[1];
      Expr da = derive(a, carrier);
      Expr db = derive(b, carrier);
      if (db.is_literal_zero()) return da / b;
      return (da * b - a * db) / Expr::pow(b, 2);
    }
    case K::call: {
      const Expr& u = e.kids()[0];
      Expr du = derive(u, carrier);
      if (du.is_literal_zero()) return Expr();
      switch (e.fn()) {
        case Fn1::sin: return Expr::call(Fn1::cos, u) * du;
        case Fn1::cos: return -(Expr::call(Fn1::sin, u) * du);
        case Fn1::exp: return e * du;
        case Fn1::ln: return du / u;
        case Fn1::sqrt: return du / (Expr::integer(2) * e);
        case Fn1::atan: return du / (Expr::integer(1) + Expr::pow(u, 2));
        case Fn1::abs:
          raise(Errc::domain_error,
                "abs(.) has no symbolic derivative; replace it via a sign assumption first");
      }
      return Expr();
    }
  }
  return Expr();
}

}  // namespace

Expr diff(const Expr& e, const Sym& v) {
  return derive(e, [&](const Sym& s) -> Expr {
    if (s == v) return Expr::integer(1);
    if (s.kind == SymKind::fn && v.is_z()) return Expr::symbol(Sym::fn(s.name, s.order + 1));
    return Expr();
  });
}

Expr derive_with(const Expr& e, const std::function<Expr(const Sym&)>& carrier) {
  return derive(e, carrier);
}

// ---------------------------------------------------------------------------
// Substitution and traversal
// ---------------------------------------------------------------------------

Expr substitute(const Expr& e, const std::map<Sym, Expr>& repl) {
  switch (e.kind()) {
    case K::cst:
      return e;
    case K::sym: {
      auto it = repl.find(e.sym());
      return it == repl.end() ? e : it->second;
    }
    case K::add:
    case K::mul: {
      std::vector<Expr> out;
      out.reserve(e.kids().size());
      for (const auto& k : e.kids()) out.push_back(substitute(k, repl));
      return e.kind() == K::add ? Expr::add(std::move(out)) : Expr::mul(std::move(out));
    }
    case K::pow:
      return Expr::pow(substitute(e.kids()[0], repl), e.ipow());
    case K::quo:
      return Expr::quot(substitute(e.kids()[0], repl), substitute(e.kids()[1], repl));
    case K::call:
      return Expr::call(e.fn(), substitute(e.kids()[0], repl));
  }
  return e;
}

Expr instantiate_fn(const Expr& e, const std::string& name, const Expr& value) {
  std::set<Sym> syms = free_symbols(e);
  std::map<Sym, Expr> repl;
  std::map<int, Expr> derivs;  // order -> d^k/dz^k value
  derivs[0] = value;
  for (const Sym& s : syms) {
    if (s.kind != SymKind::fn || s.name != name) continue;
    for (int k = 1; k <= s.order; ++k) {
      if (!derivs.count(k)) derivs[k] = diff(derivs[k - 1], kZ);
    }
    repl[s] = derivs[s.order];
  }
  return repl.empty() ? e : substitute(e, repl);
}

void collect_symbols(const Expr& e, std::set<Sym>& out) {
  switch (e.kind()) {
    case K::cst:
      return;
    case K::sym:
      out.insert(e.sym());
      return;
    default:
      for (const auto& k : e.kids()) collect_symbols(k, out);
  }
}

std::set<Sym> free_symbols(const Expr& e) {
  std::set<Sym> out;
  collect_symbols(e, out);
  return out;
}

int max_jet_order(const Expr& e) {
  int m = 0;
  std::set<Sym> syms = free_symbols(e);
  for (const auto& s : syms)
    if (s.is_jet()) m = std::max(m, s.jet_order());
  return m;
}

bool depends_on(const Expr& e, const Sym& v) {
  std::set<Sym> syms = free_symbols(e);
  return syms.count(v) > 0;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

template <class T>
T eval_impl(const Expr& e, const Binding& b, double den_floor) {
  switch (e.kind()) {
    case K::cst:
      return e.cst().template convert_to<T>();
    case K::sym: {
      auto v = b.get(e.sym());
      if (!v) raise(Errc::unbound_variable, "unbound variable: " + e.sym().str());
      return static_cast<T>(*v);
    }
    case K::add: {
      T acc = 0;
      for (const auto& k : e.kids()) acc += eval_impl<T>(k, b, den_floor);
      return acc;
    }
    case K::mul: {
      T acc = 1;
      for (const auto& k : e.kids()) acc *= eval_impl<T>(k, b, den_floor);
      return acc;
    }
    case K::pow: {
      T base = eval_impl<T>(e.kids()[0], b, den_floor);
      int p = e.ipow();
      if (p < 0) {
        if (std::abs(static_cast<double>(base)) <= den_floor)
          raise(Errc::singular_point, "power base below singularity threshold");
        return T(1) / eval_impl<T>(Expr::pow(e.kids()[0], -p), b, den_floor);
      }
      T acc = 1;
      for (int i = 0; i < p; ++i) acc *= base;
      return acc;
    }
    case K::quo: {
      T num = eval_impl<T>(e.kids()[0], b, den_floor);
      T den = eval_impl<T>(e.kids()[1], b, den_floor);
      double scale = std::max(1.0, std::abs(static_cast<double>(num)));
      if (std::abs(static_cast<double>(den)) <= den_floor * scale)
        raise(Errc::singular_point, "denominator below singularity threshold");
      return num / den;
    }
    case K::call: {
      T u = eval_impl<T>(e.kids()[0], b, den_floor);
      switch (e.fn()) {
        case Fn1::sin: return std::sin(u);
        case Fn1::cos: return std::cos(u);
        case Fn1::exp: return std::exp(u);
        case Fn1::ln:
          if (u <= 0) raise(Errc::domain_error, "ln argument must be positive");
          return std::log(u);
        case Fn1::sqrt:
          if (u < 0) raise(Errc::domain_error, "sqrt argument must be nonnegative");
          return std::sqrt(u);
        case Fn1::abs: return std::abs(u);
        case Fn1::atan: return std::atan(u);
      }
      return 0;
    }
  }
  return 0;
}

constexpr double kEvalDenFloor = 1e-8;

}  // namespace

double eval(const Expr& e, const Binding& b) { return eval_impl<double>(e, b, kEvalDenFloor); }

long double eval_ld(const Expr& e, const Binding& b) {
  return eval_impl<long double>(e, b, kEvalDenFloor);
}

namespace {

void accumulate_terms(const Expr& e, const Binding& b, TermEval& out) {
  if (e.kind() == K::add) {
    for (const auto& k : e.kids()) accumulate_terms(k, b, out);
    return;
  }
  double t = eval_impl<double>(e, b, kEvalDenFloor);
  out.value += t;
  out.max_term = std::max(out.max_term, std::abs(t));
}

}  // namespace

TermEval eval_terms(const Expr& e, const Binding& b) {
  TermEval out;
  accumulate_terms(e, b, out);
  return out;
}

GuardedEval eval_guarded(const Expr& e, const Binding& b, double den_floor) {
  GuardedEval out;
  try {
    out.value = eval_impl<double>(e, b, den_floor);
    if (!std::isfinite(*out.value)) {
      out.value.reset();
      out.err = Errc::domain_error;
    }
  } catch (const Error& err) {
    out.err = err.code();
  }
  return out;
}

}  // namespace pss
