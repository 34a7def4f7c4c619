#include "expr/ratfn.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <vector>

namespace pss::rf {

// ---------------------------------------------------------------------------
// Atom registry
// ---------------------------------------------------------------------------

namespace {

class AtomTable {
public:
  static AtomTable& instance() {
    static AtomTable t;
    return t;
  }

  std::string intern(std::string key, AtomEntry entry, std::optional<Poly> parg) {
    {
      std::shared_lock rl(m_);
      if (table_.count(key)) return key;
    }
    std::unique_lock wl(m_);
    if (!table_.count(key)) {
      table_.emplace(key, std::move(entry));
      if (parg) poly_args_.emplace(key, std::move(*parg));
    }
    return key;
  }

  const AtomEntry& lookup(const std::string& key) const {
    std::shared_lock rl(m_);
    auto it = table_.find(key);
    if (it == table_.end()) raise(Errc::invalid_spec, "unknown atom key: " + key);
    return it->second;
  }

  const Poly* poly_arg(const std::string& key) const {
    std::shared_lock rl(m_);
    auto it = poly_args_.find(key);
    return it == poly_args_.end() ? nullptr : &it->second;
  }

private:
  mutable std::shared_mutex m_;
  std::map<std::string, AtomEntry> table_;
  std::map<std::string, Poly> poly_args_;
};

const std::string kDeltaKey = "delta";

}  // namespace

std::string intern_sym_atom(const Sym& s) {
  AtomEntry e;
  e.is_call = false;
  e.sym = s;
  return AtomTable::instance().intern(s.str(), std::move(e), std::nullopt);
}

std::string intern_call_atom(Fn1 f, const Expr& canonical_arg, std::optional<Poly> poly_arg) {
  AtomEntry e;
  e.is_call = true;
  e.f = f;
  e.arg = canonical_arg;
  e.has_poly_arg = poly_arg.has_value();
  std::string key = to_string(Expr::call(f, canonical_arg));
  return AtomTable::instance().intern(std::move(key), std::move(e), std::move(poly_arg));
}

const AtomEntry& atom_entry(const std::string& key) { return AtomTable::instance().lookup(key); }

const Poly* atom_poly_arg(const std::string& key) { return AtomTable::instance().poly_arg(key); }

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

namespace {

int mono_degree(const Mono& m) {
  int d = 0;
  for (const auto& [k, e] : m) d += e;
  return d;
}

}  // namespace

bool MonoOrder::operator()(const Mono& a, const Mono& b) const {
  int da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da < db;
  // lex tiebreak over variables in descending key order (jets outrank
  // parameters); the first differing exponent decides. This is a proper
  // monomial order, which exact division relies on.
  auto ia = a.rbegin(), ib = b.rbegin();
  while (ia != a.rend() || ib != b.rend()) {
    if (ia == a.rend()) return true;
    if (ib == b.rend()) return false;
    if (ia->first > ib->first) return false;
    if (ib->first > ia->first) return true;
    if (ia->second != ib->second) return ia->second < ib->second;
    ++ia;
    ++ib;
  }
  return false;
}

Poly Poly::constant(const Rational& c) {
  Poly p;
  if (c != 0) p.t.emplace(Mono{}, c);
  return p;
}

Poly Poly::atom(const std::string& key) {
  Poly p;
  p.t.emplace(Mono{{key, 1}}, Rational(1));
  return p;
}

Rational Poly::constant_value() const {
  if (t.empty()) return Rational(0);
  return t.begin()->second;
}

bool Poly::depends_on(const std::string& key) const {
  for (const auto& [m, c] : t)
    if (m.count(key)) return true;
  return false;
}

std::set<std::string> Poly::atoms() const {
  std::set<std::string> out;
  for (const auto& [m, c] : t)
    for (const auto& [k, e] : m) out.insert(k);
  return out;
}

int Poly::deg(const std::string& key) const {
  int d = 0;
  for (const auto& [m, c] : t) {
    auto it = m.find(key);
    if (it != m.end()) d = std::max(d, it->second);
  }
  return d;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.t) {
    auto it = t.find(m);
    if (it == t.end()) {
      t.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) t.erase(it);
    }
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.t) {
    auto it = t.find(m);
    if (it == t.end()) {
      t.emplace(m, -c);
    } else {
      it->second -= c;
      if (it->second == 0) t.erase(it);
    }
  }
  return *this;
}

Poly Poly::neg() const {
  Poly out;
  for (const auto& [m, c] : t) out.t.emplace(m, -c);
  return out;
}

namespace {

// Multiply two monomials and apply the ring's rewrite rules. The reduced
// residual monomial is returned in `out`; extracted polynomial factors (from
// even powers of sqrt/abs atoms with polynomial arguments) are accumulated
// into `extra` (nullptr means no extraction happened, i.e. factor 1).
void mono_mul(const Mono& a, const Mono& b, Mono& out, std::optional<Poly>& extra) {
  out = a;
  for (const auto& [k, e] : b) out[k] += e;
  // delta^2 -> 1
  auto dit = out.find(kDeltaKey);
  if (dit != out.end()) {
    dit->second %= 2;
    if (dit->second == 0) out.erase(dit);
  }
  // even radical powers
  for (auto it = out.begin(); it != out.end();) {
    if (it->second >= 2) {
      const AtomEntry& ae = atom_entry(it->first);
      if (ae.is_call && (ae.f == Fn1::sqrt || ae.f == Fn1::abs) && ae.has_poly_arg) {
        const Poly* u = atom_poly_arg(it->first);
        int half = it->second / 2;
        int rem = it->second % 2;
        int upow = (ae.f == Fn1::sqrt) ? half : 2 * half;
        Poly factor = u->pow(upow);
        if (!extra)
          extra = std::move(factor);
        else
          extra = *extra * factor;
        if (rem == 0) {
          it = out.erase(it);
          continue;
        }
        it->second = rem;
      }
    }
    ++it;
  }
}

}  // namespace

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.t) {
    for (const auto& [mb, cb] : b.t) {
      Mono m;
      std::optional<Poly> extra;
      mono_mul(ma, mb, m, extra);
      Rational c = ca * cb;
      if (!extra) {
        auto it = out.t.find(m);
        if (it == out.t.end()) {
          out.t.emplace(std::move(m), std::move(c));
        } else {
          it->second += c;
          if (it->second == 0) out.t.erase(it);
        }
      } else {
        Poly mp;
        mp.t.emplace(std::move(m), std::move(c));
        out += mp * (*extra);
      }
    }
  }
  return out;
}

Poly Poly::pow(int k) const {
  Poly out = Poly::constant(1);
  for (int i = 0; i < k; ++i) out = out * (*this);
  return out;
}

// ---------------------------------------------------------------------------
// Content, primitive parts
// ---------------------------------------------------------------------------

Poly scale(const Poly& p, const Rational& c) {
  Poly out;
  if (c == 0) return out;
  for (const auto& [m, q] : p.t) out.t.emplace(m, q * c);
  return out;
}

std::pair<Poly, Rational> primitive_int(const Poly& p) {
  if (p.is_zero()) raise(Errc::invalid_spec, "primitive_int of zero polynomial");
  BigInt den_lcm = 1;
  for (const auto& [m, c] : p.t) den_lcm = lcm(den_lcm, denominator(c));
  BigInt num_gcd = 0;
  for (const auto& [m, c] : p.t) num_gcd = gcd(num_gcd, numerator(c) * (den_lcm / denominator(c)));
  // sign: positive leading (grlex-largest) coefficient
  Rational lead = p.t.rbegin()->second;
  Rational s = Rational(num_gcd, den_lcm) * (lead < 0 ? -1 : 1);
  return {scale(p, Rational(1) / s), s};
}

// ---------------------------------------------------------------------------
// Exact division
// ---------------------------------------------------------------------------

namespace {

bool mono_divides(const Mono& d, const Mono& m) {
  for (const auto& [k, e] : d) {
    auto it = m.find(k);
    if (it == m.end() || it->second < e) return false;
  }
  return true;
}

Mono mono_quotient(const Mono& m, const Mono& d) {
  Mono q = m;
  for (const auto& [k, e] : d) {
    auto it = q.find(k);
    it->second -= e;
    if (it->second == 0) q.erase(it);
  }
  return q;
}

constexpr int kDivideStepBudget = 20000;

}  // namespace

std::optional<Poly> try_divide(const Poly& p, const Poly& d) {
  if (d.is_zero()) return std::nullopt;
  Poly r = p;
  Poly q;
  const auto& ltd = *d.t.rbegin();
  int steps = 0;
  while (!r.is_zero()) {
    if (++steps > kDivideStepBudget) return std::nullopt;
    const auto& ltr = *r.t.rbegin();
    if (!mono_divides(ltd.first, ltr.first)) return std::nullopt;
    Mono qm = mono_quotient(ltr.first, ltd.first);
    Rational qc = ltr.second / ltd.second;
    Poly term;
    term.t.emplace(std::move(qm), std::move(qc));
    q += term;
    r -= term * d;
  }
  return q;
}

// ---------------------------------------------------------------------------
// GCD: primitive PRS with verification
// ---------------------------------------------------------------------------

namespace {

// univariate view in one atom: degree -> coefficient polynomial (atom-free)
using UPoly = std::map<int, Poly>;

UPoly decompose(const Poly& p, const std::string& x) {
  UPoly u;
  for (const auto& [m, c] : p.t) {
    Mono stripped = m;
    int e = 0;
    auto it = stripped.find(x);
    if (it != stripped.end()) {
      e = it->second;
      stripped.erase(it);
    }
    Poly term;
    term.t.emplace(std::move(stripped), c);
    u[e] += term;
    if (u[e].is_zero()) u.erase(e);
  }
  return u;
}

Poly recompose(const UPoly& u, const std::string& x) {
  Poly out;
  for (const auto& [e, c] : u) {
    for (const auto& [m, q] : c.t) {
      Mono mm = m;
      if (e > 0) mm[x] += e;
      Poly term;
      term.t.emplace(std::move(mm), q);
      out += term;
    }
  }
  return out;
}

int udeg(const UPoly& u) { return u.empty() ? -1 : u.rbegin()->first; }

void unorm(UPoly& u) {
  for (auto it = u.begin(); it != u.end();)
    it = it->second.is_zero() ? u.erase(it) : std::next(it);
}

Poly ucontent(const UPoly& u) {
  Poly g;
  for (const auto& [e, c] : u) g = gcd_primitive(g, c);
  return g;
}

UPoly udiv_coeffs(const UPoly& u, const Poly& d) {
  UPoly out;
  for (const auto& [e, c] : u) {
    auto q = try_divide(c, d);
    if (!q) raise(Errc::invalid_spec, "internal: content division failed");
    out[e] = std::move(*q);
  }
  unorm(out);
  return out;
}

// pseudo-remainder of a by b in the main variable
UPoly uprem(UPoly a, const UPoly& b) {
  int db = udeg(b);
  const Poly& lb = b.rbegin()->second;
  while (udeg(a) >= db) {
    int da = udeg(a);
    Poly la = a.rbegin()->second;
    UPoly next;
    for (const auto& [e, c] : a) next[e] = lb * c;
    for (const auto& [e, c] : b) {
      int sh = e + da - db;
      auto it = next.find(sh);
      if (it == next.end())
        next[sh] = (la * c).neg();
      else
        next[sh] -= la * c;
    }
    unorm(next);  // the degree-da term cancels exactly
    a = std::move(next);
  }
  return a;
}

}  // namespace

namespace {

// ---- heuristic gcd (integer evaluation / reconstruction), verified later ----

BigInt max_abs_coeff(const Poly& p) {
  BigInt m = 0;
  for (const auto& [mono, c] : p.t) {
    BigInt a = abs(numerator(c));
    if (a > m) m = a;
  }
  return m;
}

// substitute an integer for one atom
Poly eval_atom(const Poly& p, const std::string& x, const BigInt& xi) {
  Poly out;
  for (const auto& [m, c] : p.t) {
    Mono mm = m;
    int e = 0;
    auto it = mm.find(x);
    if (it != mm.end()) {
      e = it->second;
      mm.erase(it);
    }
    BigInt scale = 1;
    for (int i = 0; i < e; ++i) scale *= xi;
    Poly term;
    term.t.emplace(std::move(mm), c * Rational(scale));
    out += term;
  }
  return out;
}

// coefficient-wise symmetric remainder mod xi
Poly smod(const Poly& p, const BigInt& xi) {
  Poly out;
  BigInt half = xi / 2;
  for (const auto& [m, c] : p.t) {
    BigInt n = numerator(c);  // integer polynomials only
    BigInt r = n % xi;
    if (r < 0) r += xi;
    if (r > half) r -= xi;
    if (r == 0) continue;
    Poly term;
    term.t.emplace(m, Rational(r));
    out += term;
  }
  return out;
}

std::optional<Poly> divide_scalar_exact(const Poly& p, const BigInt& xi) {
  Poly out;
  for (const auto& [m, c] : p.t) {
    BigInt n = numerator(c);
    if (n % xi != 0) return std::nullopt;
    Poly term;
    term.t.emplace(m, Rational(n / xi));
    out += term;
  }
  return out;
}

BigInt int_content(const Poly& p) {
  BigInt g = 0;
  for (const auto& [m, c] : p.t) g = gcd(g, abs(numerator(c)));
  return g;
}

// Char-Geddes-Gonnet heuristic gcd for integer polynomials.
std::optional<Poly> gcd_heuristic(const Poly& a, const Poly& b, int depth) {
  if (depth > 12) return std::nullopt;
  if (a.is_constant() || b.is_constant())
    return Poly::constant(Rational(gcd(int_content(a), int_content(b))));
  std::set<std::string> aa = a.atoms(), bb = b.atoms();
  std::vector<std::string> common;
  for (const auto& k : aa)
    if (bb.count(k)) common.push_back(k);
  if (common.empty()) return Poly::constant(1);
  const std::string& x = common.front();
  int degcap = std::min(a.deg(x), b.deg(x));

  BigInt na = max_abs_coeff(a), nb = max_abs_coeff(b);
  BigInt xi = 2 * (na < nb ? na : nb) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Poly ax = eval_atom(a, x, xi);
    Poly bx = eval_atom(b, x, xi);
    if (ax.is_zero() || bx.is_zero()) {
      xi = xi * 2 + 1;
      continue;
    }
    std::optional<Poly> gamma;
    if (ax.is_constant() && bx.is_constant()) {
      gamma = Poly::constant(Rational(
          gcd(abs(numerator(ax.constant_value())), abs(numerator(bx.constant_value())))));
    } else {
      // recurse on primitive parts, re-attach the integer content gcd
      auto [pa, sa] = primitive_int(ax);
      auto [pb, sb] = primitive_int(bx);
      gamma = gcd_heuristic(pa, pb, depth + 1);
      if (gamma)
        *gamma = scale(*gamma, Rational(gcd(abs(numerator(sa)), abs(numerator(sb)))));
    }
    if (!gamma) {
      xi = xi * 73 / 32 + 1;
      continue;
    }
    // reconstruct digits of gamma in base xi
    Poly g;
    Poly rem = *gamma;
    int i = 0;
    bool ok = true;
    while (!rem.is_zero()) {
      if (i > degcap) {
        ok = false;
        break;
      }
      Poly ci = smod(rem, xi);
      if (!ci.is_zero()) {
        Poly shifted;
        for (const auto& [m, c] : ci.t) {
          Mono mm = m;
          if (i > 0) mm[x] += i;
          Poly term;
          term.t.emplace(std::move(mm), c);
          shifted += term;
        }
        g += shifted;
      }
      auto next = divide_scalar_exact(rem - ci, xi);
      if (!next) {
        ok = false;
        break;
      }
      rem = std::move(*next);
      ++i;
    }
    if (ok && !g.is_zero()) {
      g = primitive_int(g).first;
      if (try_divide(a, g) && try_divide(b, g)) return g;
    }
    xi = xi * 73 / 32 + 1;
  }
  return std::nullopt;
}

}  // namespace

Poly gcd_primitive(const Poly& a0, const Poly& b0) {
  if (a0.is_zero() && b0.is_zero()) return Poly::constant(1);
  if (a0.is_zero()) return primitive_int(b0).first;
  if (b0.is_zero()) return primitive_int(a0).first;
  Poly a = primitive_int(a0).first;
  Poly b = primitive_int(b0).first;
  if (a.is_constant() || b.is_constant()) return Poly::constant(1);

  if (auto g = gcd_heuristic(a, b, 0)) {
    if (g->is_constant()) return Poly::constant(1);
    return primitive_int(*g).first;
  }

  std::set<std::string> aa = a.atoms(), bb = b.atoms();
  std::vector<std::string> common;
  for (const auto& k : aa)
    if (bb.count(k)) common.push_back(k);
  if (common.empty()) return Poly::constant(1);

  std::string x = common.front();
  int best = std::min(a.deg(x), b.deg(x));
  for (const auto& k : common) {
    int d = std::min(a.deg(k), b.deg(k));
    if (d < best || (d == best && k < x)) {
      best = d;
      x = k;
    }
  }

  UPoly ua = decompose(a, x), ub = decompose(b, x);
  Poly ca = ucontent(ua), cb = ucontent(ub);
  UPoly pa = udiv_coeffs(ua, ca), pb = udiv_coeffs(ub, cb);
  Poly gc = gcd_primitive(ca, cb);

  if (udeg(pa) < udeg(pb)) std::swap(pa, pb);
  Poly gx;
  while (true) {
    UPoly r = uprem(pa, pb);
    unorm(r);
    if (r.empty()) {
      gx = recompose(pb, x);
      break;
    }
    if (udeg(r) == 0) {
      // a nonzero x-free remainder of primitive inputs means the gcd is 1
      gx = Poly::constant(1);
      break;
    }
    Poly rc = ucontent(r);
    r = udiv_coeffs(r, rc);
    pa = std::move(pb);
    pb = std::move(r);
  }

  Poly g = gc * gx;
  if (g.is_zero()) return Poly::constant(1);
  g = primitive_int(g).first;
  if (g.is_constant()) return Poly::constant(1);
  if (!try_divide(a, g) || !try_divide(b, g)) return Poly::constant(1);
  return g;
}

// ---------------------------------------------------------------------------
// RatFn
// ---------------------------------------------------------------------------

namespace {

// den = a + delta*b with a, b delta-free
void split_delta(const Poly& p, Poly& a, Poly& b) {
  for (const auto& [m, c] : p.t) {
    auto it = m.find(kDeltaKey);
    Poly term;
    if (it == m.end()) {
      term.t.emplace(m, c);
      a += term;
    } else {
      Mono stripped = m;
      stripped.erase(kDeltaKey);
      term.t.emplace(std::move(stripped), c);
      b += term;
    }
  }
}

}  // namespace

void RatFn::canon() {
  if (num.is_zero()) {
    den = Poly::constant(1);
    return;
  }
  if (den.is_zero()) raise(Errc::domain_error, "zero denominator in normalize");

  for (int round = 0; round < 3; ++round) {
    bool changed = false;
    if (!num.is_constant() && !den.is_constant()) {
      Poly g = gcd_primitive(num, den);
      if (!g.is_constant()) {
        auto qn = try_divide(num, g);
        auto qd = try_divide(den, g);
        if (qn && qd) {
          num = std::move(*qn);
          den = std::move(*qd);
          changed = true;
        }
      }
    }
    if (den.depends_on(kDeltaKey)) {
      Poly a, b;
      split_delta(den, a, b);
      Poly dpoly = Poly::atom(intern_sym_atom(Sym::param("delta")));
      if (a.is_zero()) {
        num = num * dpoly;
        den = b;
        changed = true;
      } else if (!b.is_zero()) {
        Poly d2 = a * a - b * b;
        if (!d2.is_zero()) {
          num = num * (a - dpoly * b);
          den = std::move(d2);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  auto [dp, c] = primitive_int(den);
  den = std::move(dp);
  num = scale(num, Rational(1) / c);
}

RatFn operator+(const RatFn& a, const RatFn& b) {
  RatFn out;
  if (a.den == b.den) {
    out.num = a.num + b.num;
    out.den = a.den;
  } else {
    out.num = a.num * b.den + b.num * a.den;
    out.den = a.den * b.den;
  }
  out.canon();
  return out;
}

RatFn operator-(const RatFn& a, const RatFn& b) { return a + b.neg(); }

RatFn operator*(const RatFn& a, const RatFn& b) {
  RatFn out;
  out.num = a.num * b.num;
  out.den = a.den * b.den;
  out.canon();
  return out;
}

RatFn operator/(const RatFn& a, const RatFn& b) {
  if (b.is_zero()) raise(Errc::domain_error, "division by zero in normalize");
  RatFn out;
  out.num = a.num * b.den;
  out.den = a.den * b.num;
  out.canon();
  return out;
}

RatFn RatFn::neg() const {
  RatFn out;
  out.num = num.neg();
  out.den = den;
  return out;
}

RatFn RatFn::pow(int k) const {
  if (k == 0) return RatFn::from_poly(Poly::constant(1));
  RatFn base = *this;
  if (k < 0) {
    if (is_zero()) raise(Errc::domain_error, "zero to a negative power in normalize");
    std::swap(base.num, base.den);
    k = -k;
    base.canon();
  }
  RatFn out;
  out.num = base.num.pow(k);
  out.den = base.den.pow(k);
  out.canon();
  return out;
}

// ---------------------------------------------------------------------------
// Expr <-> RatFn
// ---------------------------------------------------------------------------

namespace {

std::optional<Rational> exact_rational_sqrt(const Rational& c) {
  if (c < 0) return std::nullopt;
  BigInt n = numerator(c), d = denominator(c);
  BigInt sn = sqrt(n), sd = sqrt(d);
  if (sn * sn == n && sd * sd == d) return Rational(sn, sd);
  return std::nullopt;
}

std::optional<Rational> fold_constant_call(Fn1 f, const Rational& c) {
  switch (f) {
    case Fn1::abs:
      return c < 0 ? -c : c;
    case Fn1::sqrt:
      return exact_rational_sqrt(c);
    case Fn1::ln:
      if (c == 1) return Rational(0);
      return std::nullopt;
    case Fn1::exp:
      if (c == 0) return Rational(1);
      return std::nullopt;
    case Fn1::sin:
    case Fn1::atan:
      if (c == 0) return Rational(0);
      return std::nullopt;
    case Fn1::cos:
      if (c == 0) return Rational(1);
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

RatFn to_ratfn(const Expr& e) {
  using K = Expr::K;
  switch (e.kind()) {
    case K::cst:
      return RatFn::from_poly(Poly::constant(e.cst()));
    case K::sym:
      return RatFn::from_poly(Poly::atom(intern_sym_atom(e.sym())));
    case K::add: {
      RatFn acc;
      for (const auto& k : e.kids()) acc = acc + to_ratfn(k);
      return acc;
    }
    case K::mul: {
      RatFn acc = RatFn::from_poly(Poly::constant(1));
      for (const auto& k : e.kids()) acc = acc * to_ratfn(k);
      return acc;
    }
    case K::pow:
      return to_ratfn(e.kids()[0]).pow(e.ipow());
    case K::quo:
      return to_ratfn(e.kids()[0]) / to_ratfn(e.kids()[1]);
    case K::call: {
      RatFn arg = to_ratfn(e.kids()[0]);
      if (arg.is_poly() && arg.num.is_constant()) {
        auto folded = fold_constant_call(e.fn(), arg.num.constant_value());
        if (folded) return RatFn::from_poly(Poly::constant(*folded));
      }
      Expr carg = ratfn_to_expr(arg);
      std::optional<Poly> parg;
      if (arg.is_poly()) parg = arg.num;
      std::string key = intern_call_atom(e.fn(), carg, std::move(parg));
      return RatFn::from_poly(Poly::atom(key));
    }
  }
  return RatFn{};
}

namespace {

Expr atom_to_expr(const std::string& key) {
  const AtomEntry& ae = atom_entry(key);
  if (ae.is_call) return Expr::call(ae.f, ae.arg);
  return Expr::symbol(ae.sym);
}

Expr term_to_expr(const Mono& m, const Rational& c) {
  std::vector<Expr> factors;
  if (c != 1 || m.empty()) factors.push_back(Expr::constant(c));
  for (const auto& [k, e] : m) {
    Expr a = atom_to_expr(k);
    factors.push_back(e == 1 ? a : Expr::pow(a, e));
  }
  return Expr::mul(std::move(factors));
}

}  // namespace

Expr poly_to_expr(const Poly& p) {
  if (p.is_zero()) return Expr();
  std::vector<Expr> terms;
  for (auto it = p.t.rbegin(); it != p.t.rend(); ++it) terms.push_back(term_to_expr(it->first, it->second));
  return Expr::add(std::move(terms));
}

Expr ratfn_to_expr(const RatFn& r) {
  Expr num = poly_to_expr(r.num);
  if (r.den.is_constant() && r.den.constant_value() == 1) return num;
  return Expr::quot(num, poly_to_expr(r.den));
}

}  // namespace pss::rf
