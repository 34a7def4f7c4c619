#include "support/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace pss {

Assumption parse_assumption(const std::string& s) {
  Assumption a;
  a.text = s;
  auto pos = s.find("!=");
  if (pos != std::string::npos) {
    a.kind = AssumeKind::nonzero;
    a.expr = parse_expr(s.substr(0, pos));
    Expr rhs = parse_expr(s.substr(pos + 2));
    if (!rhs.is_literal_zero()) a.expr = a.expr - rhs;
    return a;
  }
  pos = s.find('>');
  if (pos != std::string::npos) {
    a.kind = AssumeKind::positive;
    a.expr = parse_expr(s.substr(0, pos));
    Expr rhs = parse_expr(s.substr(pos + 1));
    if (!rhs.is_literal_zero()) a.expr = a.expr - rhs;
    return a;
  }
  raise(Errc::parse_error, "assumption must look like '<expr> > 0' or '<expr> != 0': " + s);
}

std::string assumption_text(const Assumption& a) {
  if (!a.text.empty()) return a.text;
  return to_string(a.expr) + (a.kind == AssumeKind::positive ? " > 0" : " != 0");
}

Binding sample_admissible(const std::vector<Sym>& vars, const std::vector<Expr>& guards,
                          const std::vector<Assumption>& assumptions, Rng& rng,
                          const Binding& base, const SamplerOptions& opt) {
  for (int attempt = 0; attempt < opt.max_tries; ++attempt) {
    Binding b = base;
    for (const Sym& v : vars) b.set(v, rng.uniform(opt.lo, opt.hi));
    bool ok = true;
    for (const Assumption& a : assumptions) {
      GuardedEval g = eval_guarded(a.expr, b, opt.den_floor);
      if (!g.value) {
        ok = false;
        break;
      }
      if (a.kind == AssumeKind::positive ? (*g.value <= opt.margin)
                                         : (std::abs(*g.value) <= opt.margin)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (const Expr& e : guards) {
      if (!eval_guarded(e, b, opt.den_floor).value) {
        ok = false;
        break;
      }
    }
    if (ok) return b;
  }
  raise(Errc::no_admissible_point,
        "no admissible sample found in " + std::to_string(opt.max_tries) + " attempts");
}

std::vector<Sym> jet_vars_of(const std::vector<Expr>& exprs) {
  std::set<Sym> all;
  for (const Expr& e : exprs) collect_symbols(e, all);
  std::vector<Sym> out;
  for (const Sym& s : all)
    if (s.is_jet()) out.push_back(s);
  return out;
}

}  // namespace pss
