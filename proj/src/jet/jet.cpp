#include "jet/jet.hpp"

#include <utility>

namespace pss {

Expr total_dx(const Expr& e) {
  return derive_with(e, [](const Sym& s) -> Expr {
    switch (s.kind) {
      case SymKind::jet: return ex_jet(s.dx + 1, s.dt);
      case SymKind::param: return Expr();
      case SymKind::fn: return ex_fn(s.name, s.order + 1) * ex_jet(1, 0);
    }
    return Expr();
  });
}

Expr total_dt(const Expr& e) {
  return derive_with(e, [](const Sym& s) -> Expr {
    switch (s.kind) {
      case SymKind::jet: return ex_jet(s.dx, s.dt + 1);
      case SymKind::param: return Expr();
      case SymKind::fn: return ex_fn(s.name, s.order + 1) * ex_jet(0, 1);
    }
    return Expr();
  });
}

EvolutionRelation::EvolutionRelation(const Sym& solved_coord, Expr rhs_expr, int order_bound)
    : solved(solved_coord), rhs(std::move(rhs_expr)), max_order(order_bound) {
  if (!solved.is_jet() || solved.jet_order() == 0)
    raise(Errc::invalid_spec, "solved coordinate must be a derivative jet coordinate");
  for (const Sym& s : free_symbols(rhs)) {
    if (in_solved_family(s))
      raise(Errc::invalid_spec,
            "relation right-hand side contains the solved coordinate " + s.str());
  }
  if (max_jet_order(rhs) > max_order)
    raise(Errc::order_overflow, "relation right-hand side exceeds the jet order bound");
}

namespace {

struct Reducer {
  const EvolutionRelation& rel;
  std::map<std::pair<int, int>, Expr> memo;
  std::set<std::pair<int, int>> in_progress;

  Expr replacement(int dx, int dt) {
    if (dx + dt > rel.max_order)
      raise(Errc::order_overflow, "prolongation z_{x^" + std::to_string(dx) + " t^" +
                                      std::to_string(dt) + "} exceeds the jet order bound " +
                                      std::to_string(rel.max_order));
    auto key = std::make_pair(dx, dt);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    if (!in_progress.insert(key).second)
      raise(Errc::invalid_spec, "internal: cyclic prolongation request");
    Expr r;
    if (dx == rel.solved.dx && dt == rel.solved.dt) {
      r = reduce(rel.rhs);
    } else if (dt > rel.solved.dt) {
      r = reduce(total_dt(replacement(dx, dt - 1)));
    } else {
      r = reduce(total_dx(replacement(dx - 1, dt)));
    }
    in_progress.erase(key);
    memo.emplace(key, r);
    return r;
  }

  Expr reduce(const Expr& e) {
    std::map<Sym, Expr> repl;
    for (const Sym& s : free_symbols(e)) {
      if (rel.in_solved_family(s)) repl.emplace(s, replacement(s.dx, s.dt));
    }
    return repl.empty() ? e : substitute(e, repl);
  }
};

}  // namespace

Expr on_shell_reduce(const Expr& e, const EvolutionRelation& rel) {
  Reducer r{rel, {}, {}};
  return r.reduce(e);
}

Binding complete_on_shell(const Expr& e, const EvolutionRelation& rel, Binding b) {
  Reducer r{rel, {}, {}};
  for (const Sym& s : free_symbols(e)) {
    if (rel.in_solved_family(s)) b.set(s, eval(r.replacement(s.dx, s.dt), b));
  }
  return b;
}

}  // namespace pss
