#pragma once

#include "expr/expr.hpp"

namespace pss {

// Total derivative operators on the jet space. Jets step up one order,
// abstract functions of z pick up a z_x (resp. z_t) factor, parameters die.
Expr total_dx(const Expr& e);
Expr total_dt(const Expr& e);

// A distinguished relation "solved = rhs" together with all its prolongations
// D_x^i D_t^j (solved) for i, j >= 0.
struct EvolutionRelation {
  Sym solved = kZtt;
  Expr rhs;
  int max_order = 6;

  EvolutionRelation() = default;
  EvolutionRelation(const Sym& solved_coord, Expr rhs_expr, int order_bound = 6);

  bool in_solved_family(const Sym& s) const {
    return s.is_jet() && s.dx >= solved.dx && s.dt >= solved.dt;
  }
};

// Eliminates the solved coordinate and every prolongation of it from e; the
// result depends on free jet coordinates only. Throws OrderOverflow when a
// required prolongation exceeds the relation's order bound.
Expr on_shell_reduce(const Expr& e, const EvolutionRelation& rel);

// Extends a binding of the free coordinates with consistent values for every
// solved-family coordinate appearing in e.
Binding complete_on_shell(const Expr& e, const EvolutionRelation& rel, Binding b);

}  // namespace pss
