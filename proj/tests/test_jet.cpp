#include <cmath>

#include "doctest.h"
#include "jet/jet.hpp"
#include "support/sampling.hpp"

using namespace pss;

TEST_CASE("total derivatives on basic shapes") {
  CHECK(equal_normalized(total_dx(ex_jet(0, 0)), ex_jet(1, 0)));
  CHECK(equal_normalized(total_dt(ex_jet(1, 0)), ex_jet(1, 1)));

  // D_x(rho(z) z_t) = rho' z_x z_t + rho z_xt
  Expr e = ex_fn("rho") * ex_jet(0, 1);
  Expr want = ex_fn("rho", 1) * ex_jet(1, 0) * ex_jet(0, 1) + ex_fn("rho") * ex_jet(1, 1);
  CHECK(equal_normalized(total_dx(e), want));
}

TEST_CASE("total derivatives commute and obey Leibniz") {
  const char* samples[] = {
      "z*z_x^2 - z_t/(1+z^2)",
      "sin(z)*z_xt + rho'(z)*z_x",
      "(z_x + z_t)^3 - m*z",
  };
  for (const char* s : samples) {
    Expr e = parse_expr(s);
    CHECK(is_zero(total_dx(total_dt(e)) - total_dt(total_dx(e))));
  }
  Expr a = parse_expr("z*z_t");
  Expr b = parse_expr("sin(z) + z_x");
  CHECK(is_zero(total_dx(a * b) - (total_dx(a) * b + a * total_dx(b))));
}

TEST_CASE("on-shell reduction") {
  // generic second-order relation of the classified form
  Expr rhs = parse_expr("A0*z_xx + B0*z_xt + C0");
  EvolutionRelation rel(kZtt, rhs);

  CHECK(equal_normalized(on_shell_reduce(ex_sym(kZtt), rel), rhs));

  // sine-Gordon: sin z - z_xt vanishes on-shell
  EvolutionRelation sg(kZxt, parse_expr("sin(z)"));
  CHECK(is_zero(on_shell_reduce(parse_expr("sin(z) - z_xt"), sg)));

  // z_ttx reduces to the full x-prolongation of the relation
  Expr reduced = on_shell_reduce(ex_sym(Sym::jet(1, 2)), rel);
  Expr manual = on_shell_reduce(total_dx(rhs), rel);
  CHECK(is_zero(reduced - manual));
  for (const Sym& s : free_symbols(reduced)) CHECK(!rel.in_solved_family(s));
}

TEST_CASE("on-shell reduction agrees with on-shell evaluation") {
  Expr rhs = parse_expr("2/(z^2+1)*z_xt - 2*z/(z^2+1)*(z_t^2+1)");
  EvolutionRelation rel(kZtt, rhs);
  Expr e = parse_expr("z_tt*z_x + z_xtt - sin(z_tt)");

  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    Binding b;
    for (const Sym& v : {kZ, kZx, kZt, kZxx, kZxt, Sym::jet(2, 1), Sym::jet(3, 0)})
      b.set(v, rng.uniform(-1.5, 1.5));
    Binding full = complete_on_shell(e, rel, b);
    double direct = eval(e, full);
    double red = eval(on_shell_reduce(e, rel), b);
    CHECK(std::abs(direct - red) <= 1e-9 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("reduction errors") {
  EvolutionRelation rel(kZtt, parse_expr("z_xx"), 4);
  // z_{x^3 t^2} needs a prolongation beyond order 4
  CHECK_THROWS_AS(on_shell_reduce(ex_sym(Sym::jet(3, 2)), rel), Error);
  // rhs may not contain the solved family
  CHECK_THROWS_AS(EvolutionRelation(kZtt, parse_expr("z_tt + 1")), Error);
}

TEST_CASE("third-order relation (KdV shape) reduces cleanly") {
  EvolutionRelation kdv(kZt, parse_expr("z_xxx + 6*z*z_x"));
  Expr e = parse_expr("z_xt - 6*z_x^2");  // D_x(z_t) - 6 z_x^2 on-shell
  Expr r = on_shell_reduce(e, kdv);
  CHECK(equal_normalized(r, parse_expr("z_xxxx + 6*z*z_xx")));
}
