#include <cmath>
#include <random>

#include "doctest.h"
#include "expr/expr.hpp"

using namespace pss;

namespace {

Binding bind(std::initializer_list<std::pair<std::string, double>> vals) {
  Binding b;
  for (const auto& [name, v] : vals) {
    int dx = 0, dt = 0;
    bool jet = false;
    if (name == "z") {
      jet = true;
    } else if (name.size() > 2 && name[0] == 'z' && name[1] == '_') {
      jet = true;
      for (size_t i = 2; i < name.size(); ++i) {
        if (name[i] == 'x') ++dx;
        if (name[i] == 't') ++dt;
      }
    }
    b.set(jet ? Sym::jet(dx, dt) : Sym::param(name), v);
  }
  return b;
}

}  // namespace

TEST_CASE("parse basic shapes") {
  Expr e = parse_expr("z_t^2 + 1");
  CHECK(e.kind() == Expr::K::add);
  CHECK(eval(e, bind({{"z_t", 2.0}})) == doctest::Approx(5.0));

  Expr b = parse_expr("2*delta/(z^2+m)");
  CHECK(b.kind() == Expr::K::quo);
  CHECK(eval(b, bind({{"z", 1}, {"m", 1}, {"delta", 1}})) == doctest::Approx(1.0));

  Expr f21 = parse_expr("sqrt(z*(eta^2+delta))");
  CHECK(f21.kind() == Expr::K::call);
  CHECK(f21.fn() == Fn1::sqrt);
  CHECK(eval(f21, bind({{"z", 2}, {"eta", 1}, {"delta", 1}})) == doctest::Approx(2.0));
}

TEST_CASE("parse jets, primes, errors") {
  CHECK(parse_expr("z_xxt").sym() == Sym::jet(2, 1));
  CHECK(parse_expr("rho'").sym() == Sym::fn("rho", 1));
  CHECK(parse_expr("rho''(z)").sym() == Sym::fn("rho", 2));
  // a name used with primes promotes its bare occurrences
  Expr e = parse_expr("rho' * rho");
  auto syms = free_symbols(e);
  CHECK(syms.count(Sym::fn("rho", 0)) == 1);
  CHECK(syms.count(Sym::param("rho")) == 0);

  CHECK_THROWS_AS(parse_expr("2 +* z"), Error);
  CHECK_THROWS_AS(parse_expr("sin(z"), Error);
  // unknown function: only abstract functions of z are admitted
  CHECK_THROWS_WITH_AS(parse_expr("foo(z_x)"), doctest::Contains("unknown function"), Error);
}

TEST_CASE("decimal and rational literals") {
  CHECK(parse_expr("0.5").cst() == Rational(1, 2));
  CHECK(parse_expr("3").cst() == Rational(3));
  Expr r = normalize(parse_expr("3/2"));
  CHECK(r.cst() == Rational(3, 2));
}

TEST_CASE("diff: jet independence and the gSP f11 example") {
  CHECK(is_zero(diff(ex_jet(0, 1), kZx)));

  // f11 = (lambda/2) delta (z^2+m) z_t  ->  d/dz_t = (lambda/2) delta (z^2+m)
  Expr f11 = parse_expr("(lambda/2)*delta*(z^2+m)*z_t");
  Expr want = parse_expr("(lambda/2)*delta*(z^2+m)");
  CHECK(equal_normalized(diff(f11, kZt), want));

  // product rule through abstract functions of z
  Expr prod = ex_fn("rho") * ex_fn("psi");
  Expr d = diff(prod, kZ);
  Expr expect = ex_fn("rho", 1) * ex_fn("psi") + ex_fn("rho") * ex_fn("psi", 1);
  CHECK(equal_normalized(d, expect));
}

TEST_CASE("normalize: cancellation, delta^2 rewrite, idempotence") {
  Expr a = parse_expr("(z^2 - m^2)/(z - m)");
  CHECK(equal_normalized(a, parse_expr("z + m")));
  CHECK(to_string(normalize(a)) == "z + m");

  Expr b = parse_expr("lambda/((lambda/2)*delta*(z^2+m))");
  CHECK(equal_normalized(b, parse_expr("2*delta/(z^2+m)")));

  Expr e = parse_expr("sin(z)*z_x + z_t/(z^2+1)");
  CHECK(is_zero(e - e));
  Expr n1 = normalize(e);
  Expr n2 = normalize(n1);
  CHECK(to_string(n1) == to_string(n2));

  CHECK(is_zero(parse_expr("delta^2 - 1")));
  CHECK(equal_normalized(parse_expr("delta^3"), parse_expr("delta")));
}

TEST_CASE("normalize: radical atoms cancel structurally") {
  // sqrt(u)^2 -> u for polynomial u
  Expr u = parse_expr("sqrt(z*(eta^2+delta))^2");
  CHECK(equal_normalized(u, parse_expr("z*eta^2 + z*delta")));
  // the same sqrt written differently unifies
  Expr d = parse_expr("sqrt(z*eta^2 + delta*z) - sqrt(z*(eta^2+delta))");
  CHECK(is_zero(d));
}

TEST_CASE("eval errors") {
  Expr e = parse_expr("1/(z - 1)");
  CHECK_THROWS_AS(eval(e, bind({{"z", 1.0}})), Error);
  CHECK_THROWS_AS(eval(parse_expr("sqrt(z)"), bind({{"z", -1.0}})), Error);
  CHECK_THROWS_AS(eval(parse_expr("q + 1"), bind({{"z", 0.0}})), Error);
  GuardedEval g = eval_guarded(parse_expr("1/(z-1)"), bind({{"z", 1.0005}}), 1e-3);
  CHECK(!g.value.has_value());
  CHECK(g.err == Errc::singular_point);
}

TEST_CASE("print/parse roundtrip preserves values") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.3, 1.7);
  const char* sources[] = {
      "z_t^2 + 1",
      "2*delta/(z^2+m)",
      "sqrt(z*(eta^2+delta))",
      "(z^2 - m^2)/(z - m)",
      "sin(z)*cos(z_x) - exp(z_t)/(1+z^2)",
      "ln(z) + atan(z_t) - abs(m)",
      "-3/2*z*z_x^2 + z_t/(m - 3)",
  };
  for (const char* s : sources) {
    Expr e = parse_expr(s);
    Expr n = normalize(e);
    Expr back = parse_expr(to_string(n));
    for (int i = 0; i < 20; ++i) {
      Binding b = bind({{"z", U(rng)},
                        {"z_x", U(rng)},
                        {"z_t", U(rng)},
                        {"m", U(rng) + 2.0},
                        {"eta", U(rng)},
                        {"delta", 1.0}});
      double v0 = eval(e, b);
      double v1 = eval(back, b);
      CHECK(std::abs(v0 - v1) <= 1e-12 * (1.0 + std::abs(v0)));
    }
  }
}

namespace {

// small random trees over {z, z_x, z_t, m} with smooth builtins
Expr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_int_distribution<int> atom(0, 4);
  if (depth == 0 || pick(rng) == 0) {
    switch (atom(rng)) {
      case 0: return ex_jet(0, 0);
      case 1: return ex_jet(1, 0);
      case 2: return ex_jet(0, 1);
      case 3: return ex_param("m");
      default: return Expr::constant(Rational(atom(rng) + 1, 2));
    }
  }
  switch (pick(rng)) {
    case 1: return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
    case 2: return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
    case 3: return Expr::pow(random_tree(rng, depth - 1), 2);
    case 4: return Expr::call(Fn1::sin, random_tree(rng, depth - 1));
    default: return Expr::call(Fn1::cos, random_tree(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("diff is linear (exact, random trees)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Expr e1 = random_tree(rng, 3);
    Expr e2 = random_tree(rng, 3);
    Expr a = Expr::constant(Rational(2, 3));
    Expr b = Expr::constant(Rational(-5, 4));
    for (const Sym& v : {kZ, kZx, kZt}) {
      Expr lhs = diff(a * e1 + b * e2, v);
      Expr rhs = a * diff(e1, v) + b * diff(e2, v);
      CHECK(is_zero(lhs - rhs));
    }
  }
}

TEST_CASE("diff matches central finite differences") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 25 && checked < 50; ++trial) {
    Expr e = random_tree(rng, 3);
    for (const Sym& v : {kZ, kZx, kZt}) {
      Expr de = diff(e, v);
      Binding b = bind({{"z", U(rng)}, {"z_x", U(rng)}, {"z_t", U(rng)}, {"m", U(rng)}});
      const double h = 1e-5;
      Binding bp = b, bm = b;
      bp.values[v] += h;
      bm.values[v] -= h;
      double fd = (eval(bp.values.count(v) ? e : e, bp) - eval(e, bm)) / (2 * h);
      double an = eval(de, b);
      CHECK(std::abs(fd - an) <= 1e-6 * (1.0 + std::abs(an)));
      ++checked;
    }
  }
}

TEST_CASE("instantiate abstract functions") {
  Expr e = parse_expr("rho''(z)*z_x + rho'(z)*rho(z)");
  Expr inst = instantiate_fn(e, "rho", parse_expr("z^2"));
  Expr want = parse_expr("2*z_x + 2*z*z^2");
  CHECK(equal_normalized(inst, want));
  // evaluating before instantiation is an error
  CHECK_THROWS_AS(eval(e, bind({{"z", 1.0}, {"z_x", 1.0}})), Error);
}

TEST_CASE("eval_terms tracks the largest term") {
  Expr e = parse_expr("z + 100*z_x - 100*z_x");
  TermEval te = eval_terms(e, bind({{"z", 0.5}, {"z_x", 1.0}}));
  CHECK(te.value == doctest::Approx(0.5));
  CHECK(te.max_term == doctest::Approx(100.0));
}
