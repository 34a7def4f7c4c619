#include <cmath>

#include "doctest.h"
#include "families/families.hpp"

using namespace pss;

namespace {

Expr P(const char* s) { return parse_expr(s); }

// builders emit sextets with the concrete curvature sign substituted
Expr Pd(const char* s, int delta) {
  std::map<Sym, Expr> sub{{Sym::param("delta"), Expr::integer(delta)}};
  return substitute(parse_expr(s), sub);
}

Sextet gsp_symbolic() {
  return make_sextet(P("(lambda/2)*delta*(z^2+m)*z_t"), P("lambda*z_t"),
                     P("(delta*lambda/2)*(z^2+m) + 1/lambda"), P("lambda"), P("delta*z"),
                     P("0"), 1, {parse_assumption("lambda != 0")});
}

bool sextets_equal(const Sextet& a, const Sextet& b) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j)
      if (!is_zero(a.f[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                   b.f[static_cast<size_t>(i)][static_cast<size_t>(j)]))
        return false;
  return true;
}

}  // namespace

TEST_CASE("coefficient formulas reproduce the gSP equation exactly, delta symbolic") {
  // kernel-level identity with delta kept symbolic (delta^2 -> 1 rewrite)
  Expr f11 = P("(lambda/2)*delta*(z^2+m)*z_t");
  Expr f12 = P("lambda*z_t");
  Expr f21 = P("(delta*lambda/2)*(z^2+m) + 1/lambda");
  Expr f22 = P("lambda");
  Expr f31 = P("delta*z");
  Expr f32 = P("0");
  Expr f11zt = diff(f11, kZt);
  CHECK(is_zero(normalize(diff(f12, kZx) / f11zt)));
  CHECK(equal_normalized(normalize((-diff(f11, kZx) + diff(f12, kZt)) / f11zt),
                         P("2*delta/(z^2+m)")));
  Expr delta_term = f32 * f21 - f31 * f22;
  Expr C = (-(ex_sym(kZt) * diff(f11, kZ)) + ex_sym(kZx) * diff(f12, kZ) + delta_term) / f11zt;
  CHECK(equal_normalized(normalize(C), P("-2*z*(z_t^2+1)/(z^2+m)")));

  // sextet-level check at both concrete signs
  for (int delta : {1, -1}) {
    Sextet s = make_sextet(f11, f12, f21, f22, f31, f32, delta,
                           {parse_assumption("lambda != 0")});
    PdeCoeffs c = compute_pde_coeffs(s);
    CHECK(is_zero(c.A));
    CHECK(equal_normalized(c.B, Pd("2*delta/(z^2+m)", delta)));
    CHECK(equal_normalized(c.C, P("-2*z*(z_t^2+1)/(z^2+m)")));
  }
}

TEST_CASE("compute_pde_coeffs rejects f11 independent of z_t") {
  Sextet s = make_sextet(P("z_x"), P("z_t"), P("1"), P("1"), P("z"), P("0"), 1);
  CHECK_THROWS_AS(compute_pde_coeffs(s), Error);
  try {
    compute_pde_coeffs(s);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_f11);
  }
}

TEST_CASE("cor33 on the Ex 3.4 data reproduces equation and sextet") {
  Cor33 spec;
  spec.psi21 = P("0");
  spec.psi22 = P("m");
  spec.psi31 = P("1/z");
  spec.psi32 = P("z");
  spec.delta = 1;
  spec.assumptions = {parse_assumption("m != 0")};
  BuildResult r = build_cor33(spec);

  CHECK(equal_normalized(r.coeffs.A, P("z^4")));
  CHECK(is_zero(r.coeffs.B));
  CHECK(equal_normalized(r.coeffs.C, Pd("2*z^3*z_x^2 + 2*z_t^2/z - delta*m^2*z", 1)));
  CHECK(equal_normalized(r.sextet.f11(), Pd("delta/m*(z_t/z^2 + z_x)", 1)));
  CHECK(equal_normalized(r.sextet.f12(), Pd("delta/m*(z_t + z^2*z_x)", 1)));

  // dual route: the corollary's closed-form coefficients
  Expr d = Expr::integer(spec.delta);
  Expr H = spec.psi31 * spec.psi31 - d * spec.psi21 * spec.psi21;
  Expr Hz = diff(H, kZ);
  Expr A_closed = diff(d * spec.psi22 * spec.psi22 - spec.psi32 * spec.psi32, kZ) / Hz;
  Expr B_closed = ex_int(2) * diff(spec.psi31 * spec.psi32 - d * spec.psi21 * spec.psi22, kZ) / Hz;
  Expr D0 = spec.psi32 * spec.psi21 - spec.psi31 * spec.psi22;
  Expr C_closed = (ex_int(2) * d * D0 / Hz) *
                  (-(diff(r.sextet.f11(), kZ) * ex_sym(kZt)) +
                   diff(r.sextet.f12(), kZ) * ex_sym(kZx) + D0);
  CHECK(is_zero(r.coeffs.A - A_closed));
  CHECK(is_zero(r.coeffs.B - B_closed));
  CHECK(is_zero(r.coeffs.C - C_closed));
}

TEST_CASE("cor33 zxt-family (Ex 3.5) equation") {
  Cor33 spec;
  spec.psi21 = P("0");
  spec.psi22 = P("m");
  spec.psi31 = P("1/z");
  spec.psi32 = P("1");
  spec.assumptions = {parse_assumption("m != 0")};
  BuildResult r = build_cor33(spec);
  CHECK(is_zero(r.coeffs.A));
  CHECK(equal_normalized(r.coeffs.B, P("z")));
  CHECK(equal_normalized(r.coeffs.C, Pd("-z_x*z_t + 2*z_t^2/z - delta*m^2*z", 1)));
}

TEST_CASE("cor33 rejects degenerate data") {
  Cor33 bad;
  bad.psi21 = P("z");
  bad.psi22 = P("1");
  bad.psi31 = P("z");
  bad.psi32 = P("1");
  CHECK_THROWS_AS(build_cor33(bad), Error);  // Delta0 == 0

  Cor33 hconst;
  hconst.psi21 = P("1");
  hconst.psi22 = P("z");
  hconst.psi31 = P("2");
  hconst.psi32 = P("1");
  try {
    build_cor33(hconst);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::h_constant);
  }
}

TEST_CASE("case (a) on the Ex 5.6 data") {
  CaseA spec;
  spec.phi = P("1");
  spec.varphi = P("0");
  spec.psi21 = P("0");
  spec.psi22 = P("0");
  spec.psi31 = P("eta*z");
  spec.psi32 = P("eta");
  spec.delta = 1;
  spec.assumptions = {parse_assumption("eta != 0")};
  BuildResult r = build_case_a(spec);

  CHECK(equal_normalized(r.sextet.f11(), Pd("delta*eta*z*z_t/(z_x - z*z_t)", 1)));
  CHECK(equal_normalized(r.sextet.f12(), Pd("delta*eta*z_t/(z_x - z*z_t)", 1)));
  CHECK(equal_normalized(r.coeffs.A, P("-z_t/(z*z_x)")));
  CHECK(equal_normalized(r.coeffs.B, P("(z*z_t + z_x)/(z*z_x)")));
  CHECK(equal_normalized(r.coeffs.C, Pd("delta*(z_x - z*z_t)^3/(z*z_x)", 1)));
}

TEST_CASE("case (a) with constant psis and phi = varphi = 0 degenerates") {
  CaseA spec;
  spec.phi = P("0");
  spec.varphi = P("0");
  spec.psi21 = P("1");
  spec.psi22 = P("2");
  spec.psi31 = P("3");
  spec.psi32 = P("7");
  try {
    build_case_a(spec);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_f11);
  }
}

TEST_CASE("case (a) Delta matches its displayed expansion") {
  CaseA spec;
  spec.phi = P("z");
  spec.varphi = P("2 - z");
  spec.psi21 = P("1 + z^2");
  spec.psi22 = P("z");
  spec.psi31 = P("3*z");
  spec.psi32 = P("1");
  BuildResult r = build_case_a(spec);
  Expr Delta = r.sextet.f32() * r.sextet.f21() - r.sextet.f31() * r.sextet.f22();
  Expr displayed = (spec.varphi * spec.psi21 - spec.phi * spec.psi31) * ex_sym(kZt) +
                   (spec.phi * spec.psi32 - spec.varphi * spec.psi22) * ex_sym(kZx) +
                   spec.psi32 * spec.psi21 - spec.psi22 * spec.psi31;
  CHECK(is_zero(Delta - displayed));
}

TEST_CASE("case (b.1) via Remark data reproduces the power-transport example") {
  CaseB1 spec;
  spec.h = P("z_t + (1 - 1/(z^2-1))*z_x + z^2");  // lambda = 1, m = 1, p = 2
  spec.phi = P("0");
  spec.rho = P("z");
  spec.c1 = P("1");  // eta
  spec.c2 = P("1");  // m*eta
  spec.delta = 1;
  spec.sign = 1;  // z^2 - 1 > 0 on |z| > 1
  BuildResult r = build_case_b(spec);

  CHECK(equal_normalized(r.coeffs.A, P("1")));  // m^2
  CHECK(is_zero(r.coeffs.B));
  CHECK(equal_normalized(r.coeffs.C, P("2*z*z_x - 2*z*z_t")));

  // Delta == 0 holds as a normalized identity (rho-proportional rows)
  CHECK(is_zero(r.sextet.f32() * r.sextet.f21() - r.sextet.f31() * r.sextet.f22()));

  // entrywise match with the paper's sextet for these parameters
  CHECK(equal_normalized(r.sextet.f21(), P("1/sqrt(z^2-1)")));
  CHECK(equal_normalized(r.sextet.f31(), P("z/sqrt(z^2-1)")));
  CHECK(equal_normalized(r.sextet.f12(),
                         P("(1 - 1/(z^2-1))*z_t + z_x + z^2")));
}

TEST_CASE("specialization: case (a) with phi = varphi = 0 equals cor33") {
  Cor33 c;
  c.psi21 = P("z^2 - 2");
  c.psi22 = P("1 + z");
  c.psi31 = P("z");
  c.psi32 = P("3 - z^3");
  c.delta = -1;
  CaseA a;
  a.phi = P("0");
  a.varphi = P("0");
  a.psi21 = c.psi21;
  a.psi22 = c.psi22;
  a.psi31 = c.psi31;
  a.psi32 = c.psi32;
  a.delta = c.delta;
  CHECK(sextets_equal(build_case_a(a).sextet, build_cor33(c).sextet));
}

TEST_CASE("specialization: case (b.1) with phi = 0 equals cor34") {
  CaseB1 b;
  b.h = P("z_t + z*z_x - z^2");
  b.phi = P("0");
  b.rho = P("z + 2*z^2");
  b.c1 = P("3/2");
  b.c2 = P("3");  // m = c2/c1 = 2
  b.delta = 1;
  b.sign = 1;
  Cor34 c;
  c.h = b.h;
  c.rho = b.rho;
  c.eta = b.c1;
  c.m = P("2");
  c.delta = 1;
  c.sign = 1;
  BuildResult rb = build_case_b(b);
  BuildResult rc = build_cor34(c);
  CHECK(sextets_equal(rb.sextet, rc.sextet));
  CHECK(is_zero(rb.coeffs.A - rc.coeffs.A));
  CHECK(is_zero(rb.coeffs.B - rc.coeffs.B));
  CHECK(is_zero(rb.coeffs.C - rc.coeffs.C));
}

TEST_CASE("specialization: case (b.2) with phi = 0 equals cor35") {
  CaseB2 b;
  b.h = P("2*z_t + z_x*z");
  b.phi = P("0");
  b.psi = P("1 + z^2");
  b.chi = P("z - 1");
  b.sign = -1;
  Cor35 c;
  c.h = b.h;
  c.psi = b.psi;
  c.chi = b.chi;
  c.sign = -1;
  CHECK(sextets_equal(build_case_b(b).sextet, build_cor35(c).sextet));
}

TEST_CASE("cor34 closed-form coefficients (dual route) and m = 0 reduction") {
  Cor34 spec;
  spec.h = P("z_t + z^2*z_x + z");
  spec.rho = P("2*z");
  spec.m = P("m");
  spec.eta = P("eta");
  spec.delta = -1;  // rho^2 + 1 > 0 everywhere
  spec.sign = 1;
  spec.assumptions = {parse_assumption("eta != 0")};
  BuildResult r = build_cor34(spec);

  Expr hzt = diff(spec.h, kZt), hzx = diff(spec.h, kZx), hz = diff(spec.h, kZ);
  Expr rr = diff(spec.rho, kZ) / (spec.rho * spec.rho - Expr::integer(spec.delta));
  Expr A_closed = (spec.m / hzt) * (hzx + rr);
  Expr B_closed = spec.m - (hzx + rr) / hzt;
  Expr C_closed = ((spec.m * ex_sym(kZx) - ex_sym(kZt)) / hzt) * (hz + ex_sym(kZx) * diff(rr, kZ));
  CHECK(is_zero(r.coeffs.A - A_closed));
  CHECK(is_zero(r.coeffs.B - B_closed));
  CHECK(is_zero(r.coeffs.C - C_closed));

  std::map<Sym, Expr> m0{{Sym::param("m"), Expr()}};
  CHECK(is_zero(substitute(normalize(r.coeffs.A), m0)));
  CHECK(equal_normalized(substitute(normalize(r.coeffs.B), m0), normalize(-(hzx + rr) / hzt)));
}

TEST_CASE("cor35 closed-form coefficients and the chi = c psi sanity case") {
  Cor35 spec;
  spec.h = P("z_t + z*z_x");
  spec.psi = P("z");
  spec.chi = P("2*z");
  spec.sign = 1;
  BuildResult r = build_cor35(spec);

  Expr hzt = diff(spec.h, kZt), hzx = diff(spec.h, kZx), hz = diff(spec.h, kZ);
  Expr s = Expr::integer(spec.sign);
  Expr A_closed = (spec.chi * hzx - s * diff(spec.chi, kZ)) / (spec.psi * hzt);
  Expr B_closed = spec.chi / spec.psi - (hzx - s * diff(spec.psi, kZ) / spec.psi) / hzt;
  Expr ratio = spec.chi / spec.psi;
  Expr C_closed =
      ((-(ex_sym(kZt) * hz)) +
       ex_sym(kZx) * (diff(ratio, kZ) * spec.h + ratio * hz +
                      s * ex_sym(kZt) * diff(diff(spec.psi, kZ) / spec.psi, kZ) -
                      s * ex_sym(kZx) * diff(diff(spec.chi, kZ) / spec.psi, kZ))) /
      hzt;
  CHECK(is_zero(r.coeffs.A - A_closed));
  CHECK(is_zero(r.coeffs.B - B_closed));
  CHECK(is_zero(r.coeffs.C - C_closed));

  // chi = c psi: B = c - (h_zx - s psi'/psi)/h_zt
  CHECK(equal_normalized(r.coeffs.B, P("2 - (z - 1/z)")));
}

TEST_CASE("verify_characterization: gSP passes, perturbations fail") {
  Sextet s = gsp_symbolic();
  PdeCoeffs c = compute_pde_coeffs(s);
  VerifyOptions opt;
  opt.seed = 17;
  VerifyReport rep = verify_characterization(c, s, opt);
  CHECK(rep.pass);
  for (double m : rep.eq_max) CHECK(m <= opt.tol);

  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      Sextet bad = s;
      bad.f[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          bad.f[static_cast<size_t>(i)][static_cast<size_t>(j)] + ex_rat(1, 10);
      VerifyReport r2 = verify_characterization(c, bad, opt);
      CHECK(!r2.pass);
      double worst = 0.0;
      for (double m : r2.eq_max) worst = std::max(worst, m);
      CHECK(worst >= 1e-3);
    }
  }
}

TEST_CASE("verify_characterization rejects non-affine shapes") {
  Sextet s = make_sextet(P("z_t"), P("z_x"), P("z_x^2"), P("1"), P("z"), P("0"), 1);
  CHECK_THROWS_AS(verify_characterization(compute_pde_coeffs(s), s), Error);
}

TEST_CASE("every builder's result passes verification") {
  std::vector<BuildResult> results;
  {
    CaseA a;
    a.phi = P("1");
    a.varphi = P("0");
    a.psi21 = P("0");
    a.psi22 = P("0");
    a.psi31 = P("z");
    a.psi32 = P("1");
    results.push_back(build_case_a(a));
  }
  {
    Cor33 c;
    c.psi21 = P("0");
    c.psi22 = P("m");
    c.psi31 = P("1/z");
    c.psi32 = P("z");
    c.assumptions = {parse_assumption("m != 0")};
    results.push_back(build_cor33(c));
  }
  {
    Cor34 c;
    c.h = P("z_t + z*z_x");
    c.rho = P("z");
    c.m = P("1");
    c.eta = P("1");
    c.delta = -1;
    c.sign = 1;
    results.push_back(build_cor34(c));
  }
  {
    Cor35 c;
    c.h = P("-2*z_t");
    c.psi = P("z");
    c.chi = P("z^2 + 1/2");
    c.sign = 1;
    results.push_back(build_cor35(c));
  }
  {
    CaseB2 b;
    b.h = P("z_t + z_x");
    b.phi = P("z");
    b.psi = P("1");
    b.chi = P("z");
    b.sign = -1;
    results.push_back(build_case_b(b));
  }
  for (const BuildResult& r : results) {
    VerifyOptions opt;
    opt.seed = 23;
    VerifyReport rep = verify_characterization(r.coeffs, r.sextet, opt);
    INFO("variant ", family_variant_name(r.provenance), ": ", rep.failure);
    CHECK(rep.pass);

    // structure equations close on-shell modulo the built equation
    StructureResidual sr = structure_residuals(r.sextet);
    EvolutionRelation rel = r.relation();
    for (const Expr& raw : {sr.r1, sr.r2, sr.r3})
      CHECK(identically_zero(on_shell_reduce(raw, rel), r.sextet.assumptions));
  }
}
