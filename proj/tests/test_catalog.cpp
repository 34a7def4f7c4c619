#include <cmath>

#include "catalog/catalog.hpp"
#include "doctest.h"

using namespace pss;

namespace {

bool same_fn(const Expr& a, const Expr& b, const std::vector<Assumption>& assume) {
  return identically_zero(a - b, assume);
}

void check_structure_closure(const FixtureInstance& inst) {
  StructureResidual r = structure_residuals(inst.sextet);
  int i = 0;
  for (const Expr& raw : {r.r1, r.r2, r.r3}) {
    Expr reduced = on_shell_reduce(raw, inst.relation);
    INFO("residual r", ++i);
    CHECK(identically_zero(reduced, inst.sextet.assumptions));
  }
}

}  // namespace

TEST_CASE("catalog lists every fixture from the text") {
  auto names = list_catalog();
  for (const char* want :
       {"sine-gordon", "kdv", "gca", "ca-marvan", "gsp", "power-transport", "z4-ss",
        "zxt-family", "ell-wave", "alpha-ell", "pq-family", "astig-cubic", "m1m2",
        "rational-ss", "camassa-holm"}) {
    CAPTURE(want);
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  }
}

TEST_CASE("form-(1.1) fixtures reproduce their stated coefficients") {
  for (const Fixture& f : catalog()) {
    if (f.cls != FixtureClass::form_1_1) continue;
    CAPTURE(f.name);
    FixtureInstance inst = instantiate_fixture(f.name, {});
    REQUIRE(inst.stated_coeffs.has_value());
    PdeCoeffs computed = compute_pde_coeffs(inst.sextet);
    CHECK(same_fn(computed.A, inst.stated_coeffs->A, inst.sextet.assumptions));
    CHECK(same_fn(computed.B, inst.stated_coeffs->B, inst.sextet.assumptions));
    CHECK(same_fn(computed.C, inst.stated_coeffs->C, inst.sextet.assumptions));
  }
}

TEST_CASE("fixtures with a generating family rebuild their sextet") {
  for (const Fixture& f : catalog()) {
    FixtureInstance inst = instantiate_fixture(f.name, {});
    if (!inst.family) continue;
    CAPTURE(f.name);
    BuildResult built = build_family(*inst.family);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) {
        CAPTURE(i);
        CAPTURE(j);
        CHECK(same_fn(built.sextet.f[static_cast<size_t>(i)][static_cast<size_t>(j)],
                      inst.sextet.f[static_cast<size_t>(i)][static_cast<size_t>(j)],
                      inst.sextet.assumptions));
      }
  }
}

TEST_CASE("structure equations close on-shell for every fixture") {
  for (const Fixture& f : catalog()) {
    CAPTURE(f.name);
    FixtureInstance inst = instantiate_fixture(f.name, {});
    check_structure_closure(inst);
  }
}

TEST_CASE("gsp at lambda=1, m=0, delta=1 is the classic short-pulse equation") {
  FixtureInstance inst = instantiate_fixture("gsp", {{"m", 0}});
  PdeCoeffs c = compute_pde_coeffs(inst.sextet);
  CHECK(is_zero(c.A));
  CHECK(equal_normalized(c.B, parse_expr("2/z^2")));
  CHECK(equal_normalized(c.C, parse_expr("-2/z*(z_t^2+1)")));
}

TEST_CASE("gca at m=0 reduces to the constant astigmatism equation") {
  FixtureInstance inst = instantiate_fixture("gca", {{"m", 0}});
  REQUIRE(inst.stated_coeffs.has_value());
  CHECK(same_fn(inst.stated_coeffs->C, parse_expr("-2*z_x^2/z^3 - 2"),
                inst.sextet.assumptions));
  PdeCoeffs c = compute_pde_coeffs(inst.sextet);
  CHECK(same_fn(c.A, parse_expr("1/z^2"), inst.sextet.assumptions));
  CHECK(identically_zero(c.B, inst.sextet.assumptions));
}

TEST_CASE("parameter domain violations are named") {
  CHECK_THROWS_WITH_AS(instantiate_fixture("gsp", {{"lambda", 0}}),
                       doctest::Contains("lambda"), Error);
  CHECK_THROWS_AS(instantiate_fixture("astig-cubic", {{"m", 1}, {"m2", 2}}), Error);
  CHECK_THROWS_AS(instantiate_fixture("gca", {{"eta", 0}}), Error);
  // delta = -1 with |eta| < 1 makes eta^2 + delta negative
  CHECK_THROWS_AS(instantiate_fixture("gca", {{"delta", -1}}), Error);
  CHECK_THROWS_AS(instantiate_fixture("nonesuch", {}), Error);
  CHECK_THROWS_AS(instantiate_fixture("gsp", {{"bogus", 1}}), Error);
}

TEST_CASE("camassa-holm carries a valid third-order zero-curvature representation") {
  FixtureInstance inst = instantiate_fixture("camassa-holm", {});
  MatrixProblem p = build_matrix_problem(inst.sextet, ProblemKind::sl2);
  ResidualMatrix r = zcr_residual(p, inst.relation);
  for (const auto& row : r.re)
    for (const Expr& e : row) CHECK(identically_zero(e));
  const Fixture& f = find_fixture("camassa-holm");
  CHECK(!f.in_default_acceptance);
}

TEST_CASE("fixture ZCR residuals vanish for the generic class") {
  for (const char* name : {"sine-gordon", "kdv"}) {
    CAPTURE(name);
    FixtureInstance inst = instantiate_fixture(name, {});
    MatrixProblem p = build_matrix_problem(
        inst.sextet, inst.sextet.delta == 1 ? ProblemKind::sl2 : ProblemKind::su2);
    ResidualMatrix r = zcr_residual(p, inst.relation);
    for (const auto& row : r.re)
      for (const Expr& e : row) CHECK(identically_zero(e));
  }
}

TEST_CASE("verify_characterization passes on every default form-(1.1) fixture") {
  for (const Fixture& f : catalog()) {
    if (f.cls != FixtureClass::form_1_1) continue;
    CAPTURE(f.name);
    FixtureInstance inst = instantiate_fixture(f.name, {});
    VerifyOptions opt;
    opt.seed = 101;
    opt.points = 60;  // the acceptance suite runs the full 200
    VerifyReport rep = verify_characterization(*inst.stated_coeffs, inst.sextet, opt);
    INFO(rep.failure);
    CHECK(rep.pass);
  }
}
