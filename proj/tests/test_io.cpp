#include <fstream>
#include <sstream>

#include "doctest.h"
#include "io/runner.hpp"

using namespace pss;

TEST_CASE("sextet JSON roundtrip is stable") {
  Json j1 = fixture_export_json("gsp", {});
  LoadedSextet ls = sextet_from_json(j1);
  REQUIRE(ls.relation.has_value());
  Json j2 = sextet_to_json(ls.sextet, &*ls.relation);
  for (const char* key : {"f11", "f12", "f21", "f22", "f31", "f32", "delta"})
    CHECK(j1.at(key) == j2.at(key));
  CHECK(j1.at("relation").at("rhs") == j2.at("relation").at("rhs"));
}

TEST_CASE("family JSON roundtrip covers every variant") {
  for (const char* name :
       {"gca", "gsp", "power-transport", "alpha-ell", "m1m2", "rational-ss"}) {
    CAPTURE(name);
    FixtureInstance inst = instantiate_fixture(name, {});
    REQUIRE(inst.family.has_value());
    Json j = family_to_json(*inst.family);
    FamilySpec back = family_from_json(j);
    CHECK(std::string(family_variant_name(back)) == family_variant_name(*inst.family));
    CHECK(family_to_json(back) == j);
    // the rebuilt spec still builds the same equation
    BuildResult a = build_family(*inst.family);
    BuildResult b = build_family(back);
    CHECK(is_zero(a.coeffs.B - b.coeffs.B));
    CHECK(is_zero(a.coeffs.C - b.coeffs.C));
  }
}

TEST_CASE("coefficients from a relation") {
  EvolutionRelation rel(kZtt, parse_expr("z^4*z_xx + z*z_xt + 2*z_t^2/z"));
  PdeCoeffs c = coeffs_from_relation(rel, 1);
  CHECK(equal_normalized(c.A, parse_expr("z^4")));
  CHECK(equal_normalized(c.B, parse_expr("z")));
  CHECK(equal_normalized(c.C, parse_expr("2*z_t^2/z")));

  EvolutionRelation bad(kZtt, parse_expr("z_xx^2"));
  CHECK_THROWS_AS(coeffs_from_relation(bad, 1), Error);
}

TEST_CASE("reports are byte-identical for identical seeds; timings opt-in") {
  RunOptions opt;
  opt.seed = 7;
  opt.points = 40;
  RunReport a = run_catalog_fixture("gsp", {}, opt);
  RunReport b = run_catalog_fixture("gsp", {}, opt);
  std::string sa = a.to_json().dump(2);
  std::string sb = b.to_json().dump(2);
  CHECK(sa == sb);
  CHECK(sa.find("timings") == std::string::npos);
  CHECK(a.to_json(true).dump().find("timings_ms") != std::string::npos);
  // fixture runs report the five characterization equations
  bool found = false;
  for (const CheckResult& c : a.checks)
    if (c.name == "characterization") {
      found = true;
      for (const char* k : {"eq1", "eq2", "eq3", "eq4", "eq5"}) CHECK(c.details.contains(k));
    }
  CHECK(found);
}

TEST_CASE("empty report renders") {
  RunReport r;
  r.command = "noop";
  Json j = r.to_json();
  CHECK(j.at("pass") == true);
  CHECK(!r.to_text().empty());
}

TEST_CASE("grid CSV has the documented columns") {
  FixtureInstance sg = instantiate_fixture("sine-gordon", {});
  SolutionGrid g = make_grid(-2.0, 2.0, -2.0, 2.0, 0.1, 0.1, Bc::dirichlet,
                             [](double x, double t) { return 4 * std::atan(std::exp(x + t)); });
  std::string csv = grid_csv(g, &sg.sextet);
  std::istringstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header == "x,t,z,K,w,r1,r2,r3");
  int rows = 0;
  std::string line;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == g.nx * g.nt);
}

TEST_CASE("shipped fixture files match the catalog export") {
  for (const std::string& name : list_catalog()) {
    CAPTURE(name);
    std::ifstream in(std::string(PSS_SOURCE_DIR) + "/data/fixtures/" + name + ".json");
    REQUIRE(in.good());
    Json shipped = Json::parse(in);
    Json fresh = fixture_export_json(name, {});
    CHECK(shipped == fresh);
  }
}
