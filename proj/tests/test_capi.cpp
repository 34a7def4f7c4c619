// Exercises the shared-library surface through the public C header only.

#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "psslab.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  pss_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("expression surface: parse, print, diff, eval, errors") {
  pss_expr* e = nullptr;
  REQUIRE(pss_expr_parse("z_t^2 + 1", &e) == PSS_OK);
  char* printed = nullptr;
  REQUIRE(pss_expr_print(e, &printed) == PSS_OK);
  CHECK(take(printed) == "z_t^2 + 1");

  const char* names[] = {"z_t"};
  double values[] = {2.0};
  double out = 0;
  REQUIRE(pss_expr_eval(e, names, values, 1, &out) == PSS_OK);
  CHECK(out == doctest::Approx(5.0));

  pss_expr* d = nullptr;
  REQUIRE(pss_expr_diff(e, "z_t", &d) == PSS_OK);
  pss_expr* expected = nullptr;
  REQUIRE(pss_expr_parse("2*z_t", &expected) == PSS_OK);
  int eq = 0;
  REQUIRE(pss_expr_equal(d, expected, &eq) == PSS_OK);
  CHECK(eq == 1);

  pss_expr* bad = nullptr;
  int rc = pss_expr_parse("2 +* z", &bad);
  CHECK(rc == PSS_ERR_PARSE);
  CHECK(std::strlen(pss_last_error()) > 0);

  pss_expr_free(e);
  pss_expr_free(d);
  pss_expr_free(expected);
}

TEST_CASE("total derivatives through the C surface") {
  pss_expr* e = nullptr;
  REQUIRE(pss_expr_parse("rho(z)*z_t", &e) == PSS_OK);
  pss_expr* dx = nullptr;
  REQUIRE(pss_expr_total_dx(e, &dx) == PSS_OK);
  pss_expr* want = nullptr;
  REQUIRE(pss_expr_parse("rho'(z)*z_x*z_t + rho(z)*z_xt", &want) == PSS_OK);
  int eq = 0;
  REQUIRE(pss_expr_equal(dx, want, &eq) == PSS_OK);
  CHECK(eq == 1);
  pss_expr_free(e);
  pss_expr_free(dx);
  pss_expr_free(want);
}

TEST_CASE("catalog and verification through the C surface") {
  char* names = nullptr;
  REQUIRE(pss_catalog_list(&names) == PSS_OK);
  json list = json::parse(take(names));
  CHECK(list.size() >= 15);

  char* rep = nullptr;
  int pass = 0;
  REQUIRE(pss_catalog_run("gsp", R"({"lambda":"1","m":"0","delta":"1"})",
                          R"({"seed":0,"points":80})", &rep, &pass) == PSS_OK);
  json report = json::parse(take(rep));
  CHECK(pass == 1);
  CHECK(report.at("pass") == true);

  // determinism through the shared library
  char* rep2 = nullptr;
  REQUIRE(pss_catalog_run("gsp", R"({"lambda":"1","m":"0","delta":"1"})",
                          R"({"seed":0,"points":80})", &rep2, &pass) == PSS_OK);
  CHECK(report == json::parse(take(rep2)));

  // perturbed sextet fails
  char* fixture = nullptr;
  REQUIRE(pss_catalog_export("gsp", "{}", &fixture) == PSS_OK);
  json fj = json::parse(take(fixture));
  fj["f22"] = fj["f22"].get<std::string>() + " + 1/10";
  pss_sextet* s = nullptr;
  REQUIRE(pss_sextet_from_json(fj.dump().c_str(), &s) == PSS_OK);
  char* vrep = nullptr;
  REQUIRE(pss_verify(s, R"({"points":60})", &vrep, &pass) == PSS_OK);
  CHECK(pass == 0);
  json vr = json::parse(take(vrep));
  CHECK(vr.at("pass") == false);
  pss_sextet_free(s);

  int rc = pss_catalog_run("nonesuch", "{}", "{}", &rep, &pass);
  CHECK(rc == PSS_ERR_DOMAIN_VIOLATION);
}

TEST_CASE("family build through the C surface emits the documented equation") {
  const char* spec = R"json({
    "variant": "cor33",
    "psi21": "0", "psi22": "m", "psi31": "1/z", "psi32": "z",
    "delta": 1, "assumptions": ["m != 0"]
  })json";
  char* result = nullptr;
  int pass = 0;
  REQUIRE(pss_family_build(spec, R"({"points":60})", &result, &pass) == PSS_OK);
  json r = json::parse(take(result));
  CHECK(pass == 1);
  CHECK(r.at("coeffs").at("A") == "z^4");
}

TEST_CASE("solve and curvature through the C surface") {
  const char* problem = R"json({
    "closed_form": "4*atan(exp(x + t))",
    "grid": {"x0": -6, "x1": 6, "t0": -6, "t1": 6, "h": 0.05}
  })json";
  pss_grid* g = nullptr;
  char* diag = nullptr;
  REQUIRE(pss_solve(problem, &g, &diag) == PSS_OK);
  CHECK(json::parse(take(diag)).at("completed") == true);

  char* fixture = nullptr;
  REQUIRE(pss_catalog_export("sine-gordon", "{}", &fixture) == PSS_OK);
  pss_sextet* s = nullptr;
  REQUIRE(pss_sextet_from_json(take(fixture).c_str(), &s) == PSS_OK);

  char* rep = nullptr;
  int pass = 0;
  REQUIRE(pss_curvature_report(g, s, 1e-2, &rep, &pass) == PSS_OK);
  json r = json::parse(take(rep));
  CHECK(pass == 1);
  CHECK(r.at("median_abs_K_plus_delta").get<double>() <= 1e-3);

  double disc = -1;
  REQUIRE(pss_transport_check(g, s, PSS_PROBLEM_SL2, -1.0, -1.0, 0.05, 1.0, &disc) == PSS_OK);
  CHECK(disc >= 0);
  CHECK(disc <= 1e-3);

  char* csv = nullptr;
  REQUIRE(pss_grid_csv(g, s, &csv) == PSS_OK);
  std::string text = take(csv);
  CHECK(text.rfind("x,t,z,K,w,r1,r2,r3\n", 0) == 0);

  pss_sextet_free(s);
  pss_grid_free(g);
}
