#include "psslab.h"

#include <cmath>
#include <cstring>
#include <string>

#include "io/runner.hpp"

namespace {

thread_local std::string g_last_error;

int code_of(pss::Errc c) {
  using pss::Errc;
  switch (c) {
    case Errc::parse_error: return PSS_ERR_PARSE;
    case Errc::unknown_function: return PSS_ERR_UNKNOWN_FUNCTION;
    case Errc::unbound_variable: return PSS_ERR_UNBOUND_VARIABLE;
    case Errc::singular_point: return PSS_ERR_SINGULAR_POINT;
    case Errc::domain_error: return PSS_ERR_DOMAIN;
    case Errc::order_overflow: return PSS_ERR_ORDER_OVERFLOW;
    case Errc::kind_mismatch: return PSS_ERR_KIND_MISMATCH;
    case Errc::degenerate_f11: return PSS_ERR_DEGENERATE_F11;
    case Errc::delta_vanishes: return PSS_ERR_DELTA_VANISHES;
    case Errc::delta0_vanishes: return PSS_ERR_DELTA0_VANISHES;
    case Errc::h_constant: return PSS_ERR_H_CONSTANT;
    case Errc::psi_vanishes: return PSS_ERR_PSI_VANISHES;
    case Errc::sign_assumption_violated: return PSS_ERR_SIGN_ASSUMPTION;
    case Errc::shape_mismatch: return PSS_ERR_SHAPE_MISMATCH;
    case Errc::domain_violation: return PSS_ERR_DOMAIN_VIOLATION;
    case Errc::empty_mask: return PSS_ERR_EMPTY_MASK;
    case Errc::singular_coefficient: return PSS_ERR_SINGULAR_COEFFICIENT;
    case Errc::blow_up: return PSS_ERR_BLOW_UP;
    case Errc::invalid_spec: return PSS_ERR_INVALID;
    case Errc::io_error: return PSS_ERR_IO;
    case Errc::no_admissible_point: return PSS_ERR_NO_ADMISSIBLE_POINT;
  }
  return PSS_ERR_INTERNAL;
}

template <class F>
int guarded(F&& f) {
  try {
    f();
    return PSS_OK;
  } catch (const pss::Error& e) {
    g_last_error = std::string(pss::errc_name(e.code())) + ": " + e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PSS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return PSS_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pss::RunOptions options_from_json(const char* opts_json) {
  pss::RunOptions o;
  if (!opts_json || !*opts_json) return o;
  pss::Json j = pss::Json::parse(opts_json);
  o.seed = j.value("seed", uint64_t{0});
  o.points = j.value("points", 200);
  o.tol = j.value("tol", 1e-9);
  if (j.contains("delta")) o.delta_override = j.at("delta").get<int>();
  return o;
}

pss::ParamMap params_from_json(const char* params_json) {
  pss::ParamMap out;
  if (!params_json || !*params_json) return out;
  pss::Json j = pss::Json::parse(params_json);
  for (auto it = j.begin(); it != j.end(); ++it) {
    pss::Expr e;
    if (it.value().is_string())
      e = pss::normalize(pss::parse_expr(it.value().get<std::string>()));
    else
      e = pss::normalize(pss::parse_expr(it.value().dump()));
    if (!e.is_constant())
      pss::raise(pss::Errc::domain_violation, "parameter " + it.key() + " must be a constant");
    out[it.key()] = e.cst();
  }
  return out;
}

}  // namespace

struct pss_expr {
  pss::Expr e;
};
struct pss_sextet {
  pss::LoadedSextet ls;
};
struct pss_grid {
  pss::SolutionGrid g;
};

extern "C" {

const char* pss_version(void) { return "psslab 1.0.0"; }

const char* pss_last_error(void) { return g_last_error.c_str(); }

void pss_string_free(char* s) { delete[] s; }

/* --- expressions --------------------------------------------------------- */

int pss_expr_parse(const char* src, pss_expr** out) {
  return guarded([&] {
    if (!src || !out) pss::raise(pss::Errc::invalid_spec, "null argument");
    *out = new pss_expr{pss::parse_expr(src)};
  });
}

void pss_expr_free(pss_expr* e) { delete e; }

int pss_expr_print(const pss_expr* e, char** out) {
  return guarded([&] { *out = dup_string(pss::to_string(e->e)); });
}

int pss_expr_normalize(const pss_expr* e, pss_expr** out) {
  return guarded([&] { *out = new pss_expr{pss::normalize(e->e)}; });
}

int pss_expr_diff(const pss_expr* e, const char* var, pss_expr** out) {
  return guarded([&] {
    pss::Expr v = pss::parse_expr(var);
    if (v.kind() != pss::Expr::K::sym)
      pss::raise(pss::Errc::invalid_spec, "diff variable must be a symbol name");
    *out = new pss_expr{pss::diff(e->e, v.sym())};
  });
}

int pss_expr_total_dx(const pss_expr* e, pss_expr** out) {
  return guarded([&] { *out = new pss_expr{pss::total_dx(e->e)}; });
}

int pss_expr_total_dt(const pss_expr* e, pss_expr** out) {
  return guarded([&] { *out = new pss_expr{pss::total_dt(e->e)}; });
}

int pss_expr_equal(const pss_expr* a, const pss_expr* b, int* out) {
  return guarded([&] { *out = pss::equal_normalized(a->e, b->e) ? 1 : 0; });
}

int pss_expr_eval(const pss_expr* e, const char* const* names, const double* values, size_t n,
                  double* out) {
  return guarded([&] {
    pss::Binding b;
    for (size_t i = 0; i < n; ++i) {
      pss::Expr v = pss::parse_expr(names[i]);
      if (v.kind() != pss::Expr::K::sym)
        pss::raise(pss::Errc::invalid_spec, "binding names must be symbols");
      b.set(v.sym(), values[i]);
    }
    *out = pss::eval(e->e, b);
  });
}

/* --- sextets -------------------------------------------------------------- */

int pss_sextet_from_json(const char* json_text, pss_sextet** out) {
  return guarded([&] {
    pss::Json j = pss::Json::parse(json_text);
    *out = new pss_sextet{pss::sextet_from_json(j)};
  });
}

int pss_sextet_to_json(const pss_sextet* s, char** out) {
  return guarded([&] {
    pss::Json j = pss::sextet_to_json(s->ls.sextet,
                                      s->ls.relation ? &*s->ls.relation : nullptr);
    *out = dup_string(j.dump(2));
  });
}

void pss_sextet_free(pss_sextet* s) { delete s; }

int pss_sextet_coeffs(const pss_sextet* s, char** coeffs_json) {
  return guarded([&] {
    pss::PdeCoeffs c = pss::compute_pde_coeffs(s->ls.sextet);
    *coeffs_json = dup_string(pss::coeffs_to_json(c).dump(2));
  });
}

int pss_structure_residuals(const pss_sextet* s, char** residuals_json) {
  return guarded([&] {
    pss::StructureResidual r = pss::structure_residuals(s->ls.sextet);
    pss::Json j{{"r1", pss::to_string(pss::normalize(r.r1))},
                {"r2", pss::to_string(pss::normalize(r.r2))},
                {"r3", pss::to_string(pss::normalize(r.r3))}};
    *residuals_json = dup_string(j.dump(2));
  });
}

int pss_verify(const pss_sextet* s, const char* opts_json, char** report_json, int* pass) {
  return guarded([&] {
    pss::RunOptions opt = options_from_json(opts_json);
    std::string digest = pss::fnv1a_digest(
        pss::sextet_to_json(s->ls.sextet, s->ls.relation ? &*s->ls.relation : nullptr).dump());
    pss::RunReport rep = pss::run_verify_sextet(s->ls, opt, digest);
    *report_json = dup_string(rep.to_json().dump(2));
    if (pass) *pass = rep.pass() ? 1 : 0;
  });
}

/* --- families -------------------------------------------------------------- */

int pss_family_build(const char* family_json, const char* opts_json, char** result_json,
                     int* pass) {
  return guarded([&] {
    pss::FamilySpec spec = pss::family_from_json(pss::Json::parse(family_json));
    pss::BuildResult r = pss::build_family(spec);
    pss::RunOptions opt = options_from_json(opts_json);
    pss::VerifyOptions vo;
    vo.seed = opt.seed;
    vo.points = opt.points;
    vo.tol = opt.tol;
    pss::VerifyReport vr = pss::verify_characterization(r.coeffs, r.sextet, vo);
    pss::Json j = pss::build_result_to_json(r);
    j["verify"] = pss::verify_report_json(vr);
    *result_json = dup_string(j.dump(2));
    if (pass) *pass = vr.pass ? 1 : 0;
  });
}

/* --- catalog ---------------------------------------------------------------- */

int pss_catalog_list(char** json_names) {
  return guarded([&] {
    pss::Json j = pss::Json::array();
    for (const auto& n : pss::list_catalog()) j.push_back(n);
    *json_names = dup_string(j.dump(2));
  });
}

int pss_catalog_export(const char* name, const char* params_json, char** fixture_json) {
  return guarded([&] {
    pss::Json j = pss::fixture_export_json(name, params_from_json(params_json));
    *fixture_json = dup_string(j.dump(2));
  });
}

int pss_catalog_run(const char* name, const char* params_json, const char* opts_json,
                    char** report_json, int* pass) {
  return guarded([&] {
    pss::RunOptions opt = options_from_json(opts_json);
    pss::RunReport rep = pss::run_catalog_fixture(name, params_from_json(params_json), opt);
    bool with_timings = false;
    if (opts_json && *opts_json)
      with_timings = pss::Json::parse(opts_json).value("timings", false);
    *report_json = dup_string(rep.to_json(with_timings).dump(2));
    if (pass) *pass = rep.pass() ? 1 : 0;
  });
}

/* --- numeric lab -------------------------------------------------------------- */

namespace {

pss::SolutionGrid solve_from_json(const pss::Json& j, pss::Json* diag) {
  using pss::Json;
  if (j.contains("closed_form")) {
    const Json& gj = j.at("grid");
    pss::Expr zf = pss::parse_expr(j.at("closed_form").get<std::string>());
    pss::Sym X = pss::Sym::param("x"), T = pss::Sym::param("t");
    double h = gj.value("h", 0.05);
    pss::SolutionGrid g = pss::make_grid(
        gj.at("x0").get<double>(), gj.at("x1").get<double>(), gj.at("t0").get<double>(),
        gj.at("t1").get<double>(), gj.value("hx", h), gj.value("ht", h),
        gj.value("bc", std::string("dirichlet")) == "periodic" ? pss::Bc::periodic
                                                               : pss::Bc::dirichlet,
        [&](double x, double t) {
          pss::Binding b;
          b.set(X, x).set(T, t);
          return pss::eval(zf, b);
        });
    (*diag)["completed"] = true;
    (*diag)["source"] = "closed_form";
    return g;
  }

  pss::PdeCoeffs coeffs;
  if (j.contains("coeffs")) {
    coeffs = pss::coeffs_from_json(j.at("coeffs"));
  } else if (j.contains("catalog")) {
    pss::ParamMap pm;
    if (j.contains("params")) pm = params_from_json(j.at("params").dump().c_str());
    pss::FixtureInstance inst = pss::instantiate_fixture(j.at("catalog").get<std::string>(), pm);
    if (!inst.stated_coeffs)
      pss::raise(pss::Errc::invalid_spec, "fixture is not of the quasilinear form");
    coeffs = *inst.stated_coeffs;
  } else {
    pss::raise(pss::Errc::io_error, "problem needs \"coeffs\", \"catalog\", or \"closed_form\"");
  }

  pss::Expr z0 = pss::parse_expr(j.value("z0", "0"));
  pss::Expr v0 = pss::parse_expr(j.value("v0", "0"));
  pss::Sym X = pss::Sym::param("x");
  pss::SolveParams p;
  p.x0 = j.value("x0", 0.0);
  p.x1 = j.value("x1", 6.283185307179586);
  p.nx = j.value("nx", 256);
  p.t_end = j.value("t_end", 1.0);
  p.bc = j.value("bc", std::string("periodic")) == "periodic" ? pss::Bc::periodic
                                                              : pss::Bc::dirichlet;
  auto f0 = [&](const pss::Expr& e) {
    return [&, e](double x) {
      pss::Binding b;
      b.set(X, x);
      return pss::eval(e, b);
    };
  };
  pss::SolveResult r = pss::solve_quasilinear(coeffs, f0(z0), f0(v0), p);
  (*diag)["completed"] = r.completed;
  (*diag)["steps"] = r.steps;
  (*diag)["ht"] = r.grid.ht;
  if (!r.diagnostic.empty()) (*diag)["diagnostic"] = r.diagnostic;
  return r.grid;
}

}  // namespace

int pss_solve(const char* problem_json, pss_grid** out, char** diag_json) {
  return guarded([&] {
    pss::Json diag = pss::Json::object();
    pss::SolutionGrid g = solve_from_json(pss::Json::parse(problem_json), &diag);
    *out = new pss_grid{std::move(g)};
    if (diag_json) *diag_json = dup_string(diag.dump(2));
  });
}

void pss_grid_free(pss_grid* g) { delete g; }

int pss_grid_csv(const pss_grid* g, const pss_sextet* s, char** csv) {
  return guarded([&] {
    *csv = dup_string(pss::grid_csv(g->g, s ? &s->ls.sextet : nullptr));
  });
}

int pss_curvature_report(const pss_grid* g, const pss_sextet* s, double ktol,
                         char** report_json, int* pass) {
  return guarded([&] {
    pss::MetricSample ms = pss::sample_metric(s->ls.sextet, g->g);
    pss::CurvatureReport rep = pss::curvature_estimate(ms, g->g, s->ls.sextet.delta);
    pss::GridResiduals res = pss::grid_residuals(s->ls.sextet, g->g);
    pss::Json j;
    j["delta"] = s->ls.sextet.delta;
    j["median_abs_K_plus_delta"] = rep.median_abs_K_plus_delta;
    j["max_abs_K_plus_delta"] = rep.max_abs_K_plus_delta;
    j["admissible_points"] = rep.points;
    j["median_abs_w"] = ms.median_abs_w;
    j["degeneracy_cutoff"] = ms.cutoff;
    j["masked_out"] = static_cast<int>(ms.w.size()) - rep.points;
    j["max_grid_residual"] = res.max_abs;
    j["max_grid_residual_scaled"] = res.max_scaled;
    j["ktol"] = ktol;
    bool ok = rep.median_abs_K_plus_delta <= ktol;
    j["pass"] = ok;
    *report_json = dup_string(j.dump(2));
    if (pass) *pass = ok ? 1 : 0;
  });
}

int pss_transport_check(const pss_grid* g, const pss_sextet* s, int problem_kind,
                        double base_x, double base_t, double step, double extent, double* out) {
  return guarded([&] {
    pss::ProblemKind kind = problem_kind == PSS_PROBLEM_SL2
                                ? pss::ProblemKind::sl2
                                : (problem_kind == PSS_PROBLEM_SU2 ? pss::ProblemKind::su2
                                                                   : pss::ProblemKind::hat3x3);
    pss::MatrixProblem p = pss::build_matrix_problem(s->ls.sextet, kind);
    int bi = static_cast<int>(std::lround((base_x - g->g.x0) / g->g.hx));
    int bj = static_cast<int>(std::lround((base_t - g->g.t0) / g->g.ht));
    *out = pss::transport_check(p, g->g, bi, bj, step, extent);
  });
}

}  // extern "C"
