#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "io/runner.hpp"

namespace pss {

namespace {

double max_scaled_at_samples(const std::vector<Expr>& exprs,
                             const std::vector<Assumption>& assumptions, uint64_t seed,
                             int points) {
  std::vector<Expr> live;
  for (const Expr& e : exprs)
    if (!e.is_literal_zero()) live.push_back(e);
  if (live.empty()) return 0.0;
  std::vector<Sym> vars = jet_vars_of(live);
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    Binding b = sample_admissible(vars, live, assumptions, rng);
    for (const Expr& e : live) {
      TermEval te = eval_terms(e, b);
      worst = std::max(worst, std::abs(te.value) / (1.0 + te.max_term));
    }
  }
  return worst;
}

class Stopwatch {
public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace

double sampled_structure_residual(const Sextet& s, const EvolutionRelation& rel, uint64_t seed,
                                  int points) {
  StructureResidual r = structure_residuals(s);
  std::vector<Expr> reduced = {on_shell_reduce(r.r1, rel), on_shell_reduce(r.r2, rel),
                               on_shell_reduce(r.r3, rel)};
  return max_scaled_at_samples(reduced, s.assumptions, seed, points);
}

double sampled_zcr_residual(const Sextet& s, const EvolutionRelation& rel, uint64_t seed,
                            int points) {
  MatrixProblem p =
      build_matrix_problem(s, s.delta == 1 ? ProblemKind::sl2 : ProblemKind::su2);
  ResidualMatrix r = zcr_residual(p, rel);
  std::vector<Expr> entries;
  for (const auto& row : r.re)
    for (const Expr& e : row) entries.push_back(e);
  for (const auto& row : r.im)
    for (const Expr& e : row) entries.push_back(e);
  return max_scaled_at_samples(entries, s.assumptions, seed, points);
}

namespace {

CheckResult nondegeneracy_check(const Sextet& s, uint64_t seed, int points) {
  CheckResult c;
  c.name = "nondegeneracy";
  std::vector<Expr> guards = s.entries();
  std::vector<Sym> vars = jet_vars_of(guards);
  Rng rng(seed);
  std::vector<Binding> pts;
  for (int i = 0; i < points; ++i)
    pts.push_back(sample_admissible(vars, guards, s.assumptions, rng));
  NondegeneracyReport rep = check_nondegeneracy(s, pts);
  c.pass = !rep.degenerate;
  c.details["max_abs_w"] = rep.max_abs;
  c.details["skipped"] = rep.skipped;
  c.details["degenerate"] = rep.degenerate;
  return c;
}

}  // namespace

RunReport run_catalog_fixture(const std::string& name, const ParamMap& params,
                              const RunOptions& opt) {
  ParamMap effective = params;
  if (opt.delta_override) effective["delta"] = Rational(*opt.delta_override);
  FixtureInstance inst = instantiate_fixture(name, effective);

  RunReport rep;
  rep.command = "catalog run " + name;
  rep.seed = opt.seed;
  rep.points = opt.points;
  rep.tol = opt.tol;
  Json pj = Json::object();
  for (const auto& [k, v] : inst.params) {
    std::ostringstream os;
    os << v;
    pj[k] = os.str();
  }
  rep.inputs = Json{{"fixture", name}, {"params", pj}};

  const Fixture& fx = find_fixture(name);
  if (fx.cls == FixtureClass::form_1_1) {
    {
      Stopwatch sw;
      CheckResult c;
      c.name = "coefficients-reproduce";
      PdeCoeffs computed = compute_pde_coeffs(inst.sextet);
      bool a = identically_zero(computed.A - inst.stated_coeffs->A, inst.sextet.assumptions,
                                opt.seed);
      bool b = identically_zero(computed.B - inst.stated_coeffs->B, inst.sextet.assumptions,
                                opt.seed);
      bool cc = identically_zero(computed.C - inst.stated_coeffs->C, inst.sextet.assumptions,
                                 opt.seed);
      c.pass = a && b && cc;
      c.details = Json{{"A", a}, {"B", b}, {"C", cc}};
      rep.checks.push_back(std::move(c));
      rep.timings_ms.emplace_back("coefficients-reproduce", sw.ms());
    }
    {
      Stopwatch sw;
      CheckResult c;
      c.name = "characterization";
      VerifyOptions vo;
      vo.seed = opt.seed;
      vo.points = opt.points;
      vo.tol = opt.tol;
      VerifyReport vr = verify_characterization(*inst.stated_coeffs, inst.sextet, vo);
      c.pass = vr.pass;
      c.details = verify_report_json(vr);
      rep.checks.push_back(std::move(c));
      rep.timings_ms.emplace_back("characterization", sw.ms());
    }
    {
      Stopwatch sw;
      CheckResult c;
      c.name = "structure-closure";
      double worst = sampled_structure_residual(inst.sextet, inst.relation, opt.seed, opt.points);
      c.pass = worst <= opt.tol;
      c.details["max_scaled_residual"] = worst;
      rep.checks.push_back(std::move(c));
      rep.timings_ms.emplace_back("structure-closure", sw.ms());
    }
  } else {
    Stopwatch sw;
    CheckResult c;
    c.name = "zcr-residual";
    double worst = sampled_zcr_residual(inst.sextet, inst.relation, opt.seed, opt.points);
    c.pass = worst <= opt.tol;
    c.details["max_scaled_residual"] = worst;
    rep.checks.push_back(std::move(c));
    rep.timings_ms.emplace_back("zcr-residual", sw.ms());
  }
  {
    Stopwatch sw;
    rep.checks.push_back(nondegeneracy_check(inst.sextet, opt.seed + 1, std::min(50, opt.points)));
    rep.timings_ms.emplace_back("nondegeneracy", sw.ms());
  }
  return rep;
}

RunReport run_verify_sextet(const LoadedSextet& ls, const RunOptions& opt,
                            const std::string& input_digest) {
  RunReport rep;
  rep.command = "verify";
  rep.seed = opt.seed;
  rep.points = opt.points;
  rep.tol = opt.tol;
  rep.inputs = Json{{"sextet_digest", input_digest}};

  PdeCoeffs coeffs;
  if (ls.relation && ls.relation->solved == kZtt) {
    coeffs = coeffs_from_relation(*ls.relation, ls.sextet.delta);
    rep.inputs["coefficients"] = "from relation";
  } else {
    coeffs = compute_pde_coeffs(ls.sextet);
    rep.inputs["coefficients"] = "computed from sextet";
  }
  rep.inputs["coeffs"] = coeffs_to_json(coeffs);

  {
    Stopwatch sw;
    CheckResult c;
    c.name = "characterization";
    VerifyOptions vo;
    vo.seed = opt.seed;
    vo.points = opt.points;
    vo.tol = opt.tol;
    VerifyReport vr = verify_characterization(coeffs, ls.sextet, vo);
    c.pass = vr.pass;
    c.details = verify_report_json(vr);
    rep.checks.push_back(std::move(c));
    rep.timings_ms.emplace_back("characterization", sw.ms());
  }
  if (ls.relation) {
    Stopwatch sw;
    CheckResult c;
    c.name = "structure-closure";
    double worst = sampled_structure_residual(ls.sextet, *ls.relation, opt.seed, opt.points);
    c.pass = worst <= opt.tol;
    c.details["max_scaled_residual"] = worst;
    rep.checks.push_back(std::move(c));
    rep.timings_ms.emplace_back("structure-closure", sw.ms());
  }
  rep.checks.push_back(nondegeneracy_check(ls.sextet, opt.seed + 1, std::min(50, opt.points)));
  return rep;
}

}  // namespace pss
