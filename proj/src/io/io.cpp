#include "io/io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pss {

namespace {

Expr parse_field(const Json& j, const char* key) {
  if (!j.contains(key)) raise(Errc::io_error, std::string("missing field: ") + key);
  if (!j.at(key).is_string()) raise(Errc::io_error, std::string(key) + " must be a string");
  return parse_expr(j.at(key).get<std::string>());
}

Expr parse_field_or_zero(const Json& j, const char* key) {
  if (!j.contains(key)) return Expr();
  return parse_field(j, key);
}

int sign_field(const Json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  int v = j.at(key).get<int>();
  if (v != 1 && v != -1) raise(Errc::io_error, std::string(key) + " must be +1 or -1");
  return v;
}

std::vector<Assumption> assumptions_from(const Json& j) {
  std::vector<Assumption> out;
  if (!j.contains("assumptions")) return out;
  for (const auto& a : j.at("assumptions")) out.push_back(parse_assumption(a.get<std::string>()));
  return out;
}

Json assumptions_to(const std::vector<Assumption>& a) {
  Json out = Json::array();
  for (const Assumption& x : a) out.push_back(assumption_text(x));
  return out;
}

Sym solved_from_name(const std::string& name) {
  Expr e = parse_expr(name);
  if (e.kind() != Expr::K::sym || !e.sym().is_jet())
    raise(Errc::io_error, "relation.solved must be a jet coordinate name");
  return e.sym();
}

}  // namespace

Json sextet_to_json(const Sextet& s, const EvolutionRelation* rel, const Json* params_meta) {
  Json j;
  j["delta"] = s.delta;
  j["f11"] = to_string(normalize(s.f11()));
  j["f12"] = to_string(normalize(s.f12()));
  j["f21"] = to_string(normalize(s.f21()));
  j["f22"] = to_string(normalize(s.f22()));
  j["f31"] = to_string(normalize(s.f31()));
  j["f32"] = to_string(normalize(s.f32()));
  j["assumptions"] = assumptions_to(s.assumptions);
  if (rel) {
    j["relation"] = {{"solved", rel->solved.str()}, {"rhs", to_string(normalize(rel->rhs))},
                     {"max_order", rel->max_order}};
  }
  if (params_meta) j["parameters"] = *params_meta;
  return j;
}

LoadedSextet sextet_from_json(const Json& j) {
  LoadedSextet out;
  int delta = j.value("delta", 1);
  out.sextet = make_sextet(parse_field_or_zero(j, "f11"), parse_field_or_zero(j, "f12"),
                           parse_field_or_zero(j, "f21"), parse_field_or_zero(j, "f22"),
                           parse_field_or_zero(j, "f31"), parse_field_or_zero(j, "f32"), delta,
                           assumptions_from(j));
  if (j.contains("relation")) {
    const Json& r = j.at("relation");
    out.relation = EvolutionRelation(solved_from_name(r.at("solved").get<std::string>()),
                                     parse_expr(r.at("rhs").get<std::string>()),
                                     r.value("max_order", 6));
  }
  return out;
}

Json coeffs_to_json(const PdeCoeffs& c) {
  return Json{{"A", to_string(normalize(c.A))}, {"B", to_string(normalize(c.B))},
              {"C", to_string(normalize(c.C))}, {"delta", c.delta}};
}

PdeCoeffs coeffs_from_json(const Json& j) {
  PdeCoeffs c;
  c.A = parse_field_or_zero(j, "A");
  c.B = parse_field_or_zero(j, "B");
  c.C = parse_field_or_zero(j, "C");
  c.delta = j.value("delta", 1);
  return c;
}

PdeCoeffs coeffs_from_relation(const EvolutionRelation& rel, int delta) {
  if (!(rel.solved == kZtt))
    raise(Errc::shape_mismatch, "coefficient extraction needs a relation solved for z_tt");
  PdeCoeffs c;
  c.delta = delta;
  c.A = normalize(diff(rel.rhs, kZxx));
  c.B = normalize(diff(rel.rhs, kZxt));
  c.C = normalize(rel.rhs - c.A * ex_sym(kZxx) - c.B * ex_sym(kZxt));
  for (const Expr* e : {&c.A, &c.B, &c.C}) {
    for (const Sym& s : free_symbols(*e)) {
      if (s.is_jet() && !(s == kZ || s == kZx || s == kZt))
        raise(Errc::shape_mismatch,
              "relation is not of the quasilinear form A z_xx + B z_xt + C");
    }
  }
  return c;
}

// ---------------------------------------------------------------------------

Json family_to_json(const FamilySpec& spec) {
  Json j;
  j["variant"] = family_variant_name(spec);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        j["assumptions"] = assumptions_to(s.assumptions);
        if constexpr (std::is_same_v<T, CaseA>) {
          j["phi"] = to_string(normalize(s.phi));
          j["varphi"] = to_string(normalize(s.varphi));
          j["psi21"] = to_string(normalize(s.psi21));
          j["psi22"] = to_string(normalize(s.psi22));
          j["psi31"] = to_string(normalize(s.psi31));
          j["psi32"] = to_string(normalize(s.psi32));
          j["delta"] = s.delta;
        } else if constexpr (std::is_same_v<T, CaseB1>) {
          j["h"] = to_string(normalize(s.h));
          j["phi"] = to_string(normalize(s.phi));
          j["rho"] = to_string(normalize(s.rho));
          j["c1"] = to_string(normalize(s.c1));
          j["c2"] = to_string(normalize(s.c2));
          j["delta"] = s.delta;
          j["sign_rho2_minus_delta"] = s.sign;
        } else if constexpr (std::is_same_v<T, CaseB2>) {
          j["h"] = to_string(normalize(s.h));
          j["phi"] = to_string(normalize(s.phi));
          j["psi"] = to_string(normalize(s.psi));
          j["chi"] = to_string(normalize(s.chi));
          j["sign"] = s.sign;
        } else if constexpr (std::is_same_v<T, Cor33>) {
          j["psi21"] = to_string(normalize(s.psi21));
          j["psi22"] = to_string(normalize(s.psi22));
          j["psi31"] = to_string(normalize(s.psi31));
          j["psi32"] = to_string(normalize(s.psi32));
          j["delta"] = s.delta;
        } else if constexpr (std::is_same_v<T, Cor34>) {
          j["h"] = to_string(normalize(s.h));
          j["rho"] = to_string(normalize(s.rho));
          j["m"] = to_string(normalize(s.m));
          j["eta"] = to_string(normalize(s.eta));
          j["delta"] = s.delta;
          j["sign_rho2_minus_delta"] = s.sign;
        } else {
          j["h"] = to_string(normalize(s.h));
          j["psi"] = to_string(normalize(s.psi));
          j["chi"] = to_string(normalize(s.chi));
          j["sign"] = s.sign;
        }
      },
      spec);
  return j;
}

FamilySpec family_from_json(const Json& j) {
  std::string variant = j.value("variant", "");
  auto assume = assumptions_from(j);
  if (variant == "case_a") {
    CaseA s;
    s.phi = parse_field_or_zero(j, "phi");
    s.varphi = parse_field_or_zero(j, "varphi");
    s.psi21 = parse_field_or_zero(j, "psi21");
    s.psi22 = parse_field_or_zero(j, "psi22");
    s.psi31 = parse_field_or_zero(j, "psi31");
    s.psi32 = parse_field_or_zero(j, "psi32");
    s.delta = sign_field(j, "delta", 1);
    s.assumptions = assume;
    return s;
  }
  if (variant == "case_b1") {
    CaseB1 s;
    s.h = parse_field(j, "h");
    s.phi = parse_field_or_zero(j, "phi");
    s.rho = parse_field(j, "rho");
    s.c1 = parse_field_or_zero(j, "c1");
    s.c2 = parse_field_or_zero(j, "c2");
    s.delta = sign_field(j, "delta", 1);
    s.sign = sign_field(j, "sign_rho2_minus_delta", 1);
    s.assumptions = assume;
    return s;
  }
  if (variant == "case_b2") {
    CaseB2 s;
    s.h = parse_field(j, "h");
    s.phi = parse_field_or_zero(j, "phi");
    s.psi = parse_field_or_zero(j, "psi");
    s.chi = parse_field_or_zero(j, "chi");
    s.sign = sign_field(j, "sign", 1);
    s.assumptions = assume;
    return s;
  }
  if (variant == "cor33") {
    Cor33 s;
    s.psi21 = parse_field_or_zero(j, "psi21");
    s.psi22 = parse_field_or_zero(j, "psi22");
    s.psi31 = parse_field_or_zero(j, "psi31");
    s.psi32 = parse_field_or_zero(j, "psi32");
    s.delta = sign_field(j, "delta", 1);
    s.assumptions = assume;
    return s;
  }
  if (variant == "cor34") {
    Cor34 s;
    s.h = parse_field(j, "h");
    s.rho = parse_field(j, "rho");
    s.m = parse_field_or_zero(j, "m");
    s.eta = parse_field(j, "eta");
    s.delta = sign_field(j, "delta", 1);
    s.sign = sign_field(j, "sign_rho2_minus_delta", 1);
    s.assumptions = assume;
    return s;
  }
  if (variant == "cor35") {
    Cor35 s;
    s.h = parse_field(j, "h");
    s.psi = parse_field(j, "psi");
    s.chi = parse_field_or_zero(j, "chi");
    s.sign = sign_field(j, "sign", 1);
    s.assumptions = assume;
    return s;
  }
  raise(Errc::io_error, "unknown family variant: " + variant);
}

Json build_result_to_json(const BuildResult& r) {
  EvolutionRelation rel = r.relation();
  Json j;
  j["coeffs"] = coeffs_to_json(r.coeffs);
  j["sextet"] = sextet_to_json(r.sextet, &rel);
  j["family"] = family_to_json(r.provenance);
  return j;
}

Json fixture_export_json(const std::string& name, const ParamMap& params) {
  const Fixture& f = find_fixture(name);
  FixtureInstance inst = instantiate_fixture(name, params);
  Json meta;
  meta["name"] = f.name;
  meta["title"] = f.title;
  meta["class"] = f.cls == FixtureClass::form_1_1 ? "form-(1.1)" : "generic-ZCR";
  Json pj = Json::object();
  for (const ParamSpec& ps : f.params) {
    std::ostringstream def;
    def << ps.default_value;
    Json entry;
    entry["default"] = def.str();
    entry["constraint"] = ps.constraint;
    std::ostringstream used;
    used << inst.params.at(ps.name);
    entry["value"] = used.str();
    pj[ps.name] = entry;
  }
  meta["parameters"] = pj;
  Json j = sextet_to_json(inst.sextet, &inst.relation);
  j["fixture"] = meta;
  if (inst.stated_coeffs) j["coeffs"] = coeffs_to_json(*inst.stated_coeffs);
  if (inst.family) j["family"] = family_to_json(*inst.family);
  return j;
}

// ---------------------------------------------------------------------------

std::string grid_csv(const SolutionGrid& g, const Sextet* f) {
  std::ostringstream os;
  os.precision(17);
  os << "x,t,z,K,w,r1,r2,r3\n";
  std::optional<MetricSample> ms;
  std::optional<CurvatureReport> rep;
  std::optional<GridResiduals> res;
  if (f) {
    ms = sample_metric(*f, g);
    res = grid_residuals(*f, g);
    try {
      rep = curvature_estimate(*ms, g, f->delta);
    } catch (const Error&) {
      rep.reset();  // grids can be too coarse or fully masked; leave K empty
    }
  }
  auto cell = [&](double v) {
    if (std::isfinite(v))
      os << v;
    // NaN prints as an empty cell
  };
  for (int j = 0; j < g.nt; ++j)
    for (int i = 0; i < g.nx; ++i) {
      size_t k = g.idx(i, j);
      os << g.x(i) << "," << g.t(j) << "," << g.z[k] << ",";
      cell(rep ? rep->K[k] : std::numeric_limits<double>::quiet_NaN());
      os << ",";
      cell(ms ? ms->w[k] : std::numeric_limits<double>::quiet_NaN());
      os << ",";
      cell(res ? res->r1[k] : std::numeric_limits<double>::quiet_NaN());
      os << ",";
      cell(res ? res->r2[k] : std::numeric_limits<double>::quiet_NaN());
      os << ",";
      cell(res ? res->r3[k] : std::numeric_limits<double>::quiet_NaN());
      os << "\n";
    }
  return os.str();
}

// ---------------------------------------------------------------------------

bool RunReport::pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

Json RunReport::to_json(bool with_timings) const {
  Json j;
  j["command"] = command;
  j["inputs"] = inputs;
  j["seed"] = seed;
  j["points"] = points;
  j["tol"] = tol;
  Json cs = Json::array();
  for (const CheckResult& c : checks)
    cs.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"details", c.details}});
  j["checks"] = cs;
  j["pass"] = pass();
  if (with_timings) {
    Json t = Json::object();
    for (const auto& [k, v] : timings_ms) t[k] = v;
    j["timings_ms"] = t;
  }
  return j;
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << "command: " << command << "\n";
  os << "seed=" << seed << " points=" << points << " tol=" << tol << "\n";
  for (const CheckResult& c : checks) {
    os << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
    if (!c.details.is_null() && !c.details.empty()) os << "  " << c.details.dump();
    os << "\n";
  }
  for (const auto& [k, v] : timings_ms) os << "time " << k << ": " << v << " ms\n";
  os << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

Json verify_report_json(const VerifyReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["shape_ok"] = r.shape_ok;
  for (int k = 0; k < 5; ++k)
    j["eq" + std::to_string(k + 1)] = r.eq_max[static_cast<size_t>(k)];
  j["points"] = r.points_used;
  j["nondegenerate_points"] = r.nondeg_points;
  if (!r.failure.empty()) j["failure"] = r.failure;
  if (!r.instantiations.empty()) {
    Json inst = Json::object();
    for (const auto& [k, v] : r.instantiations) inst[k] = v;
    j["instantiations"] = inst;
  }
  return j;
}

std::string fnv1a_digest(const std::string& data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace pss
