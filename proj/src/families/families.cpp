#include "families/families.hpp"

#include <cmath>
#include <type_traits>

namespace pss {

namespace {

bool z_only(const Expr& e) {
  for (const Sym& s : free_symbols(e))
    if (s.is_jet() && s.jet_order() > 0) return false;
  return true;
}

bool scalar_only(const Expr& e) {
  for (const Sym& s : free_symbols(e))
    if (s.is_jet() || s.kind == SymKind::fn) return false;
  return true;
}

bool first_order_jet(const Expr& e) {
  for (const Sym& s : free_symbols(e))
    if (s.is_jet() && !(s == kZ || s == kZx || s == kZt)) return false;
  return true;
}

void require_z_only(const Expr& e, const char* what) {
  if (!z_only(e)) raise(Errc::invalid_spec, std::string(what) + " must be a function of z alone");
}

void require_scalar(const Expr& e, const char* what) {
  if (!scalar_only(e))
    raise(Errc::invalid_spec, std::string(what) + " must be a constant or parameter");
}

void require_first_order(const Expr& e, const char* what) {
  if (!first_order_jet(e))
    raise(Errc::invalid_spec, std::string(what) + " must depend on (z, z_x, z_t) only");
}

Expr random_quadratic(Rng& rng) {
  Expr e = Expr::constant(Rational(rng.uniform_int(-4, 4), 2));
  int c1 = rng.uniform_int(-2, 2);
  int c2 = rng.uniform_int(-2, 2);
  if (c1 == 0 && c2 == 0) c1 = 1;
  return e + Expr::integer(c1) * ex_jet(0, 0) +
         Expr::constant(Rational(c2, 2)) * ex_jet(0, 0) * ex_jet(0, 0);
}

// The symbol "delta" inside spec expressions always means the declared sign;
// bind it before any formula work so results cannot drift from the declaration.
Expr bind_delta(const Expr& e, int delta) {
  std::map<Sym, Expr> sub{{Sym::param("delta"), Expr::integer(delta)}};
  return substitute(e, sub);
}

std::vector<Assumption> bind_delta(const std::vector<Assumption>& as, int delta) {
  std::vector<Assumption> out = as;
  for (Assumption& a : out) a.expr = bind_delta(a.expr, delta);
  return out;
}

}  // namespace

bool identically_zero(const Expr& e, const std::vector<Assumption>& assumptions, uint64_t seed) {
  if (is_zero(e)) return true;
  Rng rng(seed);
  for (int trial = 0; trial < 3; ++trial) {
    Expr inst = e;
    for (const Sym& s : free_symbols(e)) {
      if (s.kind == SymKind::fn) inst = instantiate_fn(inst, s.name, random_quadratic(rng));
    }
    std::map<Sym, Expr> dsub;
    dsub.emplace(Sym::param("delta"), Expr::integer(trial % 2 == 0 ? 1 : -1));
    inst = substitute(inst, dsub);
    std::vector<Sym> vars;
    for (const Sym& s : free_symbols(inst)) vars.push_back(s);
    try {
      for (int i = 0; i < 25; ++i) {
        Binding b = sample_admissible(vars, {inst}, assumptions, rng);
        TermEval te = eval_terms(inst, b);
        if (std::abs(te.value) > 1e-9 * (1.0 + te.max_term)) return false;
      }
    } catch (const Error&) {
      continue;  // no admissible samples under this instantiation; redraw
    }
    return true;
  }
  // nothing admissible to probe; treat a syntactically nonzero expression as nonzero
  return false;
}

PdeCoeffs compute_pde_coeffs(const Sextet& f) {
  Expr f11zt = diff(f.f11(), kZt);
  if (identically_zero(f11zt, f.assumptions))
    raise(Errc::degenerate_f11, "f11 has identically vanishing z_t derivative");
  PdeCoeffs out;
  out.delta = f.delta;
  Expr delta_term = f.f32() * f.f21() - f.f31() * f.f22();
  out.A = normalize(diff(f.f12(), kZx) / f11zt);
  out.B = normalize((-diff(f.f11(), kZx) + diff(f.f12(), kZt)) / f11zt);
  out.C = normalize(
      (-(ex_sym(kZt) * diff(f.f11(), kZ)) + ex_sym(kZx) * diff(f.f12(), kZ) + delta_term) /
      f11zt);
  return out;
}

EvolutionRelation BuildResult::relation(int max_order) const {
  Expr rhs = coeffs.A * ex_sym(kZxx) + coeffs.B * ex_sym(kZxt) + coeffs.C;
  return EvolutionRelation(kZtt, rhs, max_order);
}

const char* family_variant_name(const FamilySpec& spec) {
  switch (spec.index()) {
    case 0: return "case_a";
    case 1: return "case_b1";
    case 2: return "case_b2";
    case 3: return "cor33";
    case 4: return "cor34";
    case 5: return "cor35";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

BuildResult build_case_a(const CaseA& spec0) {
  CaseA spec = spec0;
  for (Expr* e : {&spec.phi, &spec.varphi, &spec.psi21, &spec.psi22, &spec.psi31, &spec.psi32})
    *e = bind_delta(*e, spec.delta);
  spec.assumptions = bind_delta(spec.assumptions, spec.delta);
  require_z_only(spec.phi, "phi");
  require_z_only(spec.varphi, "varphi");
  require_z_only(spec.psi21, "psi21");
  require_z_only(spec.psi22, "psi22");
  require_z_only(spec.psi31, "psi31");
  require_z_only(spec.psi32, "psi32");

  Expr zx = ex_sym(kZx), zt = ex_sym(kZt);
  Expr d = Expr::integer(spec.delta);
  Expr f21 = spec.phi * zx + spec.psi21;
  Expr f22 = spec.phi * zt + spec.psi22;
  Expr f31 = spec.varphi * zx + spec.psi31;
  Expr f32 = spec.varphi * zt + spec.psi32;
  Expr Delta = f32 * f21 - f31 * f22;
  if (identically_zero(Delta, spec.assumptions))
    raise(Errc::delta_vanishes, "Delta = f32 f21 - f31 f22 vanishes identically; use case (b)");

  auto dz = [](const Expr& e) { return diff(e, kZ); };
  Expr f11 = (((-f21) * dz(spec.psi21) + d * f31 * dz(spec.psi31)) * zt +
              (f21 * dz(spec.psi22) - d * f31 * dz(spec.psi32)) * zx) /
             Delta;
  Expr f12 = (((-f22) * dz(spec.psi21) + d * f32 * dz(spec.psi31)) * zt +
              (f22 * dz(spec.psi22) - d * f32 * dz(spec.psi32)) * zx) /
             Delta;

  BuildResult out;
  out.sextet = make_sextet(normalize(f11), normalize(f12), normalize(f21), normalize(f22),
                           normalize(f31), normalize(f32), spec.delta, spec.assumptions);
  out.coeffs = compute_pde_coeffs(out.sextet);
  out.provenance = spec;
  return out;
}

namespace {

BuildResult build_delta_zero(const Expr& h, const Expr& phi, const Expr& rho, const Expr& psi,
                             const Expr& chi, int delta, std::vector<Assumption> assumptions,
                             FamilySpec provenance) {
  require_first_order(h, "h");
  require_z_only(phi, "phi");
  require_z_only(rho, "rho");
  if (identically_zero(diff(h, kZt), assumptions))
    raise(Errc::degenerate_f11, "h must depend on z_t");

  Expr zx = ex_sym(kZx), zt = ex_sym(kZt);
  Expr d = Expr::integer(delta);
  Expr f21 = phi * zx + psi;
  Expr f22 = phi * zt + chi;
  Expr f12 =
      ((phi * zt + chi) * h + d * zt * diff(rho * psi, kZ) - d * zx * diff(rho * chi, kZ)) /
      (phi * zx + psi);

  BuildResult out;
  out.sextet = make_sextet(normalize(h), normalize(f12), normalize(f21), normalize(f22),
                           normalize(rho * f21), normalize(rho * f22), delta,
                           std::move(assumptions));
  out.coeffs = compute_pde_coeffs(out.sextet);
  out.provenance = std::move(provenance);
  return out;
}

// The declared sign of rho^2 - delta must hold somewhere on the sampling box.
void check_sign_assumption(const Expr& rho, int delta, int sign) {
  Expr u = Expr::integer(sign) * (rho * rho - Expr::integer(delta));
  Rng rng(0x516eull);
  Expr inst = u;
  for (const Sym& s : free_symbols(u))
    if (s.kind == SymKind::fn) inst = instantiate_fn(inst, s.name, random_quadratic(rng));
  std::vector<Sym> vars;
  for (const Sym& s : free_symbols(inst)) vars.push_back(s);
  for (int i = 0; i < 400; ++i) {
    Binding b;
    for (const Sym& v : vars) b.set(v, rng.uniform(-2.0, 2.0));
    GuardedEval g = eval_guarded(inst, b, 1e-6);
    if (g.value && *g.value > 1e-3) return;
  }
  raise(Errc::sign_assumption_violated,
        "declared sign of rho^2 - delta holds nowhere on the sampling box");
}

}  // namespace

BuildResult build_case_b(const CaseB1& spec0) {
  CaseB1 spec = spec0;
  for (Expr* e : {&spec.h, &spec.phi, &spec.rho, &spec.c1, &spec.c2})
    *e = bind_delta(*e, spec.delta);
  spec.assumptions = bind_delta(spec.assumptions, spec.delta);
  require_z_only(spec.rho, "rho");
  require_scalar(spec.c1, "c1");
  require_scalar(spec.c2, "c2");
  if (identically_zero(diff(spec.rho, kZ), spec.assumptions))
    raise(Errc::invalid_spec, "case (b.1) needs a nonconstant rho");
  if (is_zero(spec.c1) && is_zero(spec.c2))
    raise(Errc::invalid_spec, "case (b.1) needs c1^2 + c2^2 != 0");
  if (is_zero(spec.phi) && is_zero(spec.c1))
    raise(Errc::invalid_spec, "case (b.1) needs phi^2 + c1^2 != 0");
  if (spec.sign != 1 && spec.sign != -1)
    raise(Errc::invalid_spec, "sign of rho^2 - delta must be +1 or -1");
  check_sign_assumption(spec.rho, spec.delta, spec.sign);

  Expr u = Expr::integer(spec.sign) * (spec.rho * spec.rho - Expr::integer(spec.delta));
  Expr root = Expr::call(Fn1::sqrt, u);
  return build_delta_zero(spec.h, spec.phi, spec.rho, spec.c1 / root, spec.c2 / root, spec.delta,
                          spec.assumptions, spec);
}

BuildResult build_case_b(const CaseB2& spec0) {
  CaseB2 spec = spec0;
  for (Expr* e : {&spec.h, &spec.phi, &spec.psi, &spec.chi}) *e = bind_delta(*e, 1);
  spec.assumptions = bind_delta(spec.assumptions, 1);
  require_z_only(spec.psi, "psi");
  require_z_only(spec.chi, "chi");
  if (spec.sign != 1 && spec.sign != -1)
    raise(Errc::invalid_spec, "case (b.2) needs rho = +1 or rho = -1");
  if (identically_zero(diff(spec.psi, kZ), spec.assumptions) &&
      identically_zero(diff(spec.chi, kZ), spec.assumptions))
    raise(Errc::invalid_spec, "case (b.2) needs (psi')^2 + (chi')^2 != 0");
  if (is_zero(spec.phi) && identically_zero(spec.psi, spec.assumptions))
    raise(Errc::invalid_spec, "case (b.2) needs phi^2 + psi^2 != 0");
  return build_delta_zero(spec.h, spec.phi, Expr::integer(spec.sign), spec.psi, spec.chi,
                          /*delta=*/1, spec.assumptions, spec);
}

BuildResult build_cor33(const Cor33& spec0) {
  Cor33 spec = spec0;
  for (Expr* e : {&spec.psi21, &spec.psi22, &spec.psi31, &spec.psi32})
    *e = bind_delta(*e, spec.delta);
  spec.assumptions = bind_delta(spec.assumptions, spec.delta);
  require_z_only(spec.psi21, "psi21");
  require_z_only(spec.psi22, "psi22");
  require_z_only(spec.psi31, "psi31");
  require_z_only(spec.psi32, "psi32");

  Expr Delta0 = spec.psi32 * spec.psi21 - spec.psi31 * spec.psi22;
  if (identically_zero(Delta0, spec.assumptions))
    raise(Errc::delta0_vanishes, "Delta0 = psi32 psi21 - psi31 psi22 vanishes identically");
  Expr d = Expr::integer(spec.delta);
  Expr H = spec.psi31 * spec.psi31 - d * spec.psi21 * spec.psi21;
  if (identically_zero(diff(H, kZ), spec.assumptions))
    raise(Errc::h_constant, "H = psi31^2 - delta psi21^2 is constant");

  Expr zx = ex_sym(kZx), zt = ex_sym(kZt);
  auto dz = [](const Expr& e) { return diff(e, kZ); };
  Expr f11 = (((-spec.psi21) * dz(spec.psi21) + d * spec.psi31 * dz(spec.psi31)) * zt +
              (spec.psi21 * dz(spec.psi22) - d * spec.psi31 * dz(spec.psi32)) * zx) /
             Delta0;
  Expr f12 = (((-spec.psi22) * dz(spec.psi21) + d * spec.psi32 * dz(spec.psi31)) * zt +
              (spec.psi22 * dz(spec.psi22) - d * spec.psi32 * dz(spec.psi32)) * zx) /
             Delta0;

  BuildResult out;
  out.sextet =
      make_sextet(normalize(f11), normalize(f12), normalize(spec.psi21), normalize(spec.psi22),
                  normalize(spec.psi31), normalize(spec.psi32), spec.delta, spec.assumptions);
  out.coeffs = compute_pde_coeffs(out.sextet);
  out.provenance = spec;
  return out;
}

BuildResult build_cor34(const Cor34& spec0) {
  Cor34 spec = spec0;
  for (Expr* e : {&spec.h, &spec.rho, &spec.m, &spec.eta}) *e = bind_delta(*e, spec.delta);
  spec.assumptions = bind_delta(spec.assumptions, spec.delta);
  require_z_only(spec.rho, "rho");
  require_scalar(spec.m, "m");
  require_scalar(spec.eta, "eta");
  if (is_zero(spec.eta)) raise(Errc::invalid_spec, "corollary 3.4 needs eta != 0");
  if (identically_zero(diff(spec.rho, kZ), spec.assumptions))
    raise(Errc::invalid_spec, "corollary 3.4 needs a nonconstant rho");
  require_first_order(spec.h, "h");
  if (identically_zero(diff(spec.h, kZt), spec.assumptions))
    raise(Errc::degenerate_f11, "h must depend on z_t");
  check_sign_assumption(spec.rho, spec.delta, spec.sign);

  Expr zx = ex_sym(kZx), zt = ex_sym(kZt);
  Expr u = Expr::integer(spec.sign) * (spec.rho * spec.rho - Expr::integer(spec.delta));
  Expr psi = spec.eta / Expr::call(Fn1::sqrt, u);
  Expr rr = diff(spec.rho, kZ) / (spec.rho * spec.rho - Expr::integer(spec.delta));
  Expr f12 = spec.m * spec.h - rr * (zt - spec.m * zx);

  BuildResult out;
  out.sextet = make_sextet(normalize(spec.h), normalize(f12), normalize(psi),
                           normalize(spec.m * psi), normalize(spec.rho * psi),
                           normalize(spec.m * spec.rho * psi), spec.delta, spec.assumptions);
  out.coeffs = compute_pde_coeffs(out.sextet);
  out.provenance = spec;
  return out;
}

BuildResult build_cor35(const Cor35& spec0) {
  Cor35 spec = spec0;
  for (Expr* e : {&spec.h, &spec.psi, &spec.chi}) *e = bind_delta(*e, 1);
  spec.assumptions = bind_delta(spec.assumptions, 1);
  require_z_only(spec.psi, "psi");
  require_z_only(spec.chi, "chi");
  if (spec.sign != 1 && spec.sign != -1)
    raise(Errc::invalid_spec, "corollary 3.5 needs the sign choice +1 or -1");
  if (identically_zero(spec.psi, spec.assumptions))
    raise(Errc::psi_vanishes, "corollary 3.5 needs psi != 0");
  if (identically_zero(diff(spec.psi, kZ), spec.assumptions) &&
      identically_zero(diff(spec.chi, kZ), spec.assumptions))
    raise(Errc::invalid_spec, "corollary 3.5 needs (psi')^2 + (chi')^2 != 0");
  require_first_order(spec.h, "h");
  if (identically_zero(diff(spec.h, kZt), spec.assumptions))
    raise(Errc::degenerate_f11, "h must depend on z_t");

  Expr zx = ex_sym(kZx), zt = ex_sym(kZt);
  Expr s = Expr::integer(spec.sign);
  Expr f12 =
      (spec.chi * spec.h + s * zt * diff(spec.psi, kZ) - s * zx * diff(spec.chi, kZ)) / spec.psi;

  BuildResult out;
  out.sextet = make_sextet(normalize(spec.h), normalize(f12), normalize(spec.psi),
                           normalize(spec.chi), normalize(s * spec.psi), normalize(s * spec.chi),
                           /*delta=*/1, spec.assumptions);
  out.coeffs = compute_pde_coeffs(out.sextet);
  out.provenance = spec;
  return out;
}

BuildResult build_family(const FamilySpec& spec) {
  return std::visit(
      [](const auto& s) -> BuildResult {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CaseA>) return build_case_a(s);
        else if constexpr (std::is_same_v<T, CaseB1>) return build_case_b(s);
        else if constexpr (std::is_same_v<T, CaseB2>) return build_case_b(s);
        else if constexpr (std::is_same_v<T, Cor33>) return build_cor33(s);
        else if constexpr (std::is_same_v<T, Cor34>) return build_cor34(s);
        else return build_cor35(s);
      },
      spec);
}

}  // namespace pss
