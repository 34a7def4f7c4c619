#include <cmath>

#include "families/families.hpp"

namespace pss {

namespace {

bool z_only(const Expr& e) {
  for (const Sym& s : free_symbols(e))
    if (s.is_jet() && s.jet_order() > 0) return false;
  return true;
}

struct Shape {
  Expr phi, varphi, psi21, psi22, psi31, psi32;
};

// f21 = phi z_x + psi21, f22 = phi z_t + psi22, f31 = varphi z_x + psi31,
// f32 = varphi z_t + psi32, everything a function of z.
Shape extract_shape(const Sextet& f) {
  if (!is_zero(diff(f.f21(), kZt)) || !is_zero(diff(f.f31(), kZt)))
    raise(Errc::shape_mismatch, "f21 and f31 must not depend on z_t");

  Shape s;
  s.phi = normalize(diff(f.f21(), kZx));
  s.varphi = normalize(diff(f.f31(), kZx));
  if (!z_only(s.phi) || !z_only(s.varphi))
    raise(Errc::shape_mismatch, "f21 and f31 must be affine in z_x with z-dependent slope");
  Expr phi_from_f22 = normalize(diff(f.f22(), kZt));
  Expr varphi_from_f32 = normalize(diff(f.f32(), kZt));
  if (!identically_zero(s.phi - phi_from_f22, f.assumptions) ||
      !identically_zero(s.varphi - varphi_from_f32, f.assumptions))
    raise(Errc::shape_mismatch, "f22/f32 slopes in z_t must match the z_x slopes of f21/f31");

  s.psi21 = normalize(f.f21() - s.phi * ex_sym(kZx));
  s.psi22 = normalize(f.f22() - s.phi * ex_sym(kZt));
  s.psi31 = normalize(f.f31() - s.varphi * ex_sym(kZx));
  s.psi32 = normalize(f.f32() - s.varphi * ex_sym(kZt));
  for (const Expr* p : {&s.psi21, &s.psi22, &s.psi31, &s.psi32}) {
    if (!z_only(*p)) raise(Errc::shape_mismatch, "psi_ij must be functions of z alone");
  }
  return s;
}

Expr random_nonzero_scalar(Rng& rng) {
  int num = rng.uniform_int(1, 4);       // magnitude in [1/2, 2]
  int sgn = rng.uniform_int(0, 1) ? 1 : -1;
  return Expr::constant(Rational(sgn * num, 2));
}

Expr random_quadratic_fn(Rng& rng) {
  Expr e = Expr::constant(Rational(rng.uniform_int(-4, 4), 2));
  int c1 = rng.uniform_int(-2, 2);
  int c2 = rng.uniform_int(-2, 2);
  if (c1 == 0 && c2 == 0) c1 = 1;
  return e + Expr::integer(c1) * ex_jet(0, 0) +
         Expr::constant(Rational(c2, 2)) * ex_jet(0, 0) * ex_jet(0, 0);
}

}  // namespace

VerifyReport verify_characterization(const PdeCoeffs& coeffs, const Sextet& f,
                                     const VerifyOptions& opt) {
  VerifyReport rep;
  Shape shape = extract_shape(f);
  rep.shape_ok = true;

  std::vector<Expr> pieces = {coeffs.A,  coeffs.B,    coeffs.C,    f.f11(),
                              f.f12(),   shape.phi,   shape.varphi, shape.psi21,
                              shape.psi22, shape.psi31, shape.psi32};
  std::set<Sym> syms;
  for (const Expr& e : pieces) collect_symbols(e, syms);
  for (const Assumption& a : f.assumptions) collect_symbols(a.expr, syms);

  Rng rng(opt.seed);
  std::string last_failure;
  for (int attempt = 0; attempt < 20; ++attempt) {
    // instantiate leftover abstract functions and free parameters
    std::map<Sym, Expr> psub;
    psub.emplace(Sym::param("delta"), Expr::integer(f.delta));
    std::map<std::string, Expr> fsub;
    std::map<std::string, std::string> inst_record;
    for (const Sym& s : syms) {
      if (s.kind == SymKind::param && s.name != "delta") {
        Expr v = random_nonzero_scalar(rng);
        psub.emplace(s, v);
        inst_record[s.name] = to_string(v);
      } else if (s.kind == SymKind::fn && !fsub.count(s.name)) {
        Expr v = random_quadratic_fn(rng);
        fsub.emplace(s.name, v);
        inst_record[s.name] = to_string(v);
      }
    }
    auto apply = [&](Expr e) {
      e = substitute(e, psub);
      for (const auto& [name, v] : fsub) e = instantiate_fn(e, name, v);
      return e;
    };

    Expr A = apply(coeffs.A), B = apply(coeffs.B), C = apply(coeffs.C);
    Expr F11 = apply(f.f11()), F12 = apply(f.f12());
    Expr phi = apply(shape.phi), vphi = apply(shape.varphi);
    Expr p21 = apply(shape.psi21), p22 = apply(shape.psi22);
    Expr p31 = apply(shape.psi31), p32 = apply(shape.psi32);
    Expr zx = ex_sym(kZx), zt = ex_sym(kZt);
    Expr d = Expr::integer(f.delta);

    Expr f11zt = diff(F11, kZt);
    std::array<Expr, 5> eq;
    eq[0] = Expr::add({-(f11zt * A), diff(F12, kZx)});
    eq[1] = Expr::add({-(f11zt * B), -diff(F11, kZx), diff(F12, kZt)});
    eq[2] = Expr::add({-(f11zt * C), -(zt * diff(F11, kZ)), zx * diff(F12, kZ),
                       (vphi * p21 - phi * p31) * zt, (phi * p32 - vphi * p22) * zx,
                       p32 * p21 - p22 * p31});
    eq[3] = Expr::add({-(zt * diff(p21, kZ)), zx * diff(p22, kZ), -(F11 * (vphi * zt + p32)),
                       (vphi * zx + p31) * F12});
    eq[4] = Expr::add({-(zt * diff(p31, kZ)), zx * diff(p32, kZ),
                       d * (-(F11 * (phi * zt + p22))), d * ((phi * zx + p21) * F12)});
    Expr w43 = (phi * zx + p21) * F12 - F11 * (phi * zt + p22);

    std::vector<Assumption> assumptions;
    for (const Assumption& a : f.assumptions) {
      Assumption b = a;
      b.expr = apply(a.expr);
      assumptions.push_back(std::move(b));
    }

    std::vector<Expr> guards(eq.begin(), eq.end());
    guards.push_back(w43);
    std::vector<Sym> vars = jet_vars_of(guards);

    // reject degenerate instantiations (f11 independent of z_t)
    if (identically_zero(f11zt, assumptions, opt.seed + static_cast<uint64_t>(attempt))) {
      last_failure = "instantiation made f11 independent of z_t";
      continue;
    }

    VerifyReport r;
    r.shape_ok = true;
    r.instantiations = inst_record;
    bool sampled_ok = true;
    try {
      for (int i = 0; i < opt.points; ++i) {
        Binding b = sample_admissible(vars, guards, assumptions, rng);
        for (int k = 0; k < 5; ++k) {
          TermEval te = eval_terms(eq[static_cast<size_t>(k)], b);
          double rel = std::abs(te.value) / (1.0 + te.max_term);
          r.eq_max[static_cast<size_t>(k)] = std::max(r.eq_max[static_cast<size_t>(k)], rel);
        }
        TermEval tw = eval_terms(w43, b);
        if (std::abs(tw.value) > 1e-6 * (1.0 + tw.max_term)) ++r.nondeg_points;
        ++r.points_used;
      }
    } catch (const Error& err) {
      last_failure = err.what();
      sampled_ok = false;
    }
    if (!sampled_ok) continue;

    double worst = 0.0;
    for (double m : r.eq_max) worst = std::max(worst, m);
    bool nondeg = 2 * r.nondeg_points > r.points_used;
    r.pass = worst <= opt.tol && nondeg;
    if (!r.pass) {
      r.failure = worst > opt.tol
                      ? "characterization residual above tolerance"
                      : "nondegeneracy condition failed at a majority of points";
    }
    return r;
  }
  raise(Errc::no_admissible_point,
        "verifier found no admissible instantiation: " + last_failure);
}

}  // namespace pss
