#include "zcr/zcr.hpp"

#include <cmath>

namespace pss {

Sextet make_sextet(Expr f11, Expr f12, Expr f21, Expr f22, Expr f31, Expr f32, int delta,
                   std::vector<Assumption> assumptions) {
  if (delta != 1 && delta != -1) raise(Errc::invalid_spec, "delta must be +1 or -1");
  // a sextet's curvature sign is concrete; bind the symbol "delta" in the
  // entries so expressions cannot drift from the declaration
  std::map<Sym, Expr> sub{{Sym::param("delta"), Expr::integer(delta)}};
  Sextet s;
  s.f[0][0] = substitute(f11, sub);
  s.f[0][1] = substitute(f12, sub);
  s.f[1][0] = substitute(f21, sub);
  s.f[1][1] = substitute(f22, sub);
  s.f[2][0] = substitute(f31, sub);
  s.f[2][1] = substitute(f32, sub);
  s.delta = delta;
  for (Assumption& a : assumptions) a.expr = substitute(a.expr, sub);
  s.assumptions = std::move(assumptions);
  return s;
}

StructureResidual structure_residuals(const Sextet& s) {
  Expr d = Expr::integer(s.delta);
  StructureResidual r;
  r.r1 = Expr::add({total_dx(s.f12()), -total_dt(s.f11()), s.f21() * s.f32(),
                    -(s.f31() * s.f22())});
  r.r2 = Expr::add({total_dx(s.f22()), -total_dt(s.f21()), -(s.f11() * s.f32()),
                    s.f12() * s.f31()});
  r.r3 = Expr::add({total_dx(s.f32()), -total_dt(s.f31()), -(d * s.f11() * s.f22()),
                    d * s.f12() * s.f21()});
  return r;
}

const char* problem_kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::sl2: return "sl2";
    case ProblemKind::su2: return "su2";
    case ProblemKind::hat3x3: return "hat3x3";
  }
  return "?";
}

namespace {

using Mat = std::vector<std::vector<Expr>>;

Mat zeros(int n) { return Mat(static_cast<size_t>(n), std::vector<Expr>(static_cast<size_t>(n))); }

Mat column_matrix(const Sextet& s, int col, ProblemKind kind) {
  const Expr& f1 = s.f[0][static_cast<size_t>(col)];
  const Expr& f2 = s.f[1][static_cast<size_t>(col)];
  const Expr& f3 = s.f[2][static_cast<size_t>(col)];
  Expr half = ex_rat(1, 2);
  switch (kind) {
    case ProblemKind::sl2: {
      Mat m = zeros(2);
      m[0][0] = half * f2;
      m[0][1] = half * (f1 - f3);
      m[1][0] = half * (f1 + f3);
      m[1][1] = -(half * f2);
      return m;
    }
    case ProblemKind::su2: {
      // real part of (1/2)[[i f2, f1 + i f3], [-f1 + i f3, -i f2]]
      Mat m = zeros(2);
      m[0][1] = half * f1;
      m[1][0] = -(half * f1);
      return m;
    }
    case ProblemKind::hat3x3: {
      Mat m = zeros(3);
      Expr d = Expr::integer(s.delta);
      m[0][1] = f1;
      m[0][2] = f2;
      m[1][0] = d * f1;
      m[1][2] = f3;
      m[2][0] = d * f2;
      m[2][1] = -f3;
      return m;
    }
  }
  return zeros(2);
}

Mat column_matrix_im(const Sextet& s, int col) {
  // imaginary part of the su(2) column matrix
  const Expr& f2 = s.f[1][static_cast<size_t>(col)];
  const Expr& f3 = s.f[2][static_cast<size_t>(col)];
  Expr half = ex_rat(1, 2);
  Mat m = zeros(2);
  m[0][0] = half * f2;
  m[0][1] = half * f3;
  m[1][0] = half * f3;
  m[1][1] = -(half * f2);
  return m;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  int n = static_cast<int>(a.size());
  Mat out = zeros(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<Expr> terms;
      for (int k = 0; k < n; ++k) {
        const Expr& x = a[static_cast<size_t>(i)][static_cast<size_t>(k)];
        const Expr& y = b[static_cast<size_t>(k)][static_cast<size_t>(j)];
        if (x.is_literal_zero() || y.is_literal_zero()) continue;
        terms.push_back(x * y);
      }
      out[static_cast<size_t>(i)][static_cast<size_t>(j)] = Expr::add(std::move(terms));
    }
  return out;
}

Mat mat_sub(const Mat& a, const Mat& b) {
  int n = static_cast<int>(a.size());
  Mat out = zeros(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          a[static_cast<size_t>(i)][static_cast<size_t>(j)] -
          b[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return out;
}

Mat mat_map(const Mat& a, const std::function<Expr(const Expr&)>& f) {
  int n = static_cast<int>(a.size());
  Mat out = zeros(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          f(a[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return out;
}

}  // namespace

MatrixProblem build_matrix_problem(const Sextet& s, ProblemKind kind) {
  if (kind == ProblemKind::sl2 && s.delta != 1)
    raise(Errc::kind_mismatch, "sl2 problems require delta = +1");
  if (kind == ProblemKind::su2 && s.delta != -1)
    raise(Errc::kind_mismatch, "su2 problems require delta = -1");

  MatrixProblem p;
  p.kind = kind;
  p.size = kind == ProblemKind::hat3x3 ? 3 : 2;
  p.delta = s.delta;
  p.Xre = column_matrix(s, 0, kind);
  p.Tre = column_matrix(s, 1, kind);
  if (kind == ProblemKind::su2) {
    p.Xim = column_matrix_im(s, 0);
    p.Tim = column_matrix_im(s, 1);
  } else {
    p.Xim = zeros(p.size);
    p.Tim = zeros(p.size);
  }
  return p;
}

ResidualMatrix zcr_residual_raw(const MatrixProblem& p) {
  ResidualMatrix r;
  r.size = p.size;
  // commutator with complex split: [X,T] = (XT - TX)
  Mat re_comm = mat_sub(mat_sub(mat_mul(p.Xre, p.Tre), mat_mul(p.Xim, p.Tim)),
                        mat_sub(mat_mul(p.Tre, p.Xre), mat_mul(p.Tim, p.Xim)));
  // (XT)im - (TX)im = (Xre Tim + Xim Tre) - (Tre Xim + Tim Xre)
  Mat im_comm = mat_sub(mat_sub(mat_mul(p.Xre, p.Tim), mat_mul(p.Tre, p.Xim)),
                        mat_sub(mat_mul(p.Tim, p.Xre), mat_mul(p.Xim, p.Tre)));
  Mat dtX_re = mat_map(p.Xre, total_dt);
  Mat dxT_re = mat_map(p.Tre, total_dx);
  Mat dtX_im = mat_map(p.Xim, total_dt);
  Mat dxT_im = mat_map(p.Tim, total_dx);

  auto assemble = [&](const Mat& dtX, const Mat& dxT, const Mat& comm) {
    Mat out = zeros(p.size);
    for (int i = 0; i < p.size; ++i)
      for (int j = 0; j < p.size; ++j) {
        std::vector<Expr> terms;
        const Expr& a = dtX[static_cast<size_t>(i)][static_cast<size_t>(j)];
        const Expr& b = dxT[static_cast<size_t>(i)][static_cast<size_t>(j)];
        const Expr& c = comm[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (!a.is_literal_zero()) terms.push_back(a);
        if (!b.is_literal_zero()) terms.push_back(-b);
        if (!c.is_literal_zero()) terms.push_back(c);
        out[static_cast<size_t>(i)][static_cast<size_t>(j)] = Expr::add(std::move(terms));
      }
    return out;
  };

  r.re = assemble(dtX_re, dxT_re, re_comm);
  r.im = assemble(dtX_im, dxT_im, im_comm);
  return r;
}

ResidualMatrix zcr_residual(const MatrixProblem& p, const EvolutionRelation& rel) {
  ResidualMatrix raw = zcr_residual_raw(p);
  ResidualMatrix out;
  out.size = raw.size;
  auto reduce = [&](const Expr& e) { return on_shell_reduce(e, rel); };
  out.re = mat_map(raw.re, reduce);
  out.im = mat_map(raw.im, reduce);
  return out;
}

NondegeneracyReport check_nondegeneracy(const Sextet& s, const std::vector<Binding>& pts) {
  Expr w = s.f11() * s.f22() - s.f12() * s.f21();
  NondegeneracyReport rep;
  for (const Binding& b : pts) {
    GuardedEval g = eval_guarded(w, b, 1e-8);
    if (!g.value) {
      ++rep.skipped;
      continue;
    }
    rep.values.push_back(*g.value);
    rep.max_abs = std::max(rep.max_abs, std::abs(*g.value));
  }
  rep.degenerate = rep.values.empty() || rep.max_abs < 1e-10;
  return rep;
}

}  // namespace pss
