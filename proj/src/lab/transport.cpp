#include <cmath>
#include <limits>

#include "lab/lab.hpp"

namespace pss {

namespace {

// real dimension of the linear problem (complex su(2) entries split in two)
int real_dim(const MatrixProblem& p) { return p.kind == ProblemKind::su2 ? 2 * p.size : p.size; }

struct EntryField {
  int nx = 0, nt = 0;
  std::vector<double> v;
  double at(const SolutionGrid& g, int i, int j) const { return v[g.idx(i, j)]; }
};

struct SampledProblem {
  const SolutionGrid& g;
  int n = 0;  // real dimension
  std::vector<EntryField> X, T;  // n*n fields, row-major

  // bilinear interpolation of every entry at (x, t)
  void mat_at(const std::vector<EntryField>& M, double x, double t,
              std::vector<double>& out) const {
    double fx = (x - g.x0) / g.hx;
    double ft = (t - g.t0) / g.ht;
    int i = static_cast<int>(std::floor(fx));
    int j = static_cast<int>(std::floor(ft));
    i = std::max(0, std::min(g.nx - 2, i));
    j = std::max(0, std::min(g.nt - 2, j));
    double a = fx - i, b = ft - j;
    for (int e = 0; e < n * n; ++e) {
      const EntryField& f = M[static_cast<size_t>(e)];
      double v00 = f.at(g, i, j), v10 = f.at(g, i + 1, j);
      double v01 = f.at(g, i, j + 1), v11 = f.at(g, i + 1, j + 1);
      double v = (1 - a) * (1 - b) * v00 + a * (1 - b) * v10 + (1 - a) * b * v01 + a * b * v11;
      if (!std::isfinite(v))
        raise(Errc::singular_point, "linear problem blows up inside the transport cell");
      out[static_cast<size_t>(e)] = v;
    }
  }
};

// RK4 for the matrix ODE dV/ds = M(s) V along one leg (x or t varies)
void integrate_leg(const SampledProblem& sp, const std::vector<EntryField>& M, bool along_x,
                   double fixed, double s0, double s1, double h, std::vector<double>& V) {
  int n = sp.n;
  std::vector<double> m(static_cast<size_t>(n) * n), k1(V.size()), k2(V.size()), k3(V.size()),
      k4(V.size()), tmp(V.size());
  auto rhs = [&](double s, const std::vector<double>& Vin, std::vector<double>& out) {
    double x = along_x ? s : fixed;
    double t = along_x ? fixed : s;
    sp.mat_at(M, x, t, m);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        double acc = 0;
        for (int k = 0; k < n; ++k)
          acc += m[static_cast<size_t>(r) * n + k] * Vin[static_cast<size_t>(k) * n + c];
        out[static_cast<size_t>(r) * n + c] = acc;
      }
  };
  double s = s0;
  while (s < s1 - 1e-14) {
    double step = std::min(h, s1 - s);
    rhs(s, V, k1);
    for (size_t e = 0; e < V.size(); ++e) tmp[e] = V[e] + step / 2 * k1[e];
    rhs(s + step / 2, tmp, k2);
    for (size_t e = 0; e < V.size(); ++e) tmp[e] = V[e] + step / 2 * k2[e];
    rhs(s + step / 2, tmp, k3);
    for (size_t e = 0; e < V.size(); ++e) tmp[e] = V[e] + step * k3[e];
    rhs(s + step, tmp, k4);
    for (size_t e = 0; e < V.size(); ++e)
      V[e] += step / 6 * (k1[e] + 2 * k2[e] + 2 * k3[e] + k4[e]);
    s += step;
  }
}

}  // namespace

double transport_check(const MatrixProblem& p, const SolutionGrid& g, int base_i, int base_j,
                       double h, double extent) {
  const int n = real_dim(p);
  const double xb = g.x(base_i), tb = g.t(base_j);
  const double x1 = xb + extent, t1 = tb + extent;
  if (base_i < 0 || base_j < 0 || x1 > g.x(g.nx - 1) + 1e-12 || t1 > g.t(g.nt - 1) + 1e-12)
    raise(Errc::invalid_spec, "transport cell leaves the grid");

  SampledProblem sp{g, n, {}, {}};
  auto sample = [&](const std::vector<std::vector<Expr>>& re,
                    const std::vector<std::vector<Expr>>& im) {
    std::vector<EntryField> out(static_cast<size_t>(n) * n);
    for (auto& f : out) {
      f.nx = g.nx;
      f.nt = g.nt;
      f.v.assign(static_cast<size_t>(g.nx) * g.nt, 0.0);
    }
    // real block structure for complex entries: [[Re, -Im], [Im, Re]]
    for (int j = 0; j < g.nt; ++j)
      for (int i = 0; i < g.nx; ++i) {
        Binding b = g.jet_at(i, j);
        for (int r = 0; r < p.size; ++r)
          for (int c = 0; c < p.size; ++c) {
            GuardedEval vre = eval_guarded(re[static_cast<size_t>(r)][static_cast<size_t>(c)], b, 1e-8);
            double re_v = vre.value ? *vre.value : std::numeric_limits<double>::quiet_NaN();
            if (p.kind == ProblemKind::su2) {
              GuardedEval vim = eval_guarded(im[static_cast<size_t>(r)][static_cast<size_t>(c)], b, 1e-8);
              double im_v = vim.value ? *vim.value : std::numeric_limits<double>::quiet_NaN();
              out[static_cast<size_t>(r) * n + c].v[g.idx(i, j)] = re_v;
              out[static_cast<size_t>(r + p.size) * n + (c + p.size)].v[g.idx(i, j)] = re_v;
              out[static_cast<size_t>(r) * n + (c + p.size)].v[g.idx(i, j)] = -im_v;
              out[static_cast<size_t>(r + p.size) * n + c].v[g.idx(i, j)] = im_v;
            } else {
              out[static_cast<size_t>(r) * n + c].v[g.idx(i, j)] = re_v;
            }
          }
      }
    return out;
  };
  sp.X = sample(p.Xre, p.Xim);
  sp.T = sample(p.Tre, p.Tim);

  std::vector<double> Va(static_cast<size_t>(n) * n, 0.0), Vb;
  for (int i = 0; i < n; ++i) Va[static_cast<size_t>(i) * n + i] = 1.0;
  Vb = Va;

  // x then t
  integrate_leg(sp, sp.X, true, tb, xb, x1, h, Va);
  integrate_leg(sp, sp.T, false, x1, tb, t1, h, Va);
  // t then x
  integrate_leg(sp, sp.T, false, xb, tb, t1, h, Vb);
  integrate_leg(sp, sp.X, true, t1, xb, x1, h, Vb);

  double disc = 0.0;
  for (size_t e = 0; e < Va.size(); ++e) disc += (Va[e] - Vb[e]) * (Va[e] - Vb[e]);
  return std::sqrt(disc);
}

}  // namespace pss
