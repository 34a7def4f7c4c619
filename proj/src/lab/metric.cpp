#include <algorithm>
#include <cmath>
#include <limits>

#include "lab/lab.hpp"

namespace pss {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median_abs(std::vector<double> v) {
  if (v.empty()) return 0.0;
  for (double& x : v) x = std::abs(x);
  size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  return v[mid];
}

}  // namespace

MetricSample sample_metric(const Sextet& f, const SolutionGrid& g, double rel_cutoff) {
  MetricSample ms;
  ms.nx = g.nx;
  ms.nt = g.nt;
  const size_t total = static_cast<size_t>(g.nx) * g.nt;
  ms.E.assign(total, kNaN);
  ms.F.assign(total, kNaN);
  ms.G.assign(total, kNaN);
  ms.w.assign(total, kNaN);
  ms.ok.assign(total, 0);
  ms.mask.assign(total, 0);

  std::vector<double> finite_w;
  finite_w.reserve(total);
  for (int j = 0; j < g.nt; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      Binding b = g.jet_at(i, j);
      GuardedEval f11 = eval_guarded(f.f11(), b, 1e-8);
      GuardedEval f12 = eval_guarded(f.f12(), b, 1e-8);
      GuardedEval f21 = eval_guarded(f.f21(), b, 1e-8);
      GuardedEval f22 = eval_guarded(f.f22(), b, 1e-8);
      size_t k = g.idx(i, j);
      if (!f11.value || !f12.value || !f21.value || !f22.value) {
        ++ms.singular;
        continue;
      }
      double a = *f11.value, bb = *f12.value, c = *f21.value, d = *f22.value;
      ms.E[k] = a * a + c * c;
      ms.F[k] = a * bb + c * d;
      ms.G[k] = bb * bb + d * d;
      ms.w[k] = a * d - bb * c;
      ms.ok[k] = 1;
      finite_w.push_back(ms.w[k]);
    }
  }
  ms.median_abs_w = median_abs(finite_w);
  ms.cutoff = rel_cutoff * ms.median_abs_w;
  for (size_t k = 0; k < total; ++k)
    ms.mask[k] = ms.ok[k] && std::abs(ms.w[k]) >= ms.cutoff && ms.cutoff > 0;
  return ms;
}

namespace {

// fourth-order central stencils on precomputed fields; NaN when the stencil
// leaves the grid or touches a bad value
struct FieldDiff {
  const SolutionGrid& g;
  const std::vector<uint8_t>& ok;

  bool usable(int i, int j) const {
    return i >= 0 && i < g.nx && j >= 0 && j < g.nt && ok[g.idx(i, j)];
  }
  template <class F>
  double dx(F&& f, int i, int j) const {
    if (i < 2 || i > g.nx - 3) return kNaN;
    return (-f(i + 2, j) + 8 * f(i + 1, j) - 8 * f(i - 1, j) + f(i - 2, j)) / (12 * g.hx);
  }
  template <class F>
  double dt(F&& f, int i, int j) const {
    if (j < 2 || j > g.nt - 3) return kNaN;
    return (-f(i, j + 2) + 8 * f(i, j + 1) - 8 * f(i, j - 1) + f(i, j - 2)) / (12 * g.ht);
  }
  template <class F>
  double dxx(F&& f, int i, int j) const {
    if (i < 2 || i > g.nx - 3) return kNaN;
    return (-f(i + 2, j) + 16 * f(i + 1, j) - 30 * f(i, j) + 16 * f(i - 1, j) - f(i - 2, j)) /
           (12 * g.hx * g.hx);
  }
  template <class F>
  double dtt(F&& f, int i, int j) const {
    if (j < 2 || j > g.nt - 3) return kNaN;
    return (-f(i, j + 2) + 16 * f(i, j + 1) - 30 * f(i, j) + 16 * f(i, j - 1) - f(i, j - 2)) /
           (12 * g.ht * g.ht);
  }
};

double det3(const double m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

CurvatureReport curvature_estimate(const MetricSample& ms, const SolutionGrid& g, int delta) {
  if (g.hx > 0.1 || g.ht > 0.1)
    raise(Errc::invalid_spec, "curvature estimation needs hx, ht <= 0.1");
  CurvatureReport rep;
  const size_t total = static_cast<size_t>(g.nx) * g.nt;
  rep.K.assign(total, kNaN);
  rep.mask.assign(total, 0);

  FieldDiff fd{g, ms.ok};
  auto E = [&](int i, int j) { return ms.E[g.idx(i, j)]; };
  auto F = [&](int i, int j) { return ms.F[g.idx(i, j)]; };
  auto G = [&](int i, int j) { return ms.G[g.idx(i, j)]; };
  // F_xt via two fourth-order passes
  std::vector<double> Fx(total, kNaN);
  for (int j = 0; j < g.nt; ++j)
    for (int i = 2; i < g.nx - 2; ++i) Fx[g.idx(i, j)] = fd.dx(F, i, j);
  auto Fxf = [&](int i, int j) { return Fx[g.idx(i, j)]; };

  std::vector<double> devs;
  for (int j = 4; j < g.nt - 4; ++j) {
    for (int i = 4; i < g.nx - 4; ++i) {
      size_t k = g.idx(i, j);
      if (!ms.mask[k]) continue;
      double Ex = fd.dx(E, i, j), Et = fd.dt(E, i, j), Ett = fd.dtt(E, i, j);
      double Gx = fd.dx(G, i, j), Gt = fd.dt(G, i, j), Gxx = fd.dxx(G, i, j);
      double Fxv = fd.dx(F, i, j), Ftv = fd.dt(F, i, j), Fxt = fd.dt(Fxf, i, j);
      double e = E(i, j), f = F(i, j), gg = G(i, j);
      double vals[] = {Ex, Et, Ett, Gx, Gt, Gxx, Fxv, Ftv, Fxt, e, f, gg};
      bool fin = true;
      for (double v : vals) fin = fin && std::isfinite(v);
      if (!fin) continue;

      double m1[3][3] = {{-0.5 * Ett + Fxt - 0.5 * Gxx, 0.5 * Ex, Fxv - 0.5 * Et},
                         {Ftv - 0.5 * Gx, e, f},
                         {0.5 * Gt, f, gg}};
      double m2[3][3] = {{0.0, 0.5 * Et, 0.5 * Gx}, {0.5 * Et, e, f}, {0.5 * Gx, f, gg}};
      double den = e * gg - f * f;
      if (std::abs(den) < 1e-14) continue;
      double K = (det3(m1) - det3(m2)) / (den * den);
      rep.K[k] = K;
      rep.mask[k] = 1;
      devs.push_back(std::abs(K + delta));
    }
  }
  if (devs.empty()) raise(Errc::empty_mask, "no admissible interior points for curvature");
  rep.points = static_cast<int>(devs.size());
  for (double d : devs) rep.max_abs_K_plus_delta = std::max(rep.max_abs_K_plus_delta, d);
  size_t mid = devs.size() / 2;
  std::nth_element(devs.begin(), devs.begin() + static_cast<long>(mid), devs.end());
  rep.median_abs_K_plus_delta = devs[mid];
  return rep;
}

GridResiduals grid_residuals(const Sextet& f, const SolutionGrid& g) {
  GridResiduals out;
  const size_t total = static_cast<size_t>(g.nx) * g.nt;
  out.r1.assign(total, kNaN);
  out.r2.assign(total, kNaN);
  out.r3.assign(total, kNaN);

  // sample the six coefficient functions on the grid
  std::array<std::vector<double>, 6> F;
  for (auto& a : F) a.assign(total, kNaN);
  std::vector<uint8_t> ok(total, 0);
  for (int j = 0; j < g.nt; ++j)
    for (int i = 0; i < g.nx; ++i) {
      Binding b = g.jet_at(i, j);
      size_t k = g.idx(i, j);
      bool good = true;
      for (int e = 0; e < 6; ++e) {
        GuardedEval ge = eval_guarded(f.f[static_cast<size_t>(e / 2)][static_cast<size_t>(e % 2)], b, 1e-8);
        if (!ge.value) {
          good = false;
          break;
        }
        F[static_cast<size_t>(e)][k] = *ge.value;
      }
      ok[k] = good;
    }

  auto dx2 = [&](const std::vector<double>& a, int i, int j) {
    return (a[g.idx(i + 1, j)] - a[g.idx(i - 1, j)]) / (2 * g.hx);
  };
  auto dt2 = [&](const std::vector<double>& a, int i, int j) {
    return (a[g.idx(i, j + 1)] - a[g.idx(i, j - 1)]) / (2 * g.ht);
  };
  const auto& f11 = F[0];
  const auto& f12 = F[1];
  const auto& f21 = F[2];
  const auto& f22 = F[3];
  const auto& f31 = F[4];
  const auto& f32 = F[5];
  for (int j = 1; j < g.nt - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) {
      size_t k = g.idx(i, j);
      bool good = ok[k] && ok[g.idx(i - 1, j)] && ok[g.idx(i + 1, j)] && ok[g.idx(i, j - 1)] &&
                  ok[g.idx(i, j + 1)];
      if (!good) continue;
      auto acc = [&](double a, double b, double c, double d, double* slot) {
        *slot = a + b + c + d;
        double scale = 1.0 + std::max(std::max(std::abs(a), std::abs(b)),
                                      std::max(std::abs(c), std::abs(d)));
        out.max_abs = std::max(out.max_abs, std::abs(*slot));
        out.max_scaled = std::max(out.max_scaled, std::abs(*slot) / scale);
      };
      acc(dx2(f12, i, j), -dt2(f11, i, j), f21[k] * f32[k], -(f31[k] * f22[k]), &out.r1[k]);
      acc(dx2(f22, i, j), -dt2(f21, i, j), -(f11[k] * f32[k]), f12[k] * f31[k], &out.r2[k]);
      acc(dx2(f32, i, j), -dt2(f31, i, j), -f.delta * f11[k] * f22[k],
          f.delta * f12[k] * f21[k], &out.r3[k]);
      ++out.points;
    }
  return out;
}

}  // namespace pss
