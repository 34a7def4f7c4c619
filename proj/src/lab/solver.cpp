#include <cmath>

#include "lab/lab.hpp"

namespace pss {

namespace {

struct Rhs {
  const PdeCoeffs& c;
  int nx;
  double hx;
  Bc bc;
  // scratch
  mutable std::vector<double> zx, zxx, vx;

  int wrap(int i) const { return ((i % nx) + nx) % nx; }

  // second-order central differences; Dirichlet boundaries hold their values
  void derivatives(const std::vector<double>& z, const std::vector<double>& v) const {
    zx.assign(static_cast<size_t>(nx), 0.0);
    zxx.assign(static_cast<size_t>(nx), 0.0);
    vx.assign(static_cast<size_t>(nx), 0.0);
    for (int i = 0; i < nx; ++i) {
      int ip = i + 1, im = i - 1;
      if (bc == Bc::periodic) {
        ip = wrap(ip);
        im = wrap(im);
      } else if (i == 0 || i == nx - 1) {
        continue;  // boundary nodes are pinned
      }
      zx[static_cast<size_t>(i)] = (z[static_cast<size_t>(ip)] - z[static_cast<size_t>(im)]) / (2 * hx);
      zxx[static_cast<size_t>(i)] =
          (z[static_cast<size_t>(ip)] - 2 * z[static_cast<size_t>(i)] + z[static_cast<size_t>(im)]) /
          (hx * hx);
      vx[static_cast<size_t>(i)] = (v[static_cast<size_t>(ip)] - v[static_cast<size_t>(im)]) / (2 * hx);
    }
  }

  // dz/dt = v, dv/dt = A z_xx + B v_x + C; returns the max of sqrt|A| + |B|
  double eval(const std::vector<double>& z, const std::vector<double>& v,
              std::vector<double>& dz, std::vector<double>& dv) const {
    derivatives(z, v);
    double amax = 0.0;
    Binding b;
    for (int i = 0; i < nx; ++i) {
      size_t k = static_cast<size_t>(i);
      if (bc == Bc::dirichlet && (i == 0 || i == nx - 1)) {
        dz[k] = 0.0;
        dv[k] = 0.0;
        continue;
      }
      b.set(kZ, z[k]).set(kZx, zx[k]).set(kZt, v[k]);
      GuardedEval A = eval_guarded(c.A, b, 1e-8);
      GuardedEval B = eval_guarded(c.B, b, 1e-8);
      GuardedEval C = eval_guarded(c.C, b, 1e-8);
      if (!A.value || !B.value || !C.value)
        raise(Errc::singular_coefficient,
              "coefficient evaluation failed at x index " + std::to_string(i));
      dz[k] = v[k];
      dv[k] = *A.value * zxx[k] + *B.value * vx[k] + *C.value;
      amax = std::max(amax, std::sqrt(std::abs(*A.value)) + std::abs(*B.value));
    }
    return amax;
  }
};

}  // namespace

namespace {

// one uniform-step attempt; sets *replan to the coefficient bound actually
// observed when the planned time step loses validity mid-run
SolveResult solve_attempt(const PdeCoeffs& coeffs, const std::function<double(double)>& z0,
                          const std::function<double(double)>& v0, const SolveParams& p,
                          double amax_plan, double* replan);

}  // namespace

SolveResult solve_quasilinear(const PdeCoeffs& coeffs, const std::function<double(double)>& z0,
                              const std::function<double(double)>& v0, const SolveParams& p) {
  // The step rule ht <= cfl*hx/max(1, sqrt|A| + |B|) must hold along the whole
  // run, but the coefficient bound is only known once the solution exists.
  // Plan from the initial data and restart with the observed bound if it grows.
  const int nx = p.nx;
  if (nx < 8) raise(Errc::invalid_spec, "need at least 8 spatial points");
  const double hx = (p.x1 - p.x0) / (p.bc == Bc::periodic ? nx : nx - 1);
  std::vector<double> z(static_cast<size_t>(nx)), v(static_cast<size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    double x = p.x0 + hx * i;
    z[static_cast<size_t>(i)] = z0(x);
    v[static_cast<size_t>(i)] = v0(x);
  }
  Rhs rhs0{coeffs, nx, hx, p.bc, {}, {}, {}};
  std::vector<double> dz(static_cast<size_t>(nx)), dv(static_cast<size_t>(nx));
  double amax_plan = rhs0.eval(z, v, dz, dv);
  SolveResult res;
  for (int attempt = 0; attempt < 6; ++attempt) {
    double replan = 0.0;
    res = solve_attempt(coeffs, z0, v0, p, amax_plan, &replan);
    if (res.completed || replan == 0.0) return res;
    amax_plan = 1.5 * replan;
  }
  return res;
}

namespace {

SolveResult solve_attempt(const PdeCoeffs& coeffs, const std::function<double(double)>& z0,
                          const std::function<double(double)>& v0, const SolveParams& p,
                          double amax_plan, double* replan) {
  SolveResult res;
  const int nx = p.nx;
  const double hx = (p.x1 - p.x0) / (p.bc == Bc::periodic ? nx : nx - 1);

  std::vector<double> z(static_cast<size_t>(nx)), v(static_cast<size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    double x = p.x0 + hx * i;
    z[static_cast<size_t>(i)] = z0(x);
    v[static_cast<size_t>(i)] = v0(x);
  }

  Rhs rhs{coeffs, nx, hx, p.bc, {}, {}, {}};
  std::vector<double> dz(static_cast<size_t>(nx)), dv(static_cast<size_t>(nx));
  double ht = p.cfl * hx / std::max(1.0, amax_plan);
  int steps = std::max(1, static_cast<int>(std::ceil(p.t_end / ht)));
  ht = p.t_end / steps;

  SolutionGrid& g = res.grid;
  g.x0 = p.x0;
  g.t0 = 0.0;
  g.hx = hx;
  g.ht = ht;
  g.nx = nx;
  g.nt = steps + 1;
  g.bc = p.bc;
  g.has_v = true;
  g.z.assign(static_cast<size_t>(nx) * (steps + 1), 0.0);
  g.zt.assign(static_cast<size_t>(nx) * (steps + 1), 0.0);
  auto store = [&](int j) {
    for (int i = 0; i < nx; ++i) {
      g.z[g.idx(i, j)] = z[static_cast<size_t>(i)];
      g.zt[g.idx(i, j)] = v[static_cast<size_t>(i)];
    }
  };
  store(0);

  std::vector<double> z1(z), v1(v), kz1(dz), kv1(dv), kz2(dz), kv2(dv), kz3(dz), kv3(dv),
      kz4(dz), kv4(dv);
  auto axpy = [&](std::vector<double>& out, const std::vector<double>& base,
                  const std::vector<double>& k, double a) {
    for (size_t i = 0; i < out.size(); ++i) out[i] = base[i] + a * k[i];
  };

  for (int step = 1; step <= steps; ++step) {
    try {
      double amax = rhs.eval(z, v, kz1, kv1);
      if (p.cfl * hx / std::max(1.0, amax) < ht * (1.0 - 1e-12)) {
        // the planned step no longer satisfies the rule; caller restarts
        *replan = amax;
        res.diagnostic = "coefficient bound grew beyond the planned time step";
        res.steps = step - 1;
        g.nt = step;
        g.z.resize(static_cast<size_t>(nx) * g.nt);
        g.zt.resize(static_cast<size_t>(nx) * g.nt);
        g.recompute_derived();
        return res;
      }
      axpy(z1, z, kz1, ht / 2);
      axpy(v1, v, kv1, ht / 2);
      rhs.eval(z1, v1, kz2, kv2);
      axpy(z1, z, kz2, ht / 2);
      axpy(v1, v, kv2, ht / 2);
      rhs.eval(z1, v1, kz3, kv3);
      axpy(z1, z, kz3, ht);
      axpy(v1, v, kv3, ht);
      rhs.eval(z1, v1, kz4, kv4);
    } catch (const Error& e) {
      res.diagnostic = std::string(e.what()) + " at t = " + std::to_string(g.ht * (step - 1));
      res.steps = step - 1;
      g.nt = step;
      g.z.resize(static_cast<size_t>(nx) * g.nt);
      g.zt.resize(static_cast<size_t>(nx) * g.nt);
      g.recompute_derived();
      return res;
    }
    double big = 0.0;
    for (int i = 0; i < nx; ++i) {
      size_t k = static_cast<size_t>(i);
      z[k] += ht / 6 * (kz1[k] + 2 * kz2[k] + 2 * kz3[k] + kz4[k]);
      v[k] += ht / 6 * (kv1[k] + 2 * kv2[k] + 2 * kv3[k] + kv4[k]);
      big = std::max(big, std::max(std::abs(z[k]), std::abs(v[k])));
    }
    if (!(big < p.blowup)) {
      res.diagnostic = "solution magnitude exceeded the blow-up bound at t = " +
                       std::to_string(g.ht * step);
      res.steps = step;
      g.nt = step + 1;
      store(step);
      g.z.resize(static_cast<size_t>(nx) * g.nt);
      g.zt.resize(static_cast<size_t>(nx) * g.nt);
      g.recompute_derived();
      return res;
    }
    store(step);
  }
  res.completed = true;
  res.steps = steps;
  g.recompute_derived();
  return res;
}

}  // namespace

}  // namespace pss
