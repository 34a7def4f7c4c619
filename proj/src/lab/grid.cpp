#include <cmath>

#include "lab/lab.hpp"

namespace pss {

namespace {

// fourth-order first derivative along one axis with one-sided closures
// (index arithmetic through `get`, which wraps for periodic axes)
double d1(const std::function<double(int)>& f, int i, int n, double h, bool periodic) {
  if (periodic || (i >= 2 && i <= n - 3)) {
    return (-f(i + 2) + 8 * f(i + 1) - 8 * f(i - 1) + f(i - 2)) / (12 * h);
  }
  if (i == 0) return (-25 * f(0) + 48 * f(1) - 36 * f(2) + 16 * f(3) - 3 * f(4)) / (12 * h);
  if (i == 1) return (-3 * f(0) - 10 * f(1) + 18 * f(2) - 6 * f(3) + f(4)) / (12 * h);
  if (i == n - 2)
    return (3 * f(n - 1) + 10 * f(n - 2) - 18 * f(n - 3) + 6 * f(n - 4) - f(n - 5)) / (12 * h);
  return (25 * f(n - 1) - 48 * f(n - 2) + 36 * f(n - 3) - 16 * f(n - 4) + 3 * f(n - 5)) /
         (12 * h);
}

double d2(const std::function<double(int)>& f, int i, int n, double h, bool periodic) {
  if (periodic || (i >= 2 && i <= n - 3)) {
    return (-f(i + 2) + 16 * f(i + 1) - 30 * f(i) + 16 * f(i - 1) - f(i - 2)) / (12 * h * h);
  }
  auto fwd = [&](int o, int s) {
    return (45 * f(o) - 154 * f(o + s) + 214 * f(o + 2 * s) - 156 * f(o + 3 * s) +
            61 * f(o + 4 * s) - 10 * f(o + 5 * s)) /
           (12 * h * h);
  };
  auto fwd1 = [&](int o, int s) {
    return (10 * f(o) - 15 * f(o + s) - 4 * f(o + 2 * s) + 14 * f(o + 3 * s) -
            6 * f(o + 4 * s) + f(o + 5 * s)) /
           (12 * h * h);
  };
  if (i == 0) return fwd(0, 1);
  if (i == 1) return fwd1(0, 1);
  if (i == n - 2) return fwd1(n - 1, -1);
  return fwd(n - 1, -1);
}

}  // namespace

Binding SolutionGrid::jet_at(int i, int j) const {
  Binding b;
  size_t k = idx(i, j);
  b.set(kZ, z[k]).set(kZx, zx[k]).set(kZt, zt[k]).set(kZxx, zxx[k]).set(kZxt, zxt[k]);
  return b;
}

void SolutionGrid::recompute_derived() {
  const size_t total = static_cast<size_t>(nx) * static_cast<size_t>(nt);
  zx.assign(total, 0.0);
  zxx.assign(total, 0.0);
  zxt.assign(total, 0.0);
  const bool px = bc == Bc::periodic;
  auto row = [&](const std::vector<double>& a, int j) {
    return [&a, this, j](int i) {
      int ii = i;
      if (bc == Bc::periodic) ii = ((i % nx) + nx) % nx;
      return a[idx(ii, j)];
    };
  };
  for (int j = 0; j < nt; ++j) {
    auto zr = row(z, j);
    for (int i = 0; i < nx; ++i) {
      zx[idx(i, j)] = d1(zr, i, nx, hx, px);
      zxx[idx(i, j)] = d2(zr, i, nx, hx, px);
    }
  }
  if (!has_v) {
    zt.assign(total, 0.0);
    for (int i = 0; i < nx; ++i) {
      auto zc = [&, i](int j) { return z[idx(i, j)]; };
      for (int j = 0; j < nt; ++j) zt[idx(i, j)] = d1(zc, j, nt, ht, false);
    }
  }
  for (int j = 0; j < nt; ++j) {
    auto vr = row(zt, j);
    for (int i = 0; i < nx; ++i) zxt[idx(i, j)] = d1(vr, i, nx, hx, px);
  }
}

SolutionGrid make_grid(double x0, double x1, double t0, double t1, double hx, double ht, Bc bc,
                       const std::function<double(double, double)>& zfun) {
  SolutionGrid g;
  g.x0 = x0;
  g.t0 = t0;
  g.hx = hx;
  g.ht = ht;
  g.bc = bc;
  g.nx = bc == Bc::periodic ? static_cast<int>(std::lround((x1 - x0) / hx))
                            : static_cast<int>(std::lround((x1 - x0) / hx)) + 1;
  g.nt = static_cast<int>(std::lround((t1 - t0) / ht)) + 1;
  if (g.nx < 8 || g.nt < 8)
    raise(Errc::invalid_spec, "grid too small for fourth-order difference closures");
  g.z.assign(static_cast<size_t>(g.nx) * g.nt, 0.0);
  for (int j = 0; j < g.nt; ++j)
    for (int i = 0; i < g.nx; ++i) g.z[g.idx(i, j)] = zfun(g.x(i), g.t(j));
  g.recompute_derived();
  return g;
}

}  // namespace pss
