#include <cmath>

#include "catalog/catalog.hpp"
#include "doctest.h"
#include "lab/lab.hpp"
#include "support/sampling.hpp"

using namespace pss;

namespace {

SolutionGrid kink_grid(double lo, double hi, double h) {
  return make_grid(lo, hi, lo, hi, h, h, Bc::dirichlet,
                   [](double x, double t) { return 4.0 * std::atan(std::exp(x + t)); });
}

Sextet sg_sextet() { return instantiate_fixture("sine-gordon", {}).sextet; }

}  // namespace

TEST_CASE("derived jet fields are fourth-order accurate") {
  SolutionGrid g = make_grid(0.0, 3.0, 0.0, 2.0, 0.05, 0.05, Bc::dirichlet,
                             [](double x, double t) { return std::sin(x) * std::cos(t); });
  double worst_zx = 0, worst_zxx = 0, worst_zt = 0, worst_zxt = 0;
  for (int j = 0; j < g.nt; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double x = g.x(i), t = g.t(j);
      size_t k = g.idx(i, j);
      worst_zx = std::max(worst_zx, std::abs(g.zx[k] - std::cos(x) * std::cos(t)));
      worst_zxx = std::max(worst_zxx, std::abs(g.zxx[k] + std::sin(x) * std::cos(t)));
      worst_zt = std::max(worst_zt, std::abs(g.zt[k] + std::sin(x) * std::sin(t)));
      worst_zxt = std::max(worst_zxt, std::abs(g.zxt[k] + std::cos(x) * std::sin(t)));
    }
  CHECK(worst_zx <= 2e-6);
  CHECK(worst_zxx <= 2e-5);
  CHECK(worst_zt <= 2e-6);
  CHECK(worst_zxt <= 2e-5);
}

TEST_CASE("linear wave: standing wave accuracy and second-order convergence") {
  PdeCoeffs wave{ex_int(1), Expr(), Expr(), 1};
  auto z0 = [](double x) { return std::sin(x); };
  auto v0 = [](double) { return 0.0; };

  auto max_err = [&](int nx) {
    SolveParams p;
    p.nx = nx;
    p.t_end = 1.0;
    SolveResult r = solve_quasilinear(wave, z0, v0, p);
    REQUIRE(r.completed);
    double worst = 0;
    const SolutionGrid& g = r.grid;
    for (int j = 0; j < g.nt; ++j)
      for (int i = 0; i < g.nx; ++i)
        worst = std::max(worst,
                         std::abs(g.z[g.idx(i, j)] - std::cos(g.t(j)) * std::sin(g.x(i))));
    return worst;
  };

  CHECK(max_err(256) <= 1e-4);

  double e64 = max_err(64);
  double e128 = max_err(128);
  double ratio = e64 / e128;
  CAPTURE(e64);
  CAPTURE(e128);
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("gSP numeric run: completes and the PDE residual converges at second order") {
  FixtureInstance gsp = instantiate_fixture("gsp", {});
  PdeCoeffs c = *gsp.stated_coeffs;
  auto z0 = [](double x) { return 1.0 + 0.1 * std::sin(x); };
  auto v0 = [](double) { return 0.0; };

  auto pde_residual = [&](int nx) {
    SolveParams p;
    p.nx = nx;
    p.t_end = 1.0;
    SolveResult r = solve_quasilinear(c, z0, v0, p);
    REQUIRE(r.completed);
    const SolutionGrid& g = r.grid;
    double worst = 0;
    for (int j = 1; j < g.nt - 1; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double ztt = (g.zt[g.idx(i, j + 1)] - g.zt[g.idx(i, j - 1)]) / (2 * g.ht);
        Binding b = g.jet_at(i, j);
        double rhs = eval(c.A, b) * g.zxx[g.idx(i, j)] + eval(c.B, b) * g.zxt[g.idx(i, j)] +
                     eval(c.C, b);
        worst = std::max(worst, std::abs(ztt - rhs));
      }
    return worst;
  };

  double r128 = pde_residual(128);
  double r256 = pde_residual(256);
  double ratio = r128 / r256;
  CAPTURE(r128);
  CAPTURE(r256);
  CHECK(ratio >= 2.5);
  CHECK(ratio <= 6.0);
}

TEST_CASE("bidirectional transport fixture: stable run with quiet grid residuals") {
  FixtureInstance m1m2 = instantiate_fixture("m1m2", {});  // m1=2, m2=1, ell=z, eta=1
  SolveParams p;
  p.nx = 628;  // hx ~ 0.01
  p.t_end = 1.0;
  SolveResult r = solve_quasilinear(
      *m1m2.stated_coeffs, [](double x) { return 2.0 + 0.1 * std::sin(x); },
      [](double) { return 0.0; }, p);
  REQUIRE(r.completed);
  GridResiduals res = grid_residuals(m1m2.sextet, r.grid);
  CAPTURE(res.max_scaled);
  CHECK(res.max_scaled <= 1e-3);
}

TEST_CASE("solver reports blow-up instead of dying") {
  // z_tt = z_t^2 + z^2 + 1 has no global solution
  PdeCoeffs c{Expr(), Expr(), parse_expr("z_t^2 + z^2 + 1"), 1};
  SolveParams p;
  p.nx = 32;
  p.t_end = 10.0;
  p.blowup = 1e3;
  SolveResult r = solve_quasilinear(c, [](double) { return 1.0; }, [](double) { return 1.0; }, p);
  CHECK(!r.completed);
  CHECK(!r.diagnostic.empty());
}

TEST_CASE("metric sampling: degeneracy of z == 0 and the area identity") {
  Sextet sg = sg_sextet();
  SolutionGrid zero = make_grid(-1.0, 1.0, -1.0, 1.0, 0.1, 0.1, Bc::dirichlet,
                                [](double, double) { return 0.0; });
  MetricSample ms0 = sample_metric(sg, zero);
  for (uint8_t m : ms0.mask) CHECK(m == 0);

  SolutionGrid kink = kink_grid(-4.0, 4.0, 0.05);
  MetricSample ms = sample_metric(sg, kink);
  int core = 0;
  for (size_t k = 0; k < ms.w.size(); ++k) {
    if (!ms.ok[k]) continue;
    CHECK(std::abs(ms.E[k] * ms.G[k] - ms.F[k] * ms.F[k] - ms.w[k] * ms.w[k]) <= 1e-12);
    if (ms.mask[k]) ++core;
  }
  CHECK(core > 0);
}

TEST_CASE("curvature: flat coframe gives K = 0, SG kink gives K = -1") {
  Sextet flat = make_sextet(ex_int(1), Expr(), Expr(), ex_int(1), Expr(), Expr(), 1);
  SolutionGrid small = make_grid(0.0, 1.0, 0.0, 1.0, 0.05, 0.05, Bc::dirichlet,
                                 [](double x, double t) { return x + t; });
  MetricSample flat_ms = sample_metric(flat, small);
  CurvatureReport flat_rep = curvature_estimate(flat_ms, small, 1);
  CHECK(flat_rep.max_abs_K_plus_delta == doctest::Approx(1.0).epsilon(1e-10));  // K == 0

  SolutionGrid kink = kink_grid(-8.0, 8.0, 0.05);
  MetricSample ms = sample_metric(sg_sextet(), kink);
  CurvatureReport rep = curvature_estimate(ms, kink, 1);
  CAPTURE(rep.median_abs_K_plus_delta);
  CHECK(rep.median_abs_K_plus_delta <= 1e-3);

  SolutionGrid finer = kink_grid(-8.0, 8.0, 0.025);
  CurvatureReport rep2 = curvature_estimate(sample_metric(sg_sextet(), finer), finer, 1);
  CHECK(rep2.median_abs_K_plus_delta < rep.median_abs_K_plus_delta);
}

TEST_CASE("grid residuals: kink is second-order clean, noise is loud") {
  Sextet sg = sg_sextet();
  GridResiduals r4 = grid_residuals(sg, kink_grid(-4.0, 4.0, 0.04));
  GridResiduals r2 = grid_residuals(sg, kink_grid(-4.0, 4.0, 0.02));
  CAPTURE(r4.max_scaled);
  CAPTURE(r2.max_scaled);
  CHECK(r2.max_scaled <= 5e-4);
  double ratio = r4.max_scaled / r2.max_scaled;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);

  Rng rng(3);
  SolutionGrid noise = make_grid(-2.0, 2.0, -2.0, 2.0, 0.05, 0.05, Bc::dirichlet,
                                 [&](double, double) { return rng.uniform(-1.0, 1.0); });
  GridResiduals rn = grid_residuals(sg, noise);
  CHECK(rn.max_abs >= 1e-1);
}

TEST_CASE("spherical case: solved delta = -1 run has K = +1 and commuting su(2) transport") {
  FixtureInstance gsp = instantiate_fixture("gsp", {{"delta", -1}});
  SolveParams p;
  p.nx = 256;
  p.t_end = 1.0;
  SolveResult r = solve_quasilinear(
      *gsp.stated_coeffs, [](double x) { return 1.0 + 0.1 * std::sin(x); },
      [](double) { return 0.0; }, p);
  REQUIRE(r.completed);
  MetricSample ms = sample_metric(gsp.sextet, r.grid);
  CurvatureReport rep = curvature_estimate(ms, r.grid, -1);
  CAPTURE(rep.median_abs_K_plus_delta);
  CHECK(rep.median_abs_K_plus_delta <= 1e-2);

  MatrixProblem prob = build_matrix_problem(gsp.sextet, ProblemKind::su2);
  double disc = transport_check(prob, r.grid, 10, 0, r.grid.hx, 0.8);
  CHECK(disc <= 1e-4);
}

TEST_CASE("transport: zero connection is exact, kink discrepancy is second order") {
  Sextet zero = make_sextet(Expr(), Expr(), Expr(), Expr(), Expr(), Expr(), 1);
  SolutionGrid small = make_grid(0.0, 2.0, 0.0, 2.0, 0.05, 0.05, Bc::dirichlet,
                                 [](double, double) { return 0.0; });
  MatrixProblem pz = build_matrix_problem(zero, ProblemKind::sl2);
  CHECK(transport_check(pz, small, 0, 0, 0.05, 1.0) == doctest::Approx(0.0).epsilon(1e-14));

  Sextet sg = sg_sextet();
  auto disc = [&](double h) {
    SolutionGrid g = kink_grid(-4.0, 4.0, h);
    MatrixProblem p = build_matrix_problem(sg, ProblemKind::sl2);
    int bi = static_cast<int>(std::lround((-1.0 - g.x0) / g.hx));
    int bj = static_cast<int>(std::lround((-1.0 - g.t0) / g.ht));
    return transport_check(p, g, bi, bj, h, 1.0);
  };
  double d4 = disc(0.04);
  double d2 = disc(0.02);
  CAPTURE(d4);
  CAPTURE(d2);
  CHECK(d2 <= 1e-4);
  double ratio = d4 / d2;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}
