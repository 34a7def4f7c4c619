#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "families/families.hpp"
#include "zcr/zcr.hpp"

namespace pss {

enum class Bc { periodic, dirichlet };

// A numeric solution field z(x,t) with derived jet fields. Storage is
// row-major with the time index outermost: field[j*nx + i].
struct SolutionGrid {
  double x0 = 0.0, t0 = 0.0;
  double hx = 0.0, ht = 0.0;
  int nx = 0, nt = 0;
  Bc bc = Bc::periodic;
  std::vector<double> z, zx, zt, zxx, zxt;
  bool has_v = false;  // zt holds solver state rather than finite differences

  size_t idx(int i, int j) const {
    return static_cast<size_t>(j) * static_cast<size_t>(nx) + static_cast<size_t>(i);
  }
  double x(int i) const { return x0 + hx * i; }
  double t(int j) const { return t0 + ht * j; }

  Binding jet_at(int i, int j) const;

  // z_x, z_xx, z_xt by fourth-order differences in x; z_t by fourth-order
  // differences in t unless the solver provided it as state.
  void recompute_derived();
};

SolutionGrid make_grid(double x0, double x1, double t0, double t1, double hx, double ht, Bc bc,
                       const std::function<double(double, double)>& zfun);

struct SolveParams {
  double x0 = 0.0;
  double x1 = 6.283185307179586;
  int nx = 256;
  double t_end = 1.0;
  Bc bc = Bc::periodic;
  double cfl = 0.4;
  double blowup = 1e6;
};

struct SolveResult {
  SolutionGrid grid;
  bool completed = false;
  std::string diagnostic;
  int steps = 0;
};

// Method of lines on the first-order system (z, v = z_t):
//   z_t = v,   v_t = A z_xx + B v_x + C,
// second-order central differences in x, classical RK4 in t with
// ht = cfl * hx / max(1, max(sqrt|A| + |B|)). z_xt on the grid is v_x.
SolveResult solve_quasilinear(const PdeCoeffs& coeffs, const std::function<double(double)>& z0,
                              const std::function<double(double)>& v0, const SolveParams& p);

struct MetricSample {
  int nx = 0, nt = 0;
  std::vector<double> E, F, G, w;
  std::vector<uint8_t> ok;    // entry evaluated cleanly
  std::vector<uint8_t> mask;  // ok and |w| above the degeneracy cutoff
  double cutoff = 0.0;
  double median_abs_w = 0.0;
  int singular = 0;
};

// E = f11^2 + f21^2, F = f11 f12 + f21 f22, G = f12^2 + f22^2,
// w = f11 f22 - f12 f21; degeneracy cutoff is relative to median |w|.
MetricSample sample_metric(const Sextet& f, const SolutionGrid& g, double rel_cutoff = 0.05);

struct CurvatureReport {
  std::vector<double> K;  // NaN outside the admissible interior
  std::vector<uint8_t> mask;
  double median_abs_K_plus_delta = 0.0;
  double max_abs_K_plus_delta = 0.0;
  int points = 0;
};

// Gaussian curvature by the Brioschi formula with fourth-order differences of
// E, F, G; statistics of |K + delta| over the admissible interior.
CurvatureReport curvature_estimate(const MetricSample& ms, const SolutionGrid& g, int delta);

struct GridResiduals {
  std::vector<double> r1, r2, r3;  // NaN at edges and non-evaluable points
  double max_abs = 0.0;
  double max_scaled = 0.0;  // |r| / (1 + max|term|), the toolkit's residual convention
  int points = 0;
};

// Structure-equation residuals with total derivatives replaced by
// second-order central differences of the sampled f arrays.
GridResiduals grid_residuals(const Sextet& f, const SolutionGrid& g);

// Transports the fundamental solution of dV = (X dx + T dt) V along
// x-then-t and t-then-x across one check cell of the given physical extent,
// RK4 with step h and bilinear interpolation of the coefficient matrices.
// Returns the Frobenius norm of the difference of the two transports.
double transport_check(const MatrixProblem& p, const SolutionGrid& g, int base_i, int base_j,
                       double h, double extent = 1.0);

}  // namespace pss
