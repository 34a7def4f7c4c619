#pragma once

#include <array>
#include <vector>

#include "jet/jet.hpp"
#include "support/sampling.hpp"

namespace pss {

// The six coefficient functions of the 1-forms omega_i = f_{i1} dx + f_{i2} dt
// together with the curvature sign delta and the domain assumptions they live
// under.
struct Sextet {
  std::array<std::array<Expr, 2>, 3> f{};
  int delta = 1;
  std::vector<Assumption> assumptions;

  const Expr& f11() const { return f[0][0]; }
  const Expr& f12() const { return f[0][1]; }
  const Expr& f21() const { return f[1][0]; }
  const Expr& f22() const { return f[1][1]; }
  const Expr& f31() const { return f[2][0]; }
  const Expr& f32() const { return f[2][1]; }

  std::vector<Expr> entries() const {
    return {f[0][0], f[0][1], f[1][0], f[1][1], f[2][0], f[2][1]};
  }
};

Sextet make_sextet(Expr f11, Expr f12, Expr f21, Expr f22, Expr f31, Expr f32, int delta,
                   std::vector<Assumption> assumptions = {});

// dx^dt coefficients of the structure equations, kept as explicit sums:
//   r1 = D_x f12 - D_t f11 + f21 f32 - f31 f22      (d w1 - w3 ^ w2)
//   r2 = D_x f22 - D_t f21 - f11 f32 + f12 f31      (d w2 - w1 ^ w3)
//   r3 = D_x f32 - D_t f31 - delta (f11 f22 - f12 f21)  (d w3 - delta w1 ^ w2)
// All three vanish on-shell for a valid pss/ss sextet; the sine-Gordon forms
// give exactly (0, 0, sin z - z_xt) off-shell, which pins the orientation.
struct StructureResidual {
  Expr r1, r2, r3;
};

StructureResidual structure_residuals(const Sextet& f);

enum class ProblemKind { sl2, su2, hat3x3 };

const char* problem_kind_name(ProblemKind k);

// Omega = X dx + T dt. su(2) entries are carried as real/imaginary parts so
// the scalar kernel stays real; Xim/Tim are zero for the other kinds.
struct MatrixProblem {
  ProblemKind kind = ProblemKind::sl2;
  int size = 2;
  int delta = 1;
  std::vector<std::vector<Expr>> Xre, Xim, Tre, Tim;
};

// sl2 requires delta = +1, su2 requires delta = -1, hat3x3 admits both.
MatrixProblem build_matrix_problem(const Sextet& f, ProblemKind kind);

struct ResidualMatrix {
  int size = 2;
  std::vector<std::vector<Expr>> re, im;
};

// D_t X - D_x T + [X, T], reduced modulo the relation (or raw, off-shell).
// In terms of the structure residuals the entries are fixed combinations:
//   sl2:    -1/2 [[r2, r1 - r3], [r1 + r3, -r2]]
//   su2:    re = -1/2 [[0, r1], [-r1, 0]],  im = -1/2 [[r2, r3], [r3, -r2]]
//   hat3x3: -[[0, r1, r2], [delta r1, 0, r3], [delta r2, -r3, 0]]
ResidualMatrix zcr_residual_raw(const MatrixProblem& p);
ResidualMatrix zcr_residual(const MatrixProblem& p, const EvolutionRelation& rel);

struct NondegeneracyReport {
  std::vector<double> values;  // f11 f22 - f12 f21 at each evaluated point
  int skipped = 0;             // points dropped for singular/domain failures
  bool degenerate = false;     // all sampled |w| below 1e-10
  double max_abs = 0.0;
};

NondegeneracyReport check_nondegeneracy(const Sextet& f, const std::vector<Binding>& pts);

}  // namespace pss
