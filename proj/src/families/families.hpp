#pragma once

#include <array>
#include <variant>

#include "zcr/zcr.hpp"

namespace pss {

// Coefficients of z_tt = A z_xx + B z_xt + C with A, B, C functions of
// (z, z_x, z_t).
struct PdeCoeffs {
  Expr A, B, C;
  int delta = 1;
};

// One classification branch. Functions phi/varphi/psi*/rho/chi depend on z
// alone; h depends on (z, z_x, z_t); c1, c2, m, eta are constants or free
// parameters. `sign` carries the declared sign of rho^2 - delta (B1/Cor34)
// or the choice rho = +-1 (B2/Cor35).
struct CaseA {
  Expr phi, varphi, psi21, psi22, psi31, psi32;
  int delta = 1;
  std::vector<Assumption> assumptions;
};
struct CaseB1 {
  Expr h, phi, rho, c1, c2;
  int delta = 1;
  int sign = 1;
  std::vector<Assumption> assumptions;
};
struct CaseB2 {
  Expr h, phi, psi, chi;
  int sign = 1;
  std::vector<Assumption> assumptions;
};
struct Cor33 {
  Expr psi21, psi22, psi31, psi32;
  int delta = 1;
  std::vector<Assumption> assumptions;
};
struct Cor34 {
  Expr h, rho, m, eta;
  int delta = 1;
  int sign = 1;
  std::vector<Assumption> assumptions;
};
struct Cor35 {
  Expr h, psi, chi;
  int sign = 1;
  std::vector<Assumption> assumptions;
};

using FamilySpec = std::variant<CaseA, CaseB1, CaseB2, Cor33, Cor34, Cor35>;

const char* family_variant_name(const FamilySpec& spec);

struct BuildResult {
  PdeCoeffs coeffs;
  Sextet sextet;
  FamilySpec provenance;

  // z_tt = A z_xx + B z_xt + C as an evolution relation
  EvolutionRelation relation(int max_order = 6) const;
};

// A = f12,zx / f11,zt, B = (-f11,zx + f12,zt)/f11,zt,
// C = (-z_t f11,z + z_x f12,z + Delta)/f11,zt with Delta = f32 f21 - f31 f22.
PdeCoeffs compute_pde_coeffs(const Sextet& f);

BuildResult build_case_a(const CaseA& spec);
BuildResult build_case_b(const CaseB1& spec);
BuildResult build_case_b(const CaseB2& spec);
BuildResult build_cor33(const Cor33& spec);
BuildResult build_cor34(const Cor34& spec);
BuildResult build_cor35(const Cor35& spec);
BuildResult build_family(const FamilySpec& spec);

struct VerifyOptions {
  uint64_t seed = 0;
  int points = 200;
  double tol = 1e-9;
};

struct VerifyReport {
  bool pass = false;
  bool shape_ok = false;
  std::array<double, 5> eq_max{};  // per-equation max scaled residual
  int points_used = 0;
  int nondeg_points = 0;  // points where the metric condition (nondegeneracy) held
  std::string failure;
  std::map<std::string, std::string> instantiations;  // symbol -> value used
};

// Independent check of the five characterization equations: extracts the
// affine shape of f2j/f3j, instantiates leftover abstract functions and free
// parameters from the seed, and samples the equations at admissible points.
VerifyReport verify_characterization(const PdeCoeffs& coeffs, const Sextet& f,
                                     const VerifyOptions& opt = {});

// True when e is identically zero: exact kernel test first, then seeded
// sampling (with abstract functions instantiated by random quadratics).
bool identically_zero(const Expr& e, const std::vector<Assumption>& assumptions = {},
                      uint64_t seed = 0xA5A5);

}  // namespace pss
