#pragma once

#include "io/io.hpp"

namespace pss {

struct RunOptions {
  uint64_t seed = 0;
  int points = 200;
  double tol = 1e-9;
  std::optional<int> delta_override;
};

// `catalog run`: instantiates a fixture and runs its full check battery
// (coefficient reproduction + Thm 4.1 characterization for the quasilinear
// class, reduced ZCR residual for the generic class, nondegeneracy for both).
RunReport run_catalog_fixture(const std::string& name, const ParamMap& params,
                              const RunOptions& opt);

// `verify`: checks a user-supplied sextet. Coefficients come from the file's
// relation when present, otherwise from the Theorem-3.2 formulas.
RunReport run_verify_sextet(const LoadedSextet& ls, const RunOptions& opt,
                            const std::string& input_digest);

// Shared helper: max scaled on-shell residual of the structure equations over
// seeded admissible samples.
double sampled_structure_residual(const Sextet& s, const EvolutionRelation& rel, uint64_t seed,
                                  int points);

// Max scaled on-shell ZCR residual (sl2 for delta=+1, su2 for delta=-1).
double sampled_zcr_residual(const Sextet& s, const EvolutionRelation& rel, uint64_t seed,
                            int points);

}  // namespace pss
