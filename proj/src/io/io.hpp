#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "catalog/catalog.hpp"
#include "families/families.hpp"
#include "lab/lab.hpp"

namespace pss {

using Json = nlohmann::json;

// --- sextet files ---
Json sextet_to_json(const Sextet& s, const EvolutionRelation* rel = nullptr,
                    const Json* params_meta = nullptr);

struct LoadedSextet {
  Sextet sextet;
  std::optional<EvolutionRelation> relation;
};
LoadedSextet sextet_from_json(const Json& j);

// --- coefficients ---
Json coeffs_to_json(const PdeCoeffs& c);
PdeCoeffs coeffs_from_json(const Json& j);

// Splits the right-hand side of z_tt = A z_xx + B z_xt + C; rejects relations
// that are not affine in (z_xx, z_xt) with first-order coefficients.
PdeCoeffs coeffs_from_relation(const EvolutionRelation& rel, int delta);

// --- family specs and build results ---
Json family_to_json(const FamilySpec& spec);
FamilySpec family_from_json(const Json& j);
Json build_result_to_json(const BuildResult& r);

// --- catalog export ---
Json fixture_export_json(const std::string& name, const ParamMap& params);

// --- grids ---
std::string grid_csv(const SolutionGrid& g, const Sextet* f);

// --- run reports ---
struct CheckResult {
  std::string name;
  bool pass = false;
  Json details;
};

struct RunReport {
  std::string command;
  Json inputs;
  uint64_t seed = 0;
  int points = 0;
  double tol = 0.0;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, double>> timings_ms;

  bool pass() const;
  // Structured output is byte-identical for identical seeds; wall-clock
  // timings are included only on request.
  Json to_json(bool with_timings = false) const;
  std::string to_text() const;
};

Json verify_report_json(const VerifyReport& r);

std::string fnv1a_digest(const std::string& data);

}  // namespace pss
