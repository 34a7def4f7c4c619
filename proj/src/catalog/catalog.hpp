#pragma once

#include <functional>
#include <optional>

#include "families/families.hpp"

namespace pss {

enum class FixtureClass { form_1_1, generic_zcr };

using ParamMap = std::map<std::string, Rational>;

struct ParamSpec {
  std::string name;
  Rational default_value;
  std::string constraint;  // e.g. "nonzero", "in {-1, 1}", "integer"
};

struct FixtureInstance {
  Sextet sextet;
  EvolutionRelation relation;
  std::optional<PdeCoeffs> stated_coeffs;  // the equation as printed, for form-(1.1)
  std::optional<FamilySpec> family;        // generating data, when the text gives one
  ParamMap params;
};

struct Fixture {
  std::string name;
  std::string title;
  FixtureClass cls = FixtureClass::form_1_1;
  bool in_default_acceptance = true;
  std::vector<ParamSpec> params;
  std::function<FixtureInstance(const ParamMap&)> make;
};

const std::vector<Fixture>& catalog();
std::vector<std::string> list_catalog();
const Fixture& find_fixture(const std::string& name);

ParamMap fixture_defaults(const std::string& name);
// Missing entries fall back to the fixture defaults; constraint violations
// raise DomainViolation naming the constraint.
FixtureInstance instantiate_fixture(const std::string& name, const ParamMap& params);

}  // namespace pss
