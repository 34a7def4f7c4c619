#pragma once

#include <stdexcept>
#include <string>

namespace pss {

enum class Errc {
  parse_error = 1,
  unknown_function,
  unbound_variable,
  singular_point,
  domain_error,
  order_overflow,
  kind_mismatch,
  degenerate_f11,
  delta_vanishes,
  delta0_vanishes,
  h_constant,
  psi_vanishes,
  sign_assumption_violated,
  shape_mismatch,
  domain_violation,
  empty_mask,
  singular_coefficient,
  blow_up,
  invalid_spec,
  io_error,
  no_admissible_point,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc c, const std::string& msg) { throw Error(c, msg); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::parse_error: return "ParseError";
    case Errc::unknown_function: return "UnknownFunction";
    case Errc::unbound_variable: return "UnboundVariable";
    case Errc::singular_point: return "SingularPoint";
    case Errc::domain_error: return "DomainError";
    case Errc::order_overflow: return "OrderOverflow";
    case Errc::kind_mismatch: return "KindMismatch";
    case Errc::degenerate_f11: return "DegenerateF11";
    case Errc::delta_vanishes: return "DeltaVanishes";
    case Errc::delta0_vanishes: return "Delta0Vanishes";
    case Errc::h_constant: return "HConstant";
    case Errc::psi_vanishes: return "PsiVanishes";
    case Errc::sign_assumption_violated: return "SignAssumptionViolated";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::domain_violation: return "DomainViolation";
    case Errc::empty_mask: return "EmptyMask";
    case Errc::singular_coefficient: return "SingularCoefficient";
    case Errc::blow_up: return "BlowUp";
    case Errc::invalid_spec: return "InvalidSpec";
    case Errc::io_error: return "IoError";
    case Errc::no_admissible_point: return "NoAdmissiblePoint";
  }
  return "Error";
}

}  // namespace pss
