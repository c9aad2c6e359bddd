#pragma once

// Error taxonomy shared by every module.  Each failure mode named in the
// function contracts maps to one errc value; qt_error carries the code so
// callers can branch without string matching.

#include <stdexcept>
#include <string>

namespace qtorus {

enum class errc {
  zero_input,
  no_match,
  singular_weight,
  dimension_mismatch,
  bad_positions,
  too_large,
  not_torsion,
  regularity_violation,
  constraint_violation,
  bad_commutation,
  factorization_failure,
  solve_failure,
  unknown_triangle,
  not_adjacent,
  bad_dot_configuration,
  invalid_combinatorics,
  not_a_loop,
  zero_reference,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::zero_input: return "ZeroInput";
    case errc::no_match: return "NoMatch";
    case errc::singular_weight: return "SingularWeight";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::bad_positions: return "BadPositions";
    case errc::too_large: return "TooLarge";
    case errc::not_torsion: return "NotTorsion";
    case errc::regularity_violation: return "RegularityViolation";
    case errc::constraint_violation: return "ConstraintViolation";
    case errc::bad_commutation: return "BadCommutation";
    case errc::factorization_failure: return "FactorizationFailure";
    case errc::solve_failure: return "SolveFailure";
    case errc::unknown_triangle: return "UnknownTriangle";
    case errc::not_adjacent: return "NotAdjacent";
    case errc::bad_dot_configuration: return "BadDotConfiguration";
    case errc::invalid_combinatorics: return "InvalidCombinatorics";
    case errc::not_a_loop: return "NotALoop";
    case errc::zero_reference: return "ZeroReference";
  }
  return "UnknownError";
}

class qt_error : public std::runtime_error {
 public:
  qt_error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
  throw qt_error(code, msg);
}

}  // namespace qtorus
