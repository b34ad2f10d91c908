#pragma once

#include <stdexcept>
#include <string>

namespace diskpot {

// Failure of a mathematical precondition or an unsatisfiable request on
// otherwise well-formed input.  Each carries a stable machine-readable code
// (the CLI prints the code and exits with status 2) and a human message.
//
// Codes currently in use:
//   not_a_unit              inversion/evaluation required a unit of the
//                           valuation ring and got something else
//   precision_required      an operation would need infinitely many terms
//                           and must be given a finite working precision
//   precision_too_low       requested working precision cannot see even the
//                           lowest-energy terms
//   precision_exhausted     a pivot/term decision depends on terms beyond the
//                           known precision of the data
//   invalid_thresholds      energy thresholds violate their ordering contract
//   bad_facet               malformed half-space data (zero or imprimitive
//                           normal, wrong dimension)
//   bad_monomial            Laurent exponent outside the supported range
//   basepoint_on_facet      basepoint not strictly inside the polytope
//   basepoint_excluded      an appended facet would cut off the basepoint
//   bulk_facet_unknown      bulk deformation names a facet that is not local
//   weight_too_small        bulk weight valuation below the required bound
//   unbounded_polytope      vertex/norm computation on an unbounded polytope
//   no_solution             equal-distance system is inconsistent
//   underdetermined_locus   equal-distance system has a >1-parameter family
//   inhomogeneous_valuations leading-term split without per-equation rescaling
//                           on a system with mixed leading energies
//   invalid_problem         critical-point problem is not well-posed
//                           (variable/equation count mismatch and similar)
//   no_solution_found       candidate search found no leading solution (this
//                           is not a proof that none exists)
//   degenerate_jacobian     Newton lifting demanded an invertible leading
//                           Jacobian and it is singular
//   missing_certificate     a displacement bound was requested without the
//                           certificate that backs it
class DomainError : public std::runtime_error {
public:
  DomainError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

private:
  std::string code_;
};

// Malformed textual input: unreadable numbers, series, JSON documents or
// command-line values.  The CLI exits with status 3.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& message)
      : std::runtime_error(message) {}
};

[[noreturn]] inline void fail(const std::string& code,
                              const std::string& message) {
  throw DomainError(code, message);
}

}  // namespace diskpot
