#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diskpot/laurent.hpp"
#include "diskpot/polytope.hpp"

namespace diskpot {

// Bulk decoration of one local facet.  A concrete weight is a scalar in the
// maximal ideal; leaving it empty introduces the weight as a fresh unknown
// variable of the potential instead.
struct BulkEntry {
  std::string facet_label;
  std::optional<NovikovScalar> weight;
};

// A synthetic higher-energy contribution: coefficient * T^energy * z^monomial
// with the coefficient a unit scalar, so the term's valuation is exactly the
// declared energy.
struct OutsideTerm {
  Monomial monomial;  // exponents over the torus variables
  Rat energy;
  NovikovScalar coefficient;
};

// Everything needed to assemble a potential function: a polytope with a
// basepoint in its interior, bulk decorations, optional synthetic
// higher-energy terms, and the declared energy thresholds.  Facets appended
// by compactify() are tracked as non-local: they still contribute one term
// each, but they do not enter E1 and cannot carry bulk.
struct PotentialSpec {
  Polytope polytope;
  std::vector<Rat> basepoint;
  std::vector<BulkEntry> bulk;
  std::vector<OutsideTerm> outside_terms;
  std::optional<Rat> e5;
  std::optional<Rat> ecut;
  std::optional<Rat> precision_override;  // tightens the default, never widens
  int local_facet_count = -1;             // -1: every facet is local
  bool assert_wide_gap = false;           // caller asserts E5 > 3*E1
  std::vector<std::string> variables;     // torus names; empty: x, y, z, u

  int local_count() const;
  std::vector<std::string> torus_variables() const;
};

// Energy thresholds attached to a built potential.  E1 is the smallest local
// disk energy; E5 bounds the energies of all undetermined contributions;
// E_cut is the energy of the compactifying disk when one exists.  The
// working precision defaults to 2(E5 - E1) and is infinite when no E5 is
// declared (the potential is then an exact finite sum).
struct Energies {
  Rat e1;
  std::optional<Rat> e5;
  std::optional<Rat> ecut;
  Level precision;

  // E = E5 - E1, the valuation floor for bulk weights.
  Rat e() const;
};

// One facet's contribution, kept for bulk application and reporting.
struct FacetTerm {
  std::string label;
  Monomial monomial;  // over the torus variables only
  Rat energy;         // facet distance at the basepoint
  bool local;
};

struct PotentialFunction {
  LaurentPoly poly;  // torus variables first, then weight variables
  std::vector<std::string> torus_vars;
  std::vector<std::string> weight_vars;
  Energies energies;
  std::vector<FacetTerm> facet_terms;
};

// One term z^{nu_i} T^{ell_i(basepoint)} per facet plus the declared outside
// terms, truncated at the working precision.  Throws basepoint_on_facet /
// basepoint_excluded when the basepoint is not strictly inside,
// invalid_thresholds when the declared energies are inconsistent, and
// precision_too_low when the requested precision would drop every term.
PotentialFunction build_potential(const PotentialSpec& spec);

// Multiplies each bulk-decorated facet term by (1 + w) — first order only,
// never the full exponential.  Concrete weights must have (effective)
// valuation at least E = E5 - E1; symbolic weights extend the variable list
// instead and defer the valuation gate to the solution.  Decorations
// compose: applying twice to a facet yields the factor (1+w1)(1+w2).
PotentialFunction apply_bulk(const PotentialFunction& pf,
                             const PotentialSpec& spec);

// Appends a compactifying facet to the spec.  The basepoint must stay
// strictly inside (distance 0 is rejected with basepoint_excluded); the new
// facet's distance becomes E_cut, and the facet is non-local, so E1 is
// unaffected.
PotentialSpec compactify(PotentialSpec spec, Facet new_facet);

}  // namespace diskpot
