#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diskpot/laurent.hpp"
#include "diskpot/potential.hpp"

namespace diskpot {

enum class SolveMode { exact, numeric };

struct SolverOptions {
  SolveMode mode = SolveMode::exact;
  // Divide each equation by T^(its own minimal valuation) before residue
  // reduction.  When disabled, equations whose minimal valuations differ are
  // rejected with inhomogeneous_valuations.
  bool per_equation_rescale = true;
  unsigned rng_seed = 7u;
  int seed_count = 200;
  double newton_tolerance = 1e-10;
  double dedup_tolerance = 1e-6;
  // Numeric solutions with a torus coordinate of modulus outside
  // [unit_floor, 1/unit_floor] are discarded as boundary escapes: Newton can
  // converge onto solutions "at infinity" of the cleared polynomial system
  // (coordinates running off to 0 or infinity in compensating pairs) which
  // solve no critical-point equation on the torus.
  double unit_floor = 1e-4;
  int max_newton_iterations = 60;
  // Extra leading-order candidates, one vector per candidate in active-
  // variable order.
  std::vector<std::vector<Rat>> exact_candidates;
  std::vector<std::vector<std::complex<double>>> numeric_seeds;
};

// A critical-point problem: the log-gradient system of the potential over
// its torus variables, with some torus variables pinned to unit values.
// Unknowns are the remaining torus variables plus every weight variable.
struct CriticalProblem {
  PotentialFunction potential;
  std::map<std::string, NovikovScalar> fixed;
};

// Valuation-zero part of a cleared equation: a genuine polynomial (all
// exponents nonnegative) over the residue field.
struct ResiduePoly {
  std::map<Monomial, Rat> terms;

  Rat eval(const std::vector<Rat>& point) const;
  std::complex<double> eval(
      const std::vector<std::complex<double>>& point) const;
  ResiduePoly partial(int var) const;
  bool is_zero() const { return terms.empty(); }
};

struct ClearedEquation {
  std::string source_var;  // torus variable whose log-partial this is
  LaurentPoly cleared;     // all exponents >= 0, minimal valuation 0
  Monomial clearing;       // monomial multiplier that cleared denominators
  Rat gamma;               // T power divided out
  ResiduePoly residue;     // valuation-0 part over the residue field
  LaurentPoly higher;      // cleared minus residue; valuation > 0
};

struct PreparedSystem {
  std::vector<std::string> all_vars;  // potential variables, torus first
  int torus_count = 0;
  std::vector<int> active;  // unknown slots, ascending
  std::vector<bool> active_is_weight;
  std::map<int, NovikovScalar> fixed_values;  // slot -> pinned unit value
  std::vector<ClearedEquation> equations;
  Level e_max;        // certification target, in original units
  Rat gamma_max;      // largest per-equation rescale
  Rat gamma_min;      // smallest per-equation rescale
  std::vector<Rat> grid;  // possible residual valuations (cleared units)
  // Residual knowledge cap from equations that were dropped because they
  // vanish modulo a finite precision (identically-known-zero equations).
  Level dropped_equation_cap = Level::infinity();

  bool is_square() const {
    return equations.size() == active.size();
  }
  // Solutions are pinned down modulo this level in original units.
  Level coordinate_precision() const { return e_max - gamma_max; }
};

// Substitutes the pinned variables, clears denominators by monomial
// multiplication, rescales each equation to minimal valuation zero, splits
// off the residue system, and precomputes the exponent grid that residual
// valuations must live on.
PreparedSystem prepare(const CriticalProblem& problem,
                       const SolverOptions& options = {});

struct LeadingSolution {
  bool exact = true;
  std::vector<Rat> point;  // active order (exact mode)
  std::vector<std::complex<double>> numeric_point;
  bool nondegenerate = false;
  Rat jacobian_det;  // exact mode, square systems
  std::complex<double> numeric_jacobian_det;
  // Unknowns minus Jacobian rank; 0 for nondegenerate solutions.  This is
  // the dimension count that flags positive-dimensional critical loci.
  int nullity = 0;
};

// Exact mode checks the finite candidate grid ({±1} per torus unknown, {0}
// per weight unknown, plus user candidates) against the residue system with
// rational arithmetic.  Numeric mode runs multivariate Newton from random
// and user seeds.  Both tag every solution with its Jacobian determinant.
// Throws no_solution_found when nothing is found — which is not a proof of
// nonexistence and is reported in those words.
std::vector<LeadingSolution> solve_leading(const PreparedSystem& prepared,
                                           const SolverOptions& options = {});

struct LiftedPoint {
  bool exact = true;
  // Active-variable assignments, truncated to the certified coordinate
  // precision.  Exactly one of the two vectors is populated.
  std::vector<std::pair<std::string, NovikovScalar>> assignment;
  std::vector<std::pair<std::string, NumericSeries>> numeric_assignment;
  Level residual_valuation = Level::infinity();  // original units
  Level first_correction = Level::infinity();    // cleared units
  int iterations = 0;
  bool certified = false;  // exact arithmetic + nondegenerate leading data
};

// Valuation-graded Newton lifting: repeatedly solves J₀·δ = −(lowest
// T-coefficient of the residual) in the residue field and corrects the
// assignment by δ·T^s, with s marching strictly up the exponent grid until
// every residual valuation reaches E_max.  Requires a square system and a
// nondegenerate leading solution.
LiftedPoint newton_lift(const PreparedSystem& prepared,
                        const LeadingSolution& leading,
                        const SolverOptions& options = {});

struct Classification {
  // E': the potential is critical at the point modulo T^(E').  The minimum
  // of the raw log-gradient valuations over the torus variables, capped by
  // the declared working precision.
  Level criticality_order;
  std::optional<bool> meets_e5;   // E' >= E5, when E5 is declared
  std::optional<bool> meets_2e;   // E' >= 2(E5-E1), when E5 is declared
  std::vector<std::pair<std::string, Level>> weight_valuations;
};

// The point is given over all potential variables, in variable order.
Classification classify_point(const PotentialFunction& pf,
                              const std::vector<NovikovScalar>& point);

}  // namespace diskpot
