#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diskpot/polytope.hpp"
#include "diskpot/solver.hpp"

namespace diskpot {

// A rectangular matrix over the valuation ring, together with the working
// precision all of its entries share: the minimum of the entries' individual
// precisions.  Decisions about terms at or beyond `precision` are refused
// rather than guessed.
struct NovikovMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<NovikovScalar>> entries;  // entries[row][col]
  Level precision = Level::infinity();
};

// Validates rectangularity and computes the shared precision.
NovikovMatrix make_matrix(std::vector<std::vector<NovikovScalar>> entries);

NovikovMatrix matrix_product(const NovikovMatrix& a, const NovikovMatrix& b);

// The degree-1 element alpha = sum_i g_i e_i acting by left exterior
// multiplication on the 2^n-dimensional exterior algebra over generators
// e_0..e_{n-1}.  Basis order is graded: subsets sorted by size, then
// numerically as bitmasks; signs are the usual Koszul signs for that order.
// The square of the result is identically zero.
NovikovMatrix wedge_differential(const std::vector<NovikovScalar>& gradient);

// Differential induced on H^*(torus) by the log-gradient of the potential at
// the given point (one coordinate per poly variable).  Entries are truncated
// at the potential's declared precision: the potential's terms beyond it are
// unknown, so the differential is too.
NovikovMatrix potential_differential(const PotentialFunction& pf,
                                     const std::vector<NovikovScalar>& point);

enum class DecompositionMode {
  automatic,     // differential when square with M^2 = 0, else cokernel
  differential,  // homology of (Lambda0^cols, M); requires M^2 = 0
  cokernel,      // Lambda0^rows / column span of M
};

// The invariant-factor shape of a module over the valuation ring:
// Lambda0^betti (+) sum_i Lambda0/T^(torsions[i]) where every reported
// torsion exponent is strictly below `precision`.  A free summand at finite
// precision only means "no torsion visible below the precision": its true
// torsion exponent, if any, is >= precision.
struct TorsionDecomposition {
  int betti = 0;
  std::vector<Rat> torsions;  // ascending multiset
  Level precision = Level::infinity();
  bool differential = false;  // interpretation that produced it

  // Least level at which torsion can occur: min torsion exponent when one is
  // visible, else the precision itself when free summands exist at finite
  // precision, else +infinity (genuinely free or zero module).
  Level torsion_floor() const;

  // "Lambda0^2 (+) Lambda0/T^(1/2)Lambda0" style rendering; free summands at
  // finite precision P render as (Lambda0/T^(P)Lambda0)^k since the
  // decomposition is only determined modulo T^P.
  std::string str() const;
};

// Valuation-ring elimination: repeatedly pivot on the entry of smallest
// valuation (ties row-major), which divides everything left, clear its row
// and column, recurse.  Entries with valuation at or beyond the working
// precision count as zero at that precision.  Pass `at_precision` to
// decompose at a coarser precision than the matrix carries; requesting a
// finer one than an entry supports raises precision_exhausted naming the
// entry.  Exact matrices whose pivots are non-monomial units need a finite
// precision for the unit inversion (precision_required otherwise).
TorsionDecomposition torsion_decomposition(
    const NovikovMatrix& m,
    DecompositionMode mode = DecompositionMode::automatic,
    std::optional<Level> at_precision = std::nullopt);

// Displacement-energy lower bounds for the Hofer norm of a displacing
// Hamiltonian, emitted only with their certificates:
//   bound_x     = E5         needs criticality order >= E5;
//   bound_mixed = 2(E5 - E1) needs criticality order >= 2(E5 - E1) and every
//                            bulk weight valuation >= E5 - E1.
// At least one certificate must hold (missing_certificate otherwise).
struct DisplacementBound {
  std::optional<Rat> bound_x;
  std::optional<Rat> bound_mixed;
  std::string provenance_x;
  std::string provenance_mixed;
};

DisplacementBound displacement_bounds(const Rat& e1, const Rat& e5,
                                      const Classification& cls);

// Mixed bound in the shrinking-fiber limit: given samples (E1(s), E5(s)) of
// an energy schedule with E1 -> 0, extrapolates E5 affinely in E1 to E1 = 0
// from the last two samples and returns 2 * E5(0).  Exact whenever the tail
// of the schedule is affine, which covers the linear fiber families here.
Rat limit_mixed_bound(const std::vector<std::pair<Rat, Rat>>& schedule);

// The flag-manifold comparison: the Gelfand-Tsetlin polytope of the SU(3)
// orbit through diag(a, b, -a-b) (a > b >= 0), the displacing Hamiltonian
// H = pi*(2x + 2y - z), its Hofer norm over the polytope vs the restriction
// to the singular fiber (b,b,b), and the theoretical floor 4pi(a-b) — the
// limiting mixed bound as the local torus approaches the sphere fiber.
struct FlagReport {
  Rat a;
  Rat b;
  Polytope polytope;
  std::vector<Rat> max_vertex;  // vertex where <gradient, v> is largest
  std::vector<Rat> min_vertex;
  PiValue norm_ambient;  // 2pi(2a+b), computed from the vertices
  PiValue norm_fiber;    // 0: H is constant on any fiber
  PiValue mixed;         // norm_ambient + 2*norm_fiber
  PiValue floor;         // 4pi(a-b) = lim 2E5
  PiValue slack;         // mixed - floor
  bool satisfied = false;
};

FlagReport flag_example_report(const Rat& a, const Rat& b);

}  // namespace diskpot
