#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diskpot/rational.hpp"

namespace diskpot {

// One half-space <normal, u> - offset >= 0 of a moment polytope.  Normals
// are primitive integer vectors; the rational offset fixes the facet's
// position.  The distance ell(u) = <normal, u> - offset of an interior point
// to the facet is the symplectic area (disk energy) attached to it.
struct Facet {
  std::vector<long long> normal;
  Rat offset;
  std::string label;
};

class Polytope {
public:
  // Empty placeholder so aggregates holding a polytope can be assembled
  // field by field; every real polytope comes from the validating ctor.
  Polytope() : dim_(0) {}
  Polytope(int dim, std::vector<Facet> facets);

  int dim() const { return dim_; }
  const std::vector<Facet>& facets() const { return facets_; }
  int facet_index(const std::string& label) const;  // -1 when absent

  // ell_i(u) for every facet, in facet order.
  std::vector<Rat> facet_distances(const std::vector<Rat>& point) const;

  bool contains(const std::vector<Rat>& point) const;

private:
  int dim_;
  std::vector<Facet> facets_;
};

// Solution set of the equal-distance system ell_i(u) = t over a chosen facet
// subset, parametrized as u(s) = base + s*direction, t(s) = t_base +
// s*t_direction.  When the system pins the point down completely the locus
// degenerates to a single point (is_point == true, s irrelevant).  When the
// distance parameter moves along the family, the parametrization is
// normalized so that s is t itself (t_base = 0, t_direction = 1).
struct FiberLocus {
  bool is_point;
  std::vector<Rat> base;
  std::vector<Rat> direction;
  Rat t_base;
  Rat t_direction;

  std::vector<Rat> at(const Rat& s) const;
  Rat distance_at(const Rat& s) const { return t_base + s * t_direction; }
};

// Requires at least two facets.  Throws no_solution when the equal-distance
// system is inconsistent and underdetermined_locus when the solution family
// has more than one parameter.
FiberLocus monotone_fiber_locus(const Polytope& p,
                                const std::vector<std::string>& labels);

// Exhaustive vertex enumeration for dimension <= 4 and at most 32 facets.
// Checks for recession directions first and throws unbounded_polytope when
// one exists (the polytope is assumed nonempty: every caller here has an
// interior basepoint in hand).  Vertices are deduplicated and sorted.
std::vector<std::vector<Rat>> vertices(const Polytope& p);

// A Hamiltonian linear in the moment-map coordinates:
//   H(u) = pi_scale * pi * <gradient, u>.
// The pi factor is symbolic and survives into the reported norms.
struct LinearHamiltonian {
  std::vector<Rat> gradient;
  Rat pi_scale;
};

// An exact rational multiple of pi.
struct PiValue {
  Rat coefficient;
  std::string str() const;
  friend bool operator==(const PiValue& a, const PiValue& b) {
    return a.coefficient == b.coefficient;
  }
};

struct HoferReport {
  PiValue norm_ambient;                 // max - min of H over the polytope
  std::optional<PiValue> norm_fiber;    // 0: H is constant on each fiber
};

// Oscillation norms of a linear Hamiltonian: over the whole (bounded)
// polytope, and relative to the torus fiber above `fiber` when given.  H is
// a function of the moment coordinates alone, hence constant on every fiber,
// so the relative norm vanishes whenever it is defined.
HoferReport hofer_norms(const Polytope& p, const LinearHamiltonian& h,
                        const std::optional<std::vector<Rat>>& fiber);

}  // namespace diskpot
