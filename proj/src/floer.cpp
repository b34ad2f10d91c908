#include "diskpot/floer.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <utility>

#include "diskpot/errors.hpp"
#include "diskpot/laurent.hpp"
#include "diskpot/potential.hpp"

namespace diskpot {

namespace {

// Largest generator count accepted by wedge_differential; the matrix is
// 2^n x 2^n, so this caps it at 1024 x 1024.
constexpr int max_exterior_generators = 10;

Level min_entry_precision(const std::vector<std::vector<NovikovScalar>>& e) {
  Level p = Level::infinity();
  for (const auto& row : e) {
    for (const NovikovScalar& s : row) p = min(p, s.precision());
  }
  return p;
}

}  // namespace

NovikovMatrix make_matrix(std::vector<std::vector<NovikovScalar>> entries) {
  NovikovMatrix m;
  m.rows = entries.size();
  m.cols = entries.empty() ? 0 : entries.front().size();
  for (const auto& row : entries) {
    if (row.size() != m.cols) {
      fail("invalid_problem", "matrix rows have unequal lengths");
    }
  }
  m.precision = min_entry_precision(entries);
  m.entries = std::move(entries);
  return m;
}

NovikovMatrix matrix_product(const NovikovMatrix& a, const NovikovMatrix& b) {
  if (a.cols != b.rows) {
    fail("invalid_problem",
         "matrix dimensions do not match: " + std::to_string(a.rows) + "x" +
             std::to_string(a.cols) + " times " + std::to_string(b.rows) +
             "x" + std::to_string(b.cols));
  }
  std::vector<std::vector<NovikovScalar>> out(
      a.rows, std::vector<NovikovScalar>(b.cols));
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const NovikovScalar& aik = a.entries[i][k];
      if (aik.is_zero() && !aik.precision().is_finite()) continue;
      for (std::size_t j = 0; j < b.cols; ++j) {
        out[i][j] = out[i][j] + aik * b.entries[k][j];
      }
    }
  }
  return make_matrix(std::move(out));
}

NovikovMatrix wedge_differential(const std::vector<NovikovScalar>& gradient) {
  const int n = static_cast<int>(gradient.size());
  if (n > max_exterior_generators) {
    fail("invalid_problem",
         "too many generators for the exterior algebra: " +
             std::to_string(n) + " > " +
             std::to_string(max_exterior_generators));
  }
  const std::uint32_t size = std::uint32_t{1} << n;

  // Graded-lexicographic basis: subsets ordered by size, then numerically as
  // bitmasks.  pos[mask] is the basis index of the subset `mask`.
  std::vector<std::uint32_t> masks(size);
  std::iota(masks.begin(), masks.end(), 0u);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t x, std::uint32_t y) {
                     const int px = std::popcount(x);
                     const int py = std::popcount(y);
                     return px != py ? px < py : x < y;
                   });
  std::vector<std::size_t> pos(size);
  for (std::size_t i = 0; i < masks.size(); ++i) pos[masks[i]] = i;

  std::vector<std::vector<NovikovScalar>> entries(
      size, std::vector<NovikovScalar>(size));
  for (std::uint32_t subset = 0; subset < size; ++subset) {
    for (int i = 0; i < n; ++i) {
      if (subset & (std::uint32_t{1} << i)) continue;
      // e_i moves past every generator of the subset smaller than i.
      const int crossings =
          std::popcount(subset & ((std::uint32_t{1} << i) - 1));
      const std::uint32_t image = subset | (std::uint32_t{1} << i);
      entries[pos[image]][pos[subset]] =
          (crossings % 2 == 0) ? gradient[static_cast<std::size_t>(i)]
                               : gradient[static_cast<std::size_t>(i)].scaled(
                                     Rat(-1));
    }
  }
  return make_matrix(std::move(entries));
}

NovikovMatrix potential_differential(const PotentialFunction& pf,
                                     const std::vector<NovikovScalar>& point) {
  std::vector<NovikovScalar> gradient;
  gradient.reserve(pf.torus_vars.size());
  for (std::size_t i = 0; i < pf.torus_vars.size(); ++i) {
    // Terms of the potential at or beyond the declared precision are
    // unknown, so the differential is only known modulo that level.
    gradient.push_back(pf.poly.log_partial(static_cast<int>(i))
                           .eval(point)
                           .truncated(pf.energies.precision));
  }
  return wedge_differential(gradient);
}

Level TorsionDecomposition::torsion_floor() const {
  if (!torsions.empty()) return Level(torsions.front());
  if (betti > 0 && precision.is_finite()) return precision;
  return Level::infinity();
}

std::string TorsionDecomposition::str() const {
  if (betti == 0 && torsions.empty()) return "0";
  auto quotient = [](const std::string& exponent) {
    return "Lambda0/T^(" + exponent + ")Lambda0";
  };
  auto powered = [](const std::string& base, int count) {
    if (count == 1) return base;
    const bool atom = base.find("(+)") == std::string::npos &&
                      base.find('/') == std::string::npos;
    return (atom ? base : "(" + base + ")") + "^" + std::to_string(count);
  };
  std::vector<std::string> parts;
  if (betti > 0) {
    // At finite precision a "free" summand is only free modulo T^(precision):
    // reported as the quotient, a lower bound on its torsion exponent.
    parts.push_back(precision.is_finite()
                        ? powered(quotient(precision.str()), betti)
                        : powered("Lambda0", betti));
  }
  for (std::size_t i = 0; i < torsions.size();) {
    std::size_t j = i;
    while (j < torsions.size() && torsions[j] == torsions[i]) ++j;
    parts.push_back(powered(quotient(rat_to_string(torsions[i])),
                            static_cast<int>(j - i)));
    i = j;
  }
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += " (+) ";
    out += p;
  }
  return out;
}

TorsionDecomposition torsion_decomposition(const NovikovMatrix& m,
                                           DecompositionMode mode,
                                           std::optional<Level> at_precision) {
  if (m.entries.size() != m.rows) {
    fail("invalid_problem", "matrix row count does not match its entries");
  }
  for (const auto& row : m.entries) {
    if (row.size() != m.cols) {
      fail("invalid_problem", "matrix rows have unequal lengths");
    }
  }
  const Level available = min(m.precision, min_entry_precision(m.entries));
  const Level working = at_precision ? *at_precision : available;
  if (working > available) {
    // Name the limiting entry.
    for (std::size_t i = 0; i < m.rows; ++i) {
      for (std::size_t j = 0; j < m.cols; ++j) {
        if (m.entries[i][j].precision() == available) {
          fail("precision_exhausted",
               "matrix entry in row " + std::to_string(i + 1) + ", column " +
                   std::to_string(j + 1) + " is only known modulo T^(" +
                   available.str() + "), coarser than the requested T^(" +
                   working.str() + ")");
        }
      }
    }
    fail("precision_exhausted",
         "the matrix is only known modulo T^(" + available.str() +
             "), coarser than the requested T^(" + working.str() + ")");
  }
  if (working.is_finite() && working.finite_value() <= 0) {
    fail("invalid_problem", "the working precision must be positive");
  }

  const bool square = m.rows == m.cols;
  bool use_differential = false;
  if (mode != DecompositionMode::cokernel) {
    bool squares_to_zero = false;
    if (square) {
      squares_to_zero = true;
      const NovikovMatrix mm = matrix_product(m, m);
      for (const auto& row : mm.entries) {
        for (const NovikovScalar& s : row) {
          if (!s.is_zero()) squares_to_zero = false;
        }
      }
    }
    if (mode == DecompositionMode::differential) {
      if (!square) fail("invalid_problem", "a differential must be square");
      if (!squares_to_zero) {
        fail("invalid_problem", "the matrix does not square to zero");
      }
      use_differential = true;
    } else {
      use_differential = square && squares_to_zero;
    }
  }

  // Elimination over the valuation ring: the entry of least valuation
  // divides every other entry, so pivoting on it and clearing leaves all
  // remaining valuations at or above the pivot's — the recorded pivot
  // valuations are the invariant factors, in ascending order.
  std::vector<std::vector<NovikovScalar>> w = m.entries;
  std::vector<bool> row_used(m.rows, false), col_used(m.cols, false);
  std::vector<Rat> pivot_valuations;
  while (true) {
    std::size_t pi = 0, pj = 0;
    Level best = Level::infinity();
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < m.cols; ++j) {
        if (col_used[j]) continue;
        const Level v = w[i][j].valuation();
        if (v < working && v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    }
    if (!best.is_finite()) break;
    const Rat v = best.finite_value();

    const NovikovScalar unit = w[pi][pj].shifted(-v);
    if (!working.is_finite() && unit.terms().size() > 1) {
      fail("precision_required",
           "an exact decomposition would need the exact inverse of a "
           "non-constant unit (pivot " + w[pi][pj].str() +
               "); pass a finite working precision");
    }
    const NovikovScalar unit_inverse = unit.invert_unit(working - v);

    // Clear the pivot column.  Every multiplier q has valuation >= 0 because
    // the pivot's valuation is minimal, so entries stay known modulo the
    // working precision.
    for (std::size_t k = 0; k < m.rows; ++k) {
      if (k == pi || row_used[k]) continue;
      const NovikovScalar& a = w[k][pj];
      if (a.is_zero()) continue;
      const NovikovScalar q = a.shifted(-v) * unit_inverse;
      for (std::size_t c = 0; c < m.cols; ++c) {
        if (col_used[c] || c == pj) continue;
        w[k][c] = w[k][c] - q * w[pi][c];
      }
      // What remains of the cleared entry is q * (something of valuation >=
      // working), i.e. zero at the working precision.
      w[k][pj] = NovikovScalar::zero(working);
    }
    // Clear the pivot row.  The pivot column is now zero (at the working
    // precision) outside the pivot row, so the clearing column operations
    // change nothing but the pivot row itself.
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c == pj || col_used[c]) continue;
      w[pi][c] = NovikovScalar::zero(working);
    }
    row_used[pi] = true;
    col_used[pj] = true;
    pivot_valuations.push_back(v);
  }

  const int r = static_cast<int>(pivot_valuations.size());
  TorsionDecomposition out;
  out.precision = working;
  out.differential = use_differential;
  out.betti = use_differential ? static_cast<int>(m.cols) - 2 * r
                               : static_cast<int>(m.rows) - r;
  for (const Rat& v : pivot_valuations) {
    if (v > 0) out.torsions.push_back(v);
  }
  std::sort(out.torsions.begin(), out.torsions.end());
  return out;
}

DisplacementBound displacement_bounds(const Rat& e1, const Rat& e5,
                                      const Classification& cls) {
  if (e1 < 0 || e5 <= e1) {
    fail("invalid_thresholds",
         "displacement bounds need E5 > E1 >= 0, got E1 = " +
             rat_to_string(e1) + ", E5 = " + rat_to_string(e5));
  }
  const Rat gap = e5 - e1;         // valuation floor for bulk weights
  const Rat mixed = 2 * gap;       // the mixed-norm threshold 2(E5 - E1)

  DisplacementBound out;
  if (cls.criticality_order >= Level(e5)) {
    out.bound_x = e5;
    out.provenance_x = "the point is critical modulo T^(" +
                       rat_to_string(e5) +
                       "): criticality order " + cls.criticality_order.str() +
                       " >= E5";
  }
  bool weights_ok = true;
  for (const auto& [name, valuation] : cls.weight_valuations) {
    if (!(valuation >= Level(gap))) weights_ok = false;
  }
  if (weights_ok && cls.criticality_order >= Level(mixed)) {
    out.bound_mixed = mixed;
    out.provenance_mixed =
        "the point is critical modulo T^(" + rat_to_string(mixed) +
        ") = 2(E5-E1) and every bulk weight has valuation >= E5-E1 = " +
        rat_to_string(gap);
  }
  if (!out.bound_x && !out.bound_mixed) {
    fail("missing_certificate",
         "the point certifies no displacement bound: criticality order " +
             cls.criticality_order.str() + " is below E5 = " +
             rat_to_string(e5) + " and below 2(E5-E1) = " +
             rat_to_string(mixed) +
             (weights_ok ? "" : " (and a bulk weight valuation is below "
                                "E5-E1 = " + rat_to_string(gap) + ")"));
  }
  return out;
}

Rat limit_mixed_bound(const std::vector<std::pair<Rat, Rat>>& schedule) {
  if (schedule.empty()) {
    fail("invalid_problem", "an empty energy schedule determines no limit");
  }
  for (const auto& [e1, e5] : schedule) {
    if (e1 <= 0 || e5 <= 0) {
      fail("invalid_thresholds",
           "schedule energies must be positive, got E1 = " +
               rat_to_string(e1) + ", E5 = " + rat_to_string(e5));
    }
  }
  const auto& last = schedule.back();
  Rat e5_at_zero = last.second;
  for (std::size_t i = schedule.size() - 1; i-- > 0;) {
    if (schedule[i].first == last.first) continue;
    // Affine extrapolation through the last two samples with distinct E1,
    // exact whenever the tail of the schedule is affine in E1.
    const Rat slope =
        (last.second - schedule[i].second) / (last.first - schedule[i].first);
    e5_at_zero = last.second - last.first * slope;
    break;
  }
  if (e5_at_zero <= 0) {
    fail("invalid_problem",
         "the schedule extrapolates to a nonpositive limiting energy " +
             rat_to_string(e5_at_zero));
  }
  return 2 * e5_at_zero;
}

FlagReport flag_example_report(const Rat& a, const Rat& b) {
  if (!(a > b && b >= 0)) {
    fail("invalid_thresholds",
         "the spectral parameters must satisfy a > b >= 0, got a = " +
             rat_to_string(a) + ", b = " + rat_to_string(b));
  }
  // The Gelfand-Tsetlin polytope of the coadjoint orbit through
  // diag(a, b, -a-b): a >= x >= b, b >= y >= -a-b, x >= z >= y.
  std::vector<Facet> facets;
  facets.push_back(Facet{{1, 0, 0}, b, "x_lower"});
  facets.push_back(Facet{{-1, 0, 0}, -a, "x_upper"});
  facets.push_back(Facet{{0, -1, 0}, -b, "y_upper"});
  facets.push_back(Facet{{0, 1, 0}, -(a + b), "y_lower"});
  facets.push_back(Facet{{1, 0, -1}, Rat(0), "xz"});
  facets.push_back(Facet{{0, -1, 1}, Rat(0), "zy"});
  Polytope polytope(3, facets);

  // H = pi(2x + 2y - z), a displacing Hamiltonian for every regular torus
  // fiber; the fiber over (b, b, b) is the singular sphere fiber.
  const LinearHamiltonian h{{Rat(2), Rat(2), Rat(-1)}, Rat(1)};
  const std::vector<Rat> fiber{b, b, b};
  const HoferReport norms = hofer_norms(polytope, h, fiber);

  FlagReport report;
  report.a = a;
  report.b = b;
  report.polytope = polytope;
  const auto verts = vertices(polytope);
  auto value = [&](const std::vector<Rat>& u) {
    Rat acc(0);
    for (std::size_t i = 0; i < u.size(); ++i) acc += h.gradient[i] * u[i];
    return acc;
  };
  report.max_vertex = verts.front();
  report.min_vertex = verts.front();
  for (const auto& v : verts) {
    if (value(v) > value(report.max_vertex)) report.max_vertex = v;
    if (value(v) < value(report.min_vertex)) report.min_vertex = v;
  }
  report.norm_ambient = norms.norm_ambient;
  report.norm_fiber = *norms.norm_fiber;
  report.mixed = PiValue{report.norm_ambient.coefficient +
                         2 * report.norm_fiber.coefficient};
  // The limiting mixed bound as the local torus approaches the sphere
  // fiber: the disk energies degenerate to 2E5 -> 4pi(a-b).
  report.floor = PiValue{4 * (a - b)};
  report.slack = PiValue{report.mixed.coefficient - report.floor.coefficient};
  report.satisfied = report.mixed.coefficient >= report.floor.coefficient;
  return report;
}

}  // namespace diskpot
