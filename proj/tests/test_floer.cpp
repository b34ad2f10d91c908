#include <doctest.h>

#include <functional>
#include <string>
#include <vector>

#include "diskpot/errors.hpp"
#include "diskpot/floer.hpp"
#include "diskpot/potential.hpp"
#include "diskpot/solver.hpp"

using namespace diskpot;

namespace {

NovikovScalar tp(const Rat& e) { return NovikovScalar::t_power(e); }
Rat rat(long n, long d = 1) { return Rat(n) / d; }

std::string code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DomainError& e) {
    return e.code();
  }
  return "";
}

PotentialFunction undeformed_potential() {
  PotentialSpec spec;
  spec.polytope = Polytope(3, {{{1, 0, 0}, Rat(0), "K1"},
                               {{0, -1, 0}, Rat(0), "K2"},
                               {{1, 0, -1}, Rat(0), "K3"},
                               {{0, -1, 1}, Rat(0), "K4"}});
  spec.basepoint = {rat(1, 4), rat(-1, 4), Rat(0)};
  spec.e5 = rat(7, 8);
  return build_potential(spec);
}

bool matrix_is_zero(const NovikovMatrix& m) {
  for (const auto& row : m.entries) {
    for (const auto& s : row) {
      if (!s.is_zero()) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("matrix construction and multiplication") {
  NovikovMatrix d = make_matrix({{tp(rat(1, 2)), NovikovScalar::zero()},
                                 {NovikovScalar::zero(), tp(rat(2))}});
  CHECK(d.rows == 2);
  CHECK(d.cols == 2);
  CHECK(!d.precision.is_finite());
  NovikovMatrix sq = matrix_product(d, d);
  CHECK(sq.entries[0][0].leading_exponent() == rat(1));
  CHECK(sq.entries[1][1].leading_exponent() == rat(4));
  CHECK(code_of([&] { matrix_product(d, make_matrix({{tp(rat(1))}})); }) ==
        "invalid_problem");
  CHECK(code_of([] { make_matrix({{NovikovScalar::zero()}, {}}); }) ==
        "invalid_problem");
}

TEST_CASE("diagonal valuations become torsion exponents") {
  NovikovMatrix d = make_matrix({{tp(rat(1, 2)), NovikovScalar::zero()},
                                 {NovikovScalar::zero(), tp(rat(2))}});
  TorsionDecomposition td = torsion_decomposition(d);
  CHECK(!td.differential);  // squares to diag(T, T^4), not zero
  CHECK(td.betti == 0);
  CHECK((td.torsions == std::vector<Rat>{rat(1, 2), rat(2)}));
  CHECK(!td.precision.is_finite());
  CHECK(td.str() == "Lambda0/T^(1/2)Lambda0 (+) Lambda0/T^(2)Lambda0");
  CHECK(td.torsion_floor() == Level(rat(1, 2)));

  // viewed modulo T^1 the T^2 pivot is invisible: one summand reads as free
  TorsionDecomposition coarse =
      torsion_decomposition(d, DecompositionMode::automatic, Level(rat(1)));
  CHECK(coarse.betti == 1);
  CHECK((coarse.torsions == std::vector<Rat>{rat(1, 2)}));
  CHECK(coarse.precision == Level(rat(1)));
  CHECK(coarse.str() == "Lambda0/T^(1)Lambda0 (+) Lambda0/T^(1/2)Lambda0");
}

TEST_CASE("identity and zero matrices decompose trivially") {
  NovikovMatrix eye =
      make_matrix({{NovikovScalar::constant(rat(1)), NovikovScalar::zero()},
                   {NovikovScalar::zero(), NovikovScalar::constant(rat(1))}});
  TorsionDecomposition td = torsion_decomposition(eye);
  CHECK(!td.differential);
  CHECK(td.betti == 0);
  CHECK(td.torsions.empty());
  CHECK(td.str() == "0");
  CHECK(!td.torsion_floor().is_finite());

  NovikovMatrix zero =
      make_matrix({{NovikovScalar::zero(), NovikovScalar::zero()},
                   {NovikovScalar::zero(), NovikovScalar::zero()}});
  TorsionDecomposition tz = torsion_decomposition(zero);
  CHECK(tz.differential);  // the zero matrix squares to zero
  CHECK(tz.betti == 2);
  CHECK(tz.torsions.empty());
  CHECK(tz.str() == "Lambda0^2");
  TorsionDecomposition tzc =
      torsion_decomposition(zero, DecompositionMode::cokernel);
  CHECK(!tzc.differential);
  CHECK(tzc.betti == 2);
}

TEST_CASE("elimination arithmetic and unimodular invariance") {
  NovikovMatrix m = make_matrix(
      {{tp(rat(1)), tp(rat(1))}, {tp(rat(1)), tp(rat(1)) + tp(rat(3, 2))}});
  TorsionDecomposition td =
      torsion_decomposition(m, DecompositionMode::cokernel);
  CHECK(td.betti == 0);
  CHECK((td.torsions == std::vector<Rat>{rat(1), rat(3, 2)}));

  NovikovMatrix u = make_matrix(
      {{NovikovScalar::constant(rat(1)), NovikovScalar::constant(rat(1))},
       {NovikovScalar::zero(), NovikovScalar::constant(rat(1))}});
  NovikovMatrix v = make_matrix(
      {{NovikovScalar::constant(rat(1)), NovikovScalar::zero()},
       {NovikovScalar::constant(rat(1)), NovikovScalar::constant(rat(1))}});
  // the conjugate's pivot gains a non-constant unit factor, so compare the
  // decompositions at a shared finite precision
  NovikovMatrix conj = matrix_product(matrix_product(u, m), v);
  TorsionDecomposition tc =
      torsion_decomposition(conj, DecompositionMode::cokernel, Level(rat(2)));
  TorsionDecomposition tm =
      torsion_decomposition(m, DecompositionMode::cokernel, Level(rat(2)));
  CHECK(tc.betti == tm.betti);
  CHECK(tc.torsions == tm.torsions);
  CHECK(tc.torsions == td.torsions);
}

TEST_CASE("non-constant unit pivots need a finite working precision") {
  NovikovMatrix m = make_matrix(
      {{NovikovScalar::constant(rat(1)) + tp(rat(1, 2)), NovikovScalar::zero()},
       {NovikovScalar::zero(), tp(rat(1))}});
  CHECK(code_of([&] { torsion_decomposition(m); }) == "precision_required");
  TorsionDecomposition td =
      torsion_decomposition(m, DecompositionMode::automatic, Level(rat(2)));
  CHECK(td.betti == 0);
  CHECK((td.torsions == std::vector<Rat>{rat(1)}));
}

TEST_CASE("requests beyond the known precision are refused") {
  NovikovMatrix m = make_matrix({{tp(rat(1, 2)).truncated(Level(rat(7, 8)))}});
  CHECK(m.precision == Level(rat(7, 8)));
  CHECK(code_of([&] {
          torsion_decomposition(m, DecompositionMode::automatic,
                                Level(rat(5, 4)));
        }) == "precision_exhausted");
}

TEST_CASE("differential mode demands a square differential") {
  NovikovMatrix rect = make_matrix({{tp(rat(1)), tp(rat(1))}});
  CHECK(code_of([&] {
          torsion_decomposition(rect, DecompositionMode::differential);
        }) == "invalid_problem");
  TorsionDecomposition td =
      torsion_decomposition(rect, DecompositionMode::cokernel);
  CHECK(td.betti == 0);
  CHECK((td.torsions == std::vector<Rat>{rat(1)}));

  NovikovMatrix eye = make_matrix({{NovikovScalar::constant(rat(1))}});
  CHECK(code_of([&] {
          torsion_decomposition(eye, DecompositionMode::differential);
        }) == "invalid_problem");
}

TEST_CASE("wedge differential structure") {
  // single generator: 4 positive entries, no signs
  NovikovMatrix d = wedge_differential(
      {tp(rat(1, 2)), NovikovScalar::zero(), NovikovScalar::zero()});
  CHECK(d.rows == 8);
  CHECK(d.cols == 8);
  int nonzero = 0;
  for (const auto& row : d.entries) {
    for (const auto& s : row) {
      if (!s.is_zero()) {
        ++nonzero;
        CHECK(s.leading_coefficient() == rat(1));
        CHECK(s.leading_exponent() == rat(1, 2));
      }
    }
  }
  CHECK(nonzero == 4);
  TorsionDecomposition td = torsion_decomposition(d);
  CHECK(td.differential);
  CHECK(td.betti == 0);
  CHECK((td.torsions ==
         std::vector<Rat>{rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)}));
  CHECK(td.str() == "(Lambda0/T^(1/2)Lambda0)^4");

  // generic gradient still squares to zero; a crossing flips the sign
  NovikovMatrix g = wedge_differential(
      {tp(rat(1, 3)) + tp(rat(2)),
       NovikovScalar::constant(rat(-2)) + tp(rat(1, 2)),
       tp(rat(5, 8)).scaled(rat(3))});
  CHECK(matrix_is_zero(matrix_product(g, g)));
  // basis order {}, {0}, {1}, {2}, {0,1}, {0,2}, {1,2}, {0,1,2}:
  // inserting generator 1 into {0} crosses one generator
  CHECK(g.entries[4][1].leading_coefficient() == rat(2));

  CHECK(code_of([] { wedge_differential(std::vector<NovikovScalar>(11)); }) ==
        "invalid_problem");
  NovikovMatrix trivial = wedge_differential({});
  CHECK(trivial.rows == 1);
  CHECK(trivial.cols == 1);
  CHECK(trivial.entries[0][0].is_zero());
}

TEST_CASE("the exactly-critical fiber yields a fully free module") {
  PotentialFunction pf = undeformed_potential();
  CHECK(pf.energies.precision == Level(rat(5, 4)));

  std::vector<NovikovScalar> rho0 = {NovikovScalar::constant(rat(1)),
                                     NovikovScalar::constant(rat(1)),
                                     NovikovScalar::constant(rat(-1))};
  NovikovMatrix d = potential_differential(pf, rho0);
  CHECK(d.rows == 8);
  CHECK(d.cols == 8);
  CHECK(d.precision == Level(rat(5, 4)));
  TorsionDecomposition full = torsion_decomposition(d);
  CHECK(full.differential);
  CHECK(full.betti == 8);
  CHECK(full.torsions.empty());
  CHECK(full.precision == Level(rat(5, 4)));

  TorsionDecomposition shown =
      torsion_decomposition(d, DecompositionMode::automatic, Level(rat(7, 8)));
  CHECK(shown.betti == 8);
  CHECK(shown.str() == "(Lambda0/T^(7/8)Lambda0)^8");
  CHECK(shown.torsion_floor() == Level(rat(7, 8)));
}

TEST_CASE("displacement bounds come with certificates") {
  PotentialFunction pf = undeformed_potential();
  std::vector<NovikovScalar> rho0 = {NovikovScalar::constant(rat(1)),
                                     NovikovScalar::constant(rat(1)),
                                     NovikovScalar::constant(rat(-1))};
  Classification cls = classify_point(pf, rho0);
  CHECK(cls.criticality_order == Level(rat(5, 4)));
  REQUIRE(cls.meets_e5.has_value());
  CHECK(*cls.meets_e5);
  REQUIRE(cls.meets_2e.has_value());
  CHECK(*cls.meets_2e);

  DisplacementBound bounds = displacement_bounds(rat(1, 4), rat(7, 8), cls);
  REQUIRE(bounds.bound_x.has_value());
  CHECK(*bounds.bound_x == rat(7, 8));
  REQUIRE(bounds.bound_mixed.has_value());
  CHECK(*bounds.bound_mixed == rat(5, 4));
  CHECK(!bounds.provenance_x.empty());
  CHECK(!bounds.provenance_mixed.empty());

  std::vector<NovikovScalar> bad = {NovikovScalar::constant(rat(1)),
                                    NovikovScalar::constant(rat(1)),
                                    NovikovScalar::constant(rat(1))};
  Classification cbad = classify_point(pf, bad);
  CHECK(cbad.criticality_order == Level(rat(1, 4)));
  CHECK(code_of([&] { displacement_bounds(rat(1, 4), rat(7, 8), cbad); }) ==
        "missing_certificate");
  CHECK(code_of([&] { displacement_bounds(rat(7, 8), rat(7, 8), cls); }) ==
        "invalid_thresholds");
}

TEST_CASE("limit of the mixed bound along an energy schedule") {
  CHECK(limit_mixed_bound({{rat(1, 4), rat(7, 8)}, {rat(1, 8), rat(15, 16)}}) ==
        rat(2));
  CHECK(limit_mixed_bound({{rat(1, 4), rat(7, 8)}}) == rat(7, 4));
  CHECK(limit_mixed_bound({{rat(1, 4), rat(7, 8)}, {rat(1, 4), rat(3, 4)}}) ==
        rat(3, 2));
  CHECK(code_of([] { limit_mixed_bound({}); }) == "invalid_problem");
  CHECK(code_of([] { limit_mixed_bound({{rat(0), rat(1)}}); }) ==
        "invalid_thresholds");
}

TEST_CASE("flag-manifold hofer report") {
  FlagReport r = flag_example_report(rat(2), rat(1));
  CHECK(r.polytope.facets().size() == 6);
  CHECK((r.max_vertex == std::vector<Rat>{rat(2), rat(1), rat(1)}));
  CHECK((r.min_vertex == std::vector<Rat>{rat(1), rat(-3), rat(1)}));
  CHECK(r.norm_ambient == PiValue{rat(10)});
  CHECK(r.norm_fiber == PiValue{rat(0)});
  CHECK(r.mixed == PiValue{rat(10)});
  CHECK(r.floor == PiValue{rat(4)});
  CHECK(r.slack == PiValue{rat(6)});
  CHECK(r.satisfied);
  CHECK(r.norm_ambient.str() == "10π");

  // the degenerate corner where the inequality is exactly tight
  FlagReport eq = flag_example_report(rat(1), rat(0));
  CHECK(eq.norm_ambient == PiValue{rat(4)});
  CHECK(eq.floor == PiValue{rat(4)});
  CHECK(eq.slack == PiValue{rat(0)});
  CHECK(eq.satisfied);
  CHECK((eq.max_vertex == std::vector<Rat>{rat(1), rat(0), rat(0)}));
  CHECK((eq.min_vertex == std::vector<Rat>{rat(0), rat(-1), rat(0)}));

  CHECK(code_of([] { flag_example_report(rat(1), rat(1)); }) ==
        "invalid_thresholds");
  CHECK(code_of([] { flag_example_report(rat(1), rat(-1)); }) ==
        "invalid_thresholds");
}
