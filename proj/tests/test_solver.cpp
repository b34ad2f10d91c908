#include <doctest.h>

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "diskpot/errors.hpp"
#include "diskpot/potential.hpp"
#include "diskpot/solver.hpp"

using namespace diskpot;

namespace {

Polytope cotangent_sphere() {
  return Polytope(3, {{{1, 0, 0}, Rat(0), "K1"},
                      {{0, -1, 0}, Rat(0), "K2"},
                      {{1, 0, -1}, Rat(0), "K3"},
                      {{0, -1, 1}, Rat(0), "K4"}});
}

Polytope quadric_threefold() {
  return Polytope(3, {{{1, 0, 0}, Rat(0), "K1"},
                      {{0, -1, 0}, Rat(0), "K2"},
                      {{1, 0, -1}, Rat(0), "K3"},
                      {{0, -1, 1}, Rat(0), "K4"},
                      {{-1, 1, 0}, Rat(-1), "K5"}});
}

Polytope unit_cube() {
  return Polytope(3, {{{1, 0, 0}, Rat(0), "F1"},
                      {{-1, 0, 0}, Rat(-1), "F2"},
                      {{0, 1, 0}, Rat(0), "F3"},
                      {{0, -1, 0}, Rat(-1), "F4"},
                      {{0, 0, 1}, Rat(0), "F5"},
                      {{0, 0, -1}, Rat(-1), "F6"}});
}

// deformed potential with a symbolic facet weight and one extra far term
PotentialFunction deformed_potential() {
  PotentialSpec spec;
  spec.polytope = cotangent_sphere();
  spec.basepoint = {Rat(1, 4), Rat(-1, 4), Rat(0)};
  spec.e5 = Rat(7, 8);
  spec.bulk = {{"K1", std::nullopt}};
  spec.outside_terms = {{{2, 1, 0}, Rat(7, 8), NovikovScalar::constant(Rat(1))}};
  return apply_bulk(build_potential(spec), spec);
}

std::string code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DomainError& e) {
    return e.code();
  }
  return "";
}

NovikovScalar one() { return NovikovScalar::constant(Rat(1)); }

}  // namespace

TEST_CASE("preparation of the fixed-slice deformed system") {
  PotentialFunction pf = deformed_potential();
  CHECK(pf.weight_vars == std::vector<std::string>{"w"});
  CHECK(pf.energies.precision == Level(Rat(5, 4)));

  CriticalProblem prob;
  prob.potential = pf;
  prob.fixed["x"] = one();
  SolverOptions opt;
  PreparedSystem prep = prepare(prob, opt);
  CHECK(prep.equations.size() == 3);
  CHECK((prep.active == std::vector<int>{1, 2, 3}));
  CHECK((prep.active_is_weight == std::vector<bool>{false, false, true}));
  for (const ClearedEquation& ce : prep.equations) {
    CHECK(ce.gamma == Rat(1, 4));
  }
  CHECK((prep.grid == std::vector<Rat>{Rat(5, 8)}));
  CHECK(prep.e_max == Level(Rat(5, 4)));
  CHECK(prep.coordinate_precision() == Level(Rat(1)));
  CHECK(prep.is_square());
}

TEST_CASE("leading solve and certified lift on the deformed system") {
  PotentialFunction pf = deformed_potential();
  CriticalProblem prob;
  prob.potential = pf;
  prob.fixed["x"] = one();
  SolverOptions opt;
  PreparedSystem prep = prepare(prob, opt);

  std::vector<LeadingSolution> leads = solve_leading(prep, opt);
  REQUIRE(leads.size() == 1);
  CHECK(leads[0].exact);
  CHECK((leads[0].point == std::vector<Rat>{Rat(1), Rat(-1), Rat(0)}));
  CHECK(leads[0].nondegenerate);
  CHECK(leads[0].jacobian_det == 1);
  CHECK(leads[0].nullity == 0);

  LiftedPoint lp = newton_lift(prep, leads[0], opt);
  CHECK(lp.exact);
  CHECK(lp.certified);
  CHECK(lp.iterations == 1);
  CHECK(lp.first_correction == Level(Rat(5, 8)));
  CHECK(lp.residual_valuation == Level(Rat(3, 2)));
  REQUIRE(lp.assignment.size() == 3);
  CHECK(lp.assignment[0].first == "y");
  CHECK(lp.assignment[1].first == "z");
  CHECK(lp.assignment[2].first == "w");
  // frozen correction coefficients at T^{5/8}: (-2, +1, -1)
  CHECK(lp.assignment[0].second.coefficient_at(Rat(0)) == 1);
  CHECK(lp.assignment[0].second.coefficient_at(Rat(5, 8)) == -2);
  CHECK(lp.assignment[1].second.coefficient_at(Rat(0)) == -1);
  CHECK(lp.assignment[1].second.coefficient_at(Rat(5, 8)) == 1);
  CHECK(lp.assignment[2].second.valuation() == Level(Rat(5, 8)));
  CHECK(lp.assignment[2].second.coefficient_at(Rat(5, 8)) == -1);
  // coordinates are delivered modulo the coordinate precision
  for (const auto& [name, value] : lp.assignment) {
    (void)name;
    CHECK(value.precision() == Level(Rat(1)));
  }
}

TEST_CASE("classification of lifted and unlifted points") {
  PotentialFunction pf = deformed_potential();
  CriticalProblem prob;
  prob.potential = pf;
  prob.fixed["x"] = one();
  SolverOptions opt;
  PreparedSystem prep = prepare(prob, opt);
  LiftedPoint lp = newton_lift(prep, solve_leading(prep, opt)[0], opt);

  std::vector<NovikovScalar> full = {one(), lp.assignment[0].second,
                                     lp.assignment[1].second,
                                     lp.assignment[2].second};
  Classification cls = classify_point(pf, full);
  CHECK(cls.criticality_order == Level(Rat(5, 4)));
  REQUIRE(cls.meets_e5.has_value());
  CHECK(*cls.meets_e5);
  REQUIRE(cls.meets_2e.has_value());
  CHECK(*cls.meets_2e);
  REQUIRE(cls.weight_valuations.size() == 1);
  CHECK(cls.weight_valuations[0].first == "w");
  CHECK(cls.weight_valuations[0].second == Level(Rat(5, 8)));

  // an uncorrected nearby point only meets the first energy level
  Classification bad = classify_point(
      pf, {one(), one(), one(), NovikovScalar::zero()});
  CHECK(bad.criticality_order == Level(Rat(1, 4)));
  REQUIRE(bad.meets_e5.has_value());
  CHECK(!*bad.meets_e5);
}

TEST_CASE("without far terms the leading point is exactly critical") {
  PotentialSpec spec;
  spec.polytope = cotangent_sphere();
  spec.basepoint = {Rat(1, 4), Rat(-1, 4), Rat(0)};
  spec.e5 = Rat(7, 8);
  spec.bulk = {{"K1", std::nullopt}};
  PotentialFunction pf = apply_bulk(build_potential(spec), spec);
  CriticalProblem prob{pf, {{"x", one()}}};
  SolverOptions opt;
  PreparedSystem prep = prepare(prob, opt);
  CHECK(prep.grid.empty());
  std::vector<LeadingSolution> leads = solve_leading(prep, opt);
  REQUIRE(leads.size() == 1);
  CHECK(leads[0].jacobian_det == 1);
  LiftedPoint lp = newton_lift(prep, leads[0], opt);
  CHECK(lp.iterations == 0);
  CHECK(!lp.residual_valuation.is_finite());
  CHECK(lp.certified);
}

TEST_CASE("the unfixed system is a degenerate one-parameter family") {
  PotentialSpec spec;
  spec.polytope = cotangent_sphere();
  spec.basepoint = {Rat(1, 4), Rat(-1, 4), Rat(0)};
  spec.e5 = Rat(7, 8);
  spec.bulk = {{"K1", std::nullopt}};
  PotentialFunction pf = apply_bulk(build_potential(spec), spec);
  CriticalProblem prob{pf, {}};
  SolverOptions opt;
  PreparedSystem prep = prepare(prob, opt);
  CHECK(prep.active.size() == 4);
  CHECK(!prep.is_square());
  std::vector<LeadingSolution> leads = solve_leading(prep, opt);
  REQUIRE(leads.size() == 2);
  for (const LeadingSolution& s : leads) {
    CHECK(!s.nondegenerate);
    CHECK(s.nullity == 1);
  }
  CHECK((leads[0].point == std::vector<Rat>{Rat(-1), Rat(-1), Rat(-1), Rat(0)}));
  CHECK((leads[1].point == std::vector<Rat>{Rat(1), Rat(1), Rat(-1), Rat(0)}));
  CHECK(code_of([&] { newton_lift(prep, leads[0], opt); }) ==
        "invalid_problem");
}

TEST_CASE("product of three spheres has eight exact points") {
  PotentialSpec spec;
  spec.polytope = unit_cube();
  spec.basepoint = {Rat(1, 2), Rat(1, 2), Rat(1, 2)};
  PotentialFunction pf = build_potential(spec);
  CHECK(!pf.energies.precision.is_finite());
  CriticalProblem prob{pf, {}};
  SolverOptions opt;
  PreparedSystem prep = prepare(prob, opt);
  CHECK(prep.is_square());
  std::vector<LeadingSolution> leads = solve_leading(prep, opt);
  REQUIRE(leads.size() == 8);
  for (const LeadingSolution& s : leads) {
    CHECK(s.nondegenerate);
    CHECK((s.jacobian_det == 8 || s.jacobian_det == -8));
    LiftedPoint l = newton_lift(prep, s, opt);
    CHECK(l.iterations == 0);
    CHECK(!l.residual_valuation.is_finite());
    CHECK(l.certified);
  }
}

TEST_CASE("irrational leading locus defeats exact mode but not numeric") {
  PotentialSpec spec;
  spec.polytope = quadric_threefold();
  spec.basepoint = {Rat(1, 3), Rat(-1, 3), Rat(0)};
  PotentialFunction pf = build_potential(spec);
  CriticalProblem prob{pf, {}};
  SolverOptions opt;
  PreparedSystem prep = prepare(prob, opt);
  CHECK(prep.is_square());
  CHECK(code_of([&] { solve_leading(prep, opt); }) == "no_solution_found");

  SolverOptions nopt;
  nopt.mode = SolveMode::numeric;
  std::vector<LeadingSolution> leads = solve_leading(prep, nopt);
  REQUIRE(leads.size() == 3);
  for (const LeadingSolution& s : leads) {
    CHECK(!s.exact);
    CHECK(s.nondegenerate);
    const std::complex<double> x = s.numeric_point[0];
    const std::complex<double> y = s.numeric_point[1];
    const std::complex<double> z = s.numeric_point[2];
    CHECK(std::abs(z - std::complex<double>(1.0, 0.0)) < 1e-8);
    CHECK(std::abs(x * x * x - std::complex<double>(0.5, 0.0)) < 1e-8);
    CHECK(std::abs(x * y - std::complex<double>(1.0, 0.0)) < 1e-8);
    LiftedPoint l = newton_lift(prep, s, nopt);
    CHECK(!l.exact);
    CHECK(!l.certified);
    CHECK(!l.residual_valuation.is_finite());
  }

  // the same seed stream reproduces the same points bit-for-bit
  std::vector<LeadingSolution> again = solve_leading(prep, nopt);
  REQUIRE(again.size() == leads.size());
  for (std::size_t i = 0; i < leads.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(again[i].numeric_point[j] == leads[i].numeric_point[j]);
    }
  }
}

TEST_CASE("user-supplied candidates and seeds") {
  PotentialFunction pf = deformed_potential();
  CriticalProblem prob;
  prob.potential = pf;
  prob.fixed["x"] = one();
  SolverOptions opt;
  PreparedSystem prep = prepare(prob, opt);

  // a duplicate of a default candidate is deduplicated, a correct extra one
  // changes nothing
  SolverOptions with_candidates = opt;
  with_candidates.exact_candidates = {{Rat(1), Rat(-1), Rat(0)},
                                      {Rat(5), Rat(5), Rat(5)}};
  std::vector<LeadingSolution> leads = solve_leading(prep, with_candidates);
  CHECK(leads.size() == 1);

  // wrong arity is rejected
  SolverOptions bad = opt;
  bad.exact_candidates = {{Rat(1), Rat(-1)}};
  CHECK(code_of([&] { solve_leading(prep, bad); }) == "invalid_problem");

  // numeric: a single user seed with no random exploration finds one root
  PotentialSpec qspec;
  qspec.polytope = quadric_threefold();
  qspec.basepoint = {Rat(1, 3), Rat(-1, 3), Rat(0)};
  PotentialFunction qpf = build_potential(qspec);
  CriticalProblem qprob{qpf, {}};
  PreparedSystem qprep = prepare(qprob, opt);
  SolverOptions seeded;
  seeded.mode = SolveMode::numeric;
  seeded.seed_count = 0;
  seeded.numeric_seeds = {{std::complex<double>(0.8, 0.0),
                           std::complex<double>(1.3, 0.0),
                           std::complex<double>(1.0, 0.0)}};
  std::vector<LeadingSolution> one_root = solve_leading(qprep, seeded);
  REQUIRE(one_root.size() == 1);
  CHECK(std::abs(one_root[0].numeric_point[0] -
                 std::complex<double>(0.7937005259840998, 0.0)) < 1e-9);

  SolverOptions bad_seed;
  bad_seed.mode = SolveMode::numeric;
  bad_seed.numeric_seeds = {{std::complex<double>(1.0, 0.0)}};
  CHECK(code_of([&] { solve_leading(qprep, bad_seed); }) == "invalid_problem");
}

TEST_CASE("fixing validation") {
  PotentialFunction pf = deformed_potential();
  SolverOptions opt;

  CriticalProblem unknown{pf, {{"q", one()}}};
  CHECK(code_of([&] { prepare(unknown, opt); }) == "invalid_problem");

  CriticalProblem weight{pf, {{"w", one()}}};
  CHECK(code_of([&] { prepare(weight, opt); }) == "invalid_problem");

  CriticalProblem nonunit{pf, {{"x", NovikovScalar::t_power(Rat(1, 2))}}};
  CHECK(code_of([&] { prepare(nonunit, opt); }) == "not_a_unit");

  PotentialSpec plain;
  plain.polytope = cotangent_sphere();
  plain.basepoint = {Rat(1, 4), Rat(-1, 4), Rat(0)};
  PotentialFunction ppf = build_potential(plain);
  CriticalProblem all_fixed{
      ppf, {{"x", one()}, {"y", one()}, {"z", one()}}};
  CHECK(code_of([&] { prepare(all_fixed, opt); }) == "invalid_problem");
}

TEST_CASE("multi-term fixed values need a finite working precision") {
  // z appears with negative exponents, so substituting a genuine series for
  // it inverts that series: exact inversion is an infinite computation
  PotentialSpec plain;
  plain.polytope = cotangent_sphere();
  plain.basepoint = {Rat(1, 4), Rat(-1, 4), Rat(0)};
  PotentialFunction ppf = build_potential(plain);
  NovikovScalar series_z =
      NovikovScalar::constant(Rat(-1)) + NovikovScalar::t_power(Rat(1, 2));
  CriticalProblem prob{ppf, {{"z", series_z}}};
  SolverOptions opt;
  CHECK(code_of([&] { prepare(prob, opt); }) == "precision_required");

  // declaring E5 bounds the working precision and the same fix prepares
  PotentialSpec with_e5 = plain;
  with_e5.e5 = Rat(7, 8);
  PotentialFunction bpf = build_potential(with_e5);
  CriticalProblem bounded{bpf, {{"z", series_z}}};
  PreparedSystem prep = prepare(bounded, opt);
  CHECK(prep.active.size() == 2);
}

TEST_CASE("mixed leading energies demand per-equation rescaling") {
  Polytope box(2, {{{1, 0}, Rat(0), "A1"},
                   {{-1, 0}, Rat(-1), "A2"},
                   {{0, 1}, Rat(0), "B1"},
                   {{0, -1}, Rat(-2), "B2"}});
  PotentialSpec spec;
  spec.polytope = box;
  spec.basepoint = {Rat(1, 2), Rat(1)};
  spec.variables = {"x", "y"};
  PotentialFunction pf = build_potential(spec);
  CriticalProblem prob{pf, {}};

  SolverOptions strict;
  strict.per_equation_rescale = false;
  CHECK(code_of([&] { prepare(prob, strict); }) == "inhomogeneous_valuations");

  SolverOptions opt;
  PreparedSystem prep = prepare(prob, opt);
  REQUIRE(prep.equations.size() == 2);
  CHECK(prep.equations[0].gamma == Rat(1, 2));
  CHECK(prep.equations[1].gamma == Rat(1));
  std::vector<LeadingSolution> leads = solve_leading(prep, opt);
  CHECK(leads.size() == 4);
  for (const LeadingSolution& s : leads) {
    CHECK((s.jacobian_det == 4 || s.jacobian_det == -4));
  }
}

TEST_CASE("a residue system without unit solutions reports failure") {
  // off the equal-distance locus the leading system degenerates to x^2 = 0,
  // which no unit satisfies
  Polytope square(2, {{{1, 0}, Rat(0), "A1"},
                      {{-1, 0}, Rat(-1), "A2"},
                      {{0, 1}, Rat(0), "B1"},
                      {{0, -1}, Rat(-1), "B2"}});
  PotentialSpec spec;
  spec.polytope = square;
  spec.basepoint = {Rat(1, 3), Rat(1, 3)};
  spec.variables = {"x", "y"};
  PotentialFunction pf = build_potential(spec);
  CriticalProblem prob{pf, {}};
  SolverOptions opt;
  PreparedSystem prep = prepare(prob, opt);
  CHECK(code_of([&] { solve_leading(prep, opt); }) == "no_solution_found");
}

TEST_CASE("two far terms lift in two strictly improving steps") {
  PotentialSpec spec;
  spec.polytope = cotangent_sphere();
  spec.basepoint = {Rat(1, 4), Rat(-1, 4), Rat(0)};
  spec.e5 = Rat(7, 8);
  spec.bulk = {{"K1", std::nullopt}};
  spec.outside_terms = {
      {{2, 1, 0}, Rat(7, 8), NovikovScalar::constant(Rat(1))},
      {{1, 1, 0}, Rat(15, 16), NovikovScalar::constant(Rat(1))}};
  PotentialFunction pf = apply_bulk(build_potential(spec), spec);
  CriticalProblem prob;
  prob.potential = pf;
  prob.fixed["x"] = one();
  SolverOptions opt;
  PreparedSystem prep = prepare(prob, opt);
  CHECK((prep.grid == std::vector<Rat>{Rat(5, 8), Rat(11, 16)}));
  std::vector<LeadingSolution> leads = solve_leading(prep, opt);
  REQUIRE(leads.size() == 1);
  LiftedPoint lp = newton_lift(prep, leads[0], opt);
  CHECK(lp.certified);
  CHECK(lp.iterations == 2);
  CHECK(lp.first_correction == Level(Rat(5, 8)));
  CHECK(lp.residual_valuation >= Level(Rat(5, 4)));

  // black-box monotonicity: truncating the lift at successive correction
  // orders yields strictly increasing criticality orders
  auto assemble = [&](const Level& cut) {
    std::vector<NovikovScalar> full{one()};
    for (const auto& [name, value] : lp.assignment) {
      (void)name;
      full.push_back(value.polynomial_part(cut));
    }
    return full;
  };
  Level o0 = classify_point(pf, assemble(Level(Rat(1, 16)))).criticality_order;
  Level o1 = classify_point(pf, assemble(Level(Rat(21, 32)))).criticality_order;
  Level o2 = classify_point(pf, assemble(Level(Rat(1)))).criticality_order;
  CHECK(o0 < o1);
  CHECK(o1 < o2);
  CHECK(o0 == Level(Rat(7, 8)));
  CHECK(o1 == Level(Rat(15, 16)));
  CHECK(o2 >= Level(Rat(5, 4)));
}
