#include <doctest.h>

#include <algorithm>
#include <optional>
#include <vector>

#include "diskpot/errors.hpp"
#include "diskpot/polytope.hpp"

using namespace diskpot;

namespace {

Polytope unit_cube() {
  return Polytope(3, {{{1, 0, 0}, Rat(0), "F1"},
                      {{-1, 0, 0}, Rat(-1), "F2"},
                      {{0, 1, 0}, Rat(0), "F3"},
                      {{0, -1, 0}, Rat(-1), "F4"},
                      {{0, 0, 1}, Rat(0), "F5"},
                      {{0, 0, -1}, Rat(-1), "F6"}});
}

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

}  // namespace

TEST_CASE("membership and facet distances") {
  Polytope cube = unit_cube();
  CHECK(cube.contains({Rat(1, 2), Rat(1, 2), Rat(1, 2)}));
  CHECK(cube.contains({Rat(0), Rat(0), Rat(0)}));  // boundary is inside
  CHECK(!cube.contains({Rat(2), Rat(0), Rat(0)}));
  auto d = cube.facet_distances({Rat(1, 4), Rat(1, 2), Rat(1)});
  REQUIRE(d.size() == 6);
  CHECK(d[0] == Rat(1, 4));
  CHECK(d[1] == Rat(3, 4));
  CHECK(d[4] == Rat(1));
  CHECK(d[5] == Rat(0));
  CHECK(cube.facet_index("F4") == 3);
  CHECK(cube.facet_index("nope") == -1);
}

TEST_CASE("vertex enumeration on the cube") {
  auto vs = vertices(unit_cube());
  REQUIRE(vs.size() == 8);
  // sorted and deduplicated; extremes first and last
  CHECK((vs.front() == std::vector<Rat>{Rat(0), Rat(0), Rat(0)}));
  CHECK((vs.back() == std::vector<Rat>{Rat(1), Rat(1), Rat(1)}));
}

TEST_CASE("unbounded polytopes are refused by vertex enumeration") {
  Polytope quadrant(2, {{{1, 0}, Rat(0), "A"}, {{0, 1}, Rat(0), "B"}});
  CHECK_THROWS_AS(vertices(quadrant), DomainError);
  try {
    vertices(quadrant);
  } catch (const DomainError& e) {
    CHECK(e.code() == "unbounded_polytope");
  }
  // the cotangent-sphere polytope is likewise unbounded
  CHECK_THROWS_AS(vertices(cotangent_sphere()), DomainError);
}

TEST_CASE("equal-distance locus: a line for the cotangent sphere") {
  FiberLocus locus =
      monotone_fiber_locus(cotangent_sphere(), {"K1", "K2", "K3", "K4"});
  CHECK(!locus.is_point);
  // every point of the locus keeps all four distances equal
  for (int s = 1; s <= 3; ++s) {
    auto pt = locus.at(Rat(s, 8));
    auto d = cotangent_sphere().facet_distances(pt);
    CHECK(d[0] == d[1]);
    CHECK(d[1] == d[2]);
    CHECK(d[2] == d[3]);
    CHECK(d[0] == locus.distance_at(Rat(s, 8)));
  }
  // the distance-1/4 locus point is the standard basepoint
  REQUIRE(locus.t_direction != 0);
  Rat s = (Rat(1, 4) - locus.t_base) / locus.t_direction;
  CHECK((locus.at(s) == std::vector<Rat>{Rat(1, 4), Rat(-1, 4), Rat(0)}));
}

TEST_CASE("equal-distance locus: compactifying pins a point") {
  FiberLocus locus = monotone_fiber_locus(quadric_threefold(),
                                          {"K1", "K2", "K3", "K4", "K5"});
  CHECK(locus.is_point);
  CHECK((locus.base == std::vector<Rat>{Rat(1, 3), Rat(-1, 3), Rat(0)}));
  CHECK(locus.t_base == Rat(1, 3));
}

TEST_CASE("equal-distance locus error modes") {
  CHECK_THROWS_AS(monotone_fiber_locus(unit_cube(), {"F1"}), DomainError);
  CHECK_THROWS_AS(monotone_fiber_locus(unit_cube(), {"F1", "zzz"}),
                  DomainError);
  // two parallel facet pairs over-determine nothing but under-determine t:
  // F1/F3/F5 leave a full diagonal line, still fine
  FiberLocus diag = monotone_fiber_locus(unit_cube(), {"F1", "F3", "F5"});
  CHECK(!diag.is_point);
}

TEST_CASE("pi values print symbolically") {
  CHECK(PiValue{Rat(0)}.str() == "0");
  CHECK(PiValue{Rat(1)}.str() == "π");
  CHECK(PiValue{Rat(-1)}.str() == "-π");
  CHECK(PiValue{Rat(10)}.str() == "10π");
  CHECK(PiValue{Rat(1, 2)}.str() == "1/2π");
}

TEST_CASE("hofer norms of a linear hamiltonian") {
  Polytope cube = unit_cube();
  LinearHamiltonian h{{Rat(2), Rat(2), Rat(-1)}, Rat(1)};
  HoferReport rep =
      hofer_norms(cube, h, std::vector<Rat>{Rat(1, 2), Rat(1, 2), Rat(1, 2)});
  // max over vertices: (1,1,0) -> 4; min: (0,0,1) -> -1; spread 5
  CHECK(rep.norm_ambient == PiValue{Rat(5)});
  REQUIRE(rep.norm_fiber.has_value());
  CHECK(*rep.norm_fiber == PiValue{Rat(0)});
  // without a fiber, only the ambient norm is reported
  HoferReport plain = hofer_norms(cube, h, std::nullopt);
  CHECK(plain.norm_ambient == PiValue{Rat(5)});
  CHECK(!plain.norm_fiber.has_value());
  // a fiber outside the polytope is rejected
  CHECK_THROWS_AS(
      hofer_norms(cube, h, std::vector<Rat>{Rat(2), Rat(0), Rat(0)}),
      DomainError);
}

TEST_CASE("hofer norms on the flag manifold polytope") {
  Polytope gt(3, {{{1, 0, 0}, Rat(1), "x_lower"},
                  {{-1, 0, 0}, Rat(-2), "x_upper"},
                  {{0, -1, 0}, Rat(-1), "y_upper"},
                  {{0, 1, 0}, Rat(-3), "y_lower"},
                  {{1, 0, -1}, Rat(0), "xz"},
                  {{0, -1, 1}, Rat(0), "zy"}});
  LinearHamiltonian h{{Rat(2), Rat(2), Rat(-1)}, Rat(1)};
  HoferReport rep =
      hofer_norms(gt, h, std::vector<Rat>{Rat(1), Rat(1), Rat(1)});
  CHECK(rep.norm_ambient == PiValue{Rat(10)});
  CHECK(rep.norm_ambient.str() == "10π");
  REQUIRE(rep.norm_fiber.has_value());
  CHECK(*rep.norm_fiber == PiValue{Rat(0)});
  CHECK(rep.norm_fiber->str() == "0");
}
