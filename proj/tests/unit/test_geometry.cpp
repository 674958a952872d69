#include <algorithm>
#include <random>

#include "doctest.h"
#include "pidkit/errors.hpp"
#include "pidkit/geometry.hpp"
#include "support/random_models.hpp"

using namespace pidkit;

namespace {

HPolytope unit_square() {
  HPolytope poly(2);
  poly.add_bounds(0, 0, 1);
  poly.add_bounds(1, 0, 1);
  return poly;
}

HPolytope simplex3() {
  HPolytope poly(3);
  for (std::size_t i = 0; i < 3; ++i) poly.add_nonnegative(i);
  poly.add_equality({1, 1, 1}, 1);
  return poly;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational out = 0;
  for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
  return out;
}

}  // namespace

TEST_CASE("vertices of the unit square") {
  const auto v = enumerate_vertices(unit_square());
  REQUIRE(v.size() == 4);
  CHECK(v.points[0] == RationalVector{0, 0});
  CHECK(v.points[1] == RationalVector{0, 1});
  CHECK(v.points[2] == RationalVector{1, 0});
  CHECK(v.points[3] == RationalVector{1, 1});
}

TEST_CASE("vertices of the probability simplex") {
  const auto v = enumerate_vertices(simplex3());
  REQUIRE(v.size() == 3);
  CHECK(v.points[0] == RationalVector{0, 0, 1});
  CHECK(v.points[1] == RationalVector{0, 1, 0});
  CHECK(v.points[2] == RationalVector{1, 0, 0});
}

TEST_CASE("infeasible systems have no vertices") {
  HPolytope poly(1);
  poly.add_inequality({-1}, -1);  // x >= 1
  poly.add_inequality({1}, 0);    // x <= 0
  CHECK(enumerate_vertices(poly).empty());

  HPolytope inconsistent(2);
  inconsistent.add_bounds(0, 0, 1);
  inconsistent.add_bounds(1, 0, 1);
  inconsistent.add_equality({1, 1}, 3);
  CHECK(enumerate_vertices(inconsistent).empty());
}

TEST_CASE("unbounded systems are rejected") {
  HPolytope half_line(1);
  half_line.add_nonnegative(0);
  CHECK_THROWS_AS(enumerate_vertices(half_line), InputError);

  HPolytope strip(2);
  strip.add_bounds(0, 0, 1);
  CHECK_THROWS_AS(enumerate_vertices(strip), InputError);
}

TEST_CASE("vertex cap is enforced") {
  HPolytope cube(6);
  for (std::size_t i = 0; i < 6; ++i) cube.add_bounds(i, 0, 1);
  CHECK(enumerate_vertices(cube).size() == 64);
  try {
    enumerate_vertices(cube, EnumerationOptions{10});
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(e.cap() == 10);
    CHECK(std::string(e.what()).find("10") != std::string::npos);
  }
}

TEST_CASE("single point from equalities") {
  HPolytope poly(2);
  poly.add_equality({1, 0}, Rational(1, 3));
  poly.add_equality({0, 1}, Rational(2, 3));
  poly.add_nonnegative(0);
  const auto v = enumerate_vertices(poly);
  REQUIRE(v.size() == 1);
  CHECK(v.points[0] == RationalVector{Rational(1, 3), Rational(2, 3)});
}

TEST_CASE("lp examples") {
  const auto sq = lp_solve({unit_square(), {1, 0}, Sense::maximize});
  REQUIRE(sq.feasible());
  CHECK(sq.value == 1);
  CHECK(sq.point[0] == 1);

  const auto s = lp_solve({simplex3(), {1, 1, 1}, Sense::minimize});
  REQUIRE(s.feasible());
  CHECK(s.value == 1);

  HPolytope empty(1);
  empty.add_inequality({-1}, -1);
  empty.add_inequality({1}, 0);
  CHECK_FALSE(lp_solve({empty, {1}, Sense::minimize}).feasible());

  HPolytope ray(1);
  ray.add_nonnegative(0);
  CHECK_THROWS_AS(lp_solve({ray, {1}, Sense::maximize}), InputError);
}

TEST_CASE("lp handles free variables and redundant equalities") {
  HPolytope poly(3);
  poly.add_equality({1, 1, 0}, 1);
  poly.add_equality({2, 2, 0}, 2);
  poly.add_bounds(0, -2, 2);
  poly.add_bounds(2, -1, 1);
  poly.add_inequality({0, 1, 0}, 4);
  poly.add_inequality({0, -1, 0}, 4);
  const auto sol = lp_solve({poly, {1, 0, -1}, Sense::minimize});
  REQUIRE(sol.feasible());
  CHECK(sol.value == -3);
  CHECK(poly.contains(sol.point));
}

TEST_CASE("enumeration agrees with the simplex on random systems") {
  pidkit::testing::Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = 1 + trial % 4;
    const auto poly = pidkit::testing::random_hsystem(rng, dim, trial % 7);
    const auto vertices = enumerate_vertices(poly);
    for (const auto& v : vertices.points) {
      CHECK(poly.contains(v));
      CHECK(tight_constraint_rank(poly, v) == dim);
    }
    CHECK(std::is_sorted(vertices.points.begin(), vertices.points.end()));
    for (int k = 0; k < 10; ++k) {
      const auto c = pidkit::testing::random_objective(rng, dim);
      const auto lo = lp_solve({poly, c, Sense::minimize});
      const auto hi = lp_solve({poly, c, Sense::maximize});
      REQUIRE(lo.feasible() == !vertices.empty());
      if (vertices.empty()) continue;
      Rational vmin = dot(c, vertices.points[0]), vmax = vmin;
      for (const auto& v : vertices.points) {
        vmin = std::min(vmin, dot(c, v));
        vmax = std::max(vmax, dot(c, v));
      }
      CHECK(lo.value == vmin);
      CHECK(hi.value == vmax);
      CHECK(poly.contains(lo.point));
    }
  }
}

TEST_CASE("enumeration is independent of constraint order") {
  pidkit::testing::Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto poly = pidkit::testing::random_hsystem(rng, 3, 5);
    auto rows = poly.inequalities();
    std::shuffle(rows.begin(), rows.end(), rng);
    HPolytope shuffled(3);
    for (const auto& r : rows) shuffled.add_inequality(r.normal, r.bound);
    for (const auto& e : poly.equalities()) shuffled.add_equality(e.normal, e.value);
    CHECK(enumerate_vertices(poly).points == enumerate_vertices(shuffled).points);
  }
}
