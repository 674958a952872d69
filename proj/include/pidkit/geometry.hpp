#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pidkit/rational.hpp"

namespace pidkit {

/// Inequality row a.x <= b.
struct HalfSpace {
  RationalVector normal;
  Rational bound;
};

/// Equality row c.x = e.
struct Hyperplane {
  RationalVector normal;
  Rational value;
};

/// Polyhedron in half-space form. Every system built in this library is
/// bounded, but the type itself does not enforce it.
class HPolytope {
 public:
  explicit HPolytope(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<HalfSpace>& inequalities() const noexcept { return inequalities_; }
  const std::vector<Hyperplane>& equalities() const noexcept { return equalities_; }

  void add_inequality(RationalVector normal, Rational bound);
  void add_equality(RationalVector normal, Rational value);
  /// x_i >= 0
  void add_nonnegative(std::size_t i);
  /// lo <= x_i <= hi
  void add_bounds(std::size_t i, const Rational& lo, const Rational& hi);

  /// Exact membership test.
  bool contains(std::span<const Rational> point) const;

 private:
  std::size_t dimension_;
  std::vector<HalfSpace> inequalities_;
  std::vector<Hyperplane> equalities_;
};

/// Extreme points, lexicographically sorted and pairwise distinct.
struct VertexSet {
  std::size_t dimension = 0;
  std::vector<RationalVector> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

struct EnumerationOptions {
  std::size_t vertex_cap = 5'000'000;
};

/// Double description vertex enumeration. Equalities are eliminated first
/// by exact row reduction; inequalities are then inserted in canonical
/// (sorted) order with an exact algebraic adjacency test.
///
/// Returns an empty set for an infeasible system. Throws ResourceError if
/// the intermediate ray count exceeds the cap and InputError if the system
/// is unbounded.
VertexSet enumerate_vertices(const HPolytope& poly, const EnumerationOptions& options = {});

/// Rank of the constraints (equalities plus inequalities tight at `point`).
std::size_t tight_constraint_rank(const HPolytope& poly, std::span<const Rational> point);

/// Rank of a dense rational matrix given as rows.
std::size_t matrix_rank(std::vector<RationalVector> rows);

enum class Sense { minimize, maximize };

struct LinearProgram {
  HPolytope polytope;
  RationalVector objective;
  Sense sense = Sense::minimize;
};

enum class LpStatus { optimal, infeasible };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  RationalVector point;
  Rational value;

  bool feasible() const noexcept { return status == LpStatus::optimal; }
};

/// Exact two-phase primal simplex with Bland's rule. Variables that carry
/// an explicit x_i >= 0 row are kept as-is; all others are split into
/// positive and negative parts. Throws InputError on an unbounded program.
LpSolution lp_solve(const LinearProgram& lp);

}  // namespace pidkit
