#include <algorithm>

#include "pidkit/errors.hpp"
#include "pidkit/geometry.hpp"

namespace pidkit {
namespace {

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational out = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0) out += a[i] * b[i];
  }
  return out;
}

}  // namespace

void HPolytope::add_inequality(RationalVector normal, Rational bound) {
  if (normal.size() != dimension_) throw InputError("inequality row has wrong length");
  inequalities_.push_back({std::move(normal), std::move(bound)});
}

void HPolytope::add_equality(RationalVector normal, Rational value) {
  if (normal.size() != dimension_) throw InputError("equality row has wrong length");
  equalities_.push_back({std::move(normal), std::move(value)});
}

void HPolytope::add_nonnegative(std::size_t i) {
  RationalVector row(dimension_, Rational(0));
  row.at(i) = -1;
  add_inequality(std::move(row), Rational(0));
}

void HPolytope::add_bounds(std::size_t i, const Rational& lo, const Rational& hi) {
  RationalVector row(dimension_, Rational(0));
  row.at(i) = -1;
  add_inequality(row, Rational(-lo));
  row[i] = 1;
  add_inequality(std::move(row), hi);
}

bool HPolytope::contains(std::span<const Rational> point) const {
  if (point.size() != dimension_) return false;
  for (const auto& h : inequalities_) {
    if (dot(h.normal, point) > h.bound) return false;
  }
  for (const auto& e : equalities_) {
    if (dot(e.normal, point) != e.value) return false;
  }
  return true;
}

std::size_t matrix_rank(std::vector<RationalVector> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && sgn(rows[pivot][c]) == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (sgn(rows[r][c]) == 0) continue;
      const Rational factor = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= factor * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::size_t tight_constraint_rank(const HPolytope& poly, std::span<const Rational> point) {
  std::vector<RationalVector> rows;
  for (const auto& e : poly.equalities()) rows.push_back(e.normal);
  for (const auto& h : poly.inequalities()) {
    if (dot(h.normal, point) == h.bound) rows.push_back(h.normal);
  }
  return matrix_rank(std::move(rows));
}

}  // namespace pidkit
