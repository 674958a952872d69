#include <algorithm>
#include <limits>

#include "pidkit/errors.hpp"
#include "pidkit/geometry.hpp"

namespace pidkit {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Dense tableau for min c.x, A x = b, x >= 0, b >= 0.
class Tableau {
 public:
  Tableau(std::vector<RationalVector> rows, RationalVector rhs, std::size_t num_columns)
      : rows_(std::move(rows)), rhs_(std::move(rhs)), num_columns_(num_columns),
        basis_(rows_.size(), kNone), blocked_(num_columns, false) {}

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_columns() const { return num_columns_; }
  std::vector<std::size_t>& basis() { return basis_; }
  const RationalVector& rhs() const { return rhs_; }
  const Rational& entry(std::size_t r, std::size_t c) const { return rows_[r][c]; }
  void block(std::size_t column) { blocked_[column] = true; }

  void pivot(std::size_t row, std::size_t col) {
    const Rational inv = 1 / rows_[row][col];
    auto& pr = rows_[row];
    for (auto& v : pr) {
      if (sgn(v) != 0) v *= inv;
    }
    rhs_[row] *= inv;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (r == row || sgn(rows_[r][col]) == 0) continue;
      eliminate(rows_[r], rhs_[r], row, col);
    }
    if (sgn(cost_[col]) != 0) eliminate(cost_, cost_rhs_, row, col);
    basis_[row] = col;
  }

  void remove_row(std::size_t row) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(row));
    rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(row));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
  }

  /// Installs a cost vector and prices out the current basis.
  void set_costs(const RationalVector& costs) {
    cost_ = costs;
    cost_rhs_ = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::size_t b = basis_[r];
      if (sgn(cost_[b]) == 0) continue;
      eliminate(cost_, cost_rhs_, r, b);
    }
  }

  /// Runs Bland's rule to optimality. Returns false if unbounded.
  bool optimize() {
    while (true) {
      std::size_t enter = kNone;
      for (std::size_t c = 0; c < num_columns_; ++c) {
        if (!blocked_[c] && sgn(cost_[c]) < 0) {
          enter = c;
          break;
        }
      }
      if (enter == kNone) return true;
      std::size_t leave = kNone;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (sgn(rows_[r][enter]) <= 0) continue;
        Rational ratio = rhs_[r] / rows_[r][enter];
        if (leave == kNone || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == kNone) return false;
      pivot(leave, enter);
    }
  }

  /// Current objective value of min c.x.
  Rational objective() const { return -cost_rhs_; }

 private:
  void eliminate(RationalVector& target, Rational& target_rhs, std::size_t row, std::size_t col) {
    const Rational factor = target[col];
    const auto& pr = rows_[row];
    for (std::size_t c = 0; c < num_columns_; ++c) {
      if (sgn(pr[c]) != 0) target[c] -= factor * pr[c];
    }
    target_rhs -= factor * rhs_[row];
  }

  std::vector<RationalVector> rows_;
  RationalVector rhs_;
  std::size_t num_columns_;
  std::vector<std::size_t> basis_;
  std::vector<bool> blocked_;
  RationalVector cost_;
  Rational cost_rhs_;
};

bool is_nonnegativity_row(const HalfSpace& h, std::size_t& var) {
  if (sgn(h.bound) != 0) return false;
  std::size_t found = kNone;
  for (std::size_t i = 0; i < h.normal.size(); ++i) {
    if (sgn(h.normal[i]) == 0) continue;
    if (found != kNone || sgn(h.normal[i]) > 0) return false;
    found = i;
  }
  if (found == kNone) return false;
  var = found;
  return true;
}

}  // namespace

LpSolution lp_solve(const LinearProgram& lp) {
  const HPolytope& poly = lp.polytope;
  const std::size_t d = poly.dimension();
  if (lp.objective.size() != d) throw InputError("objective length does not match dimension");

  // Column layout: one column per nonnegative variable, two per free one.
  std::vector<bool> nonnegative(d, false);
  std::vector<bool> skip_row(poly.inequalities().size(), false);
  for (std::size_t k = 0; k < poly.inequalities().size(); ++k) {
    std::size_t var;
    if (is_nonnegativity_row(poly.inequalities()[k], var)) {
      nonnegative[var] = true;
      skip_row[k] = true;
    }
  }
  std::vector<std::size_t> pos_col(d), neg_col(d, kNone);
  std::size_t ncols = 0;
  for (std::size_t j = 0; j < d; ++j) {
    pos_col[j] = ncols++;
    if (!nonnegative[j]) neg_col[j] = ncols++;
  }
  const std::size_t num_structural = ncols;

  std::vector<RationalVector> rows;
  RationalVector rhs;
  std::vector<std::size_t> slack_of_row;
  auto expand = [&](const RationalVector& normal, std::size_t width) {
    RationalVector row(width, Rational(0));
    for (std::size_t j = 0; j < d; ++j) {
      if (sgn(normal[j]) == 0) continue;
      row[pos_col[j]] = normal[j];
      if (neg_col[j] != kNone) row[neg_col[j]] = -normal[j];
    }
    return row;
  };

  std::size_t num_slacks = 0;
  for (std::size_t k = 0; k < poly.inequalities().size(); ++k) {
    if (!skip_row[k]) ++num_slacks;
  }
  const std::size_t num_rows = num_slacks + poly.equalities().size();
  // Slack and artificial columns follow the structural ones.
  const std::size_t total_cols = num_structural + num_slacks + num_rows;
  std::size_t slack = num_structural;
  for (std::size_t k = 0; k < poly.inequalities().size(); ++k) {
    if (skip_row[k]) continue;
    RationalVector row = expand(poly.inequalities()[k].normal, total_cols);
    row[slack] = 1;
    slack_of_row.push_back(slack++);
    rows.push_back(std::move(row));
    rhs.push_back(poly.inequalities()[k].bound);
  }
  for (const auto& e : poly.equalities()) {
    rows.push_back(expand(e.normal, total_cols));
    rhs.push_back(e.value);
    slack_of_row.push_back(kNone);
  }

  const std::size_t first_artificial = num_structural + num_slacks;
  std::vector<bool> needs_artificial(rows.size(), false);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (sgn(rhs[r]) < 0) {
      for (auto& v : rows[r]) v = -v;
      rhs[r] = -rhs[r];
    }
    // A slack with coefficient +1 can start in the basis.
    needs_artificial[r] = slack_of_row[r] == kNone || sgn(rows[r][slack_of_row[r]]) < 0;
    if (needs_artificial[r]) rows[r][first_artificial + r] = 1;
  }

  Tableau tab(std::move(rows), std::move(rhs), total_cols);
  for (std::size_t r = 0; r < tab.num_rows(); ++r) {
    tab.basis()[r] = needs_artificial[r] ? first_artificial + r : slack_of_row[r];
  }
  for (std::size_t r = 0; r < tab.num_rows(); ++r) {
    if (!needs_artificial[r]) tab.block(first_artificial + r);
  }

  // Phase 1: minimise the sum of artificials.
  RationalVector phase1(total_cols, Rational(0));
  for (std::size_t r = 0; r < tab.num_rows(); ++r) {
    if (needs_artificial[r]) phase1[first_artificial + r] = 1;
  }
  tab.set_costs(phase1);
  tab.optimize();
  if (sgn(tab.objective()) > 0) return {LpStatus::infeasible, {}, Rational(0)};

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (std::size_t r = 0; r < tab.num_rows();) {
    if (tab.basis()[r] < first_artificial) {
      ++r;
      continue;
    }
    std::size_t col = kNone;
    for (std::size_t c = 0; c < first_artificial; ++c) {
      if (sgn(tab.entry(r, c)) != 0) {
        col = c;
        break;
      }
    }
    if (col == kNone) {
      tab.remove_row(r);
    } else {
      tab.pivot(r, col);
      ++r;
    }
  }
  for (std::size_t c = first_artificial; c < total_cols; ++c) tab.block(c);

  // Phase 2.
  RationalVector costs(total_cols, Rational(0));
  const bool maximize = lp.sense == Sense::maximize;
  for (std::size_t j = 0; j < d; ++j) {
    const Rational c = maximize ? Rational(-lp.objective[j]) : lp.objective[j];
    costs[pos_col[j]] = c;
    if (neg_col[j] != kNone) costs[neg_col[j]] = -c;
  }
  tab.set_costs(costs);
  if (!tab.optimize()) throw InputError("linear program is unbounded");

  RationalVector columns(total_cols, Rational(0));
  for (std::size_t r = 0; r < tab.num_rows(); ++r) columns[tab.basis()[r]] = tab.rhs()[r];
  LpSolution out;
  out.status = LpStatus::optimal;
  out.point.resize(d);
  out.value = 0;
  for (std::size_t j = 0; j < d; ++j) {
    out.point[j] = columns[pos_col[j]];
    if (neg_col[j] != kNone) out.point[j] -= columns[neg_col[j]];
    out.value += lp.objective[j] * out.point[j];
  }
  return out;
}

}  // namespace pidkit
