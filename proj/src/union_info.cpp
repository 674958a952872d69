#include "pidkit/union_info.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pidkit/errors.hpp"
#include "pidkit/geometry.hpp"
#include "pidkit/info.hpp"

namespace pidkit {
namespace {

constexpr double kZeroGradient = -60.0;
constexpr int kLineSearchSteps = 60;
/// Slices x with s(x) below this are treated as empty.
constexpr double kTinySlice = 1e-11;
/// Atoms whose weight falls below this are removed.
constexpr double kTinyWeight = 1e-15;
/// Frank-Wolfe iterations before switching to the barrier method.
constexpr std::size_t kFrankWolfeBudget = 50;
constexpr double kWarmMix = 1e-3;
constexpr double kNewtonTolerance = 1e-14;
constexpr double kSmallestBarrier = 1e-20;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Linear pieces used by one iteration. `certificate` lies slice by slice
/// in the subdifferential of the objective; `direction` agrees with it
/// except at zero entries of occupied slices, where it is the clamped
/// gradient.
struct Linearization {
  std::vector<double> direction;
  std::vector<double> certificate;
  bool differ = false;
};

struct NewtonStep {
  std::vector<double> delta;
  Eigen::VectorXd dual;
  /// Squared Newton decrement.
  double decrement = 0.0;
};

/// Couplings s(y, x_1..x_n) restricted to the entries where every pairwise
/// marginal p(y, x_i) is positive; other entries are forced to zero.
///
/// The objective splits over source tuples x as sum_x h_x(s(., x)) with
/// h_x(a) = sum_y a_y log2(a_y / (p(y) sum a)), convex and positively
/// homogeneous. Any g with sum_y p(y) 2^g_y <= 1 on a slice satisfies
/// h_x(a) >= <g, a>, so the minimum of <g, v> over the polytope bounds the
/// optimum from below whenever every slice of g has that property.
class CouplingProblem {
 public:
  explicit CouplingProblem(const JointDistribution& joint) : joint_(joint) {
    const std::size_t n = joint.num_sources(), ny = joint.target().size();
    std::vector<RationalVector> pair(n);
    pair_column_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pair[i].assign(ny * joint.source(i).size(), Rational(0));
      pair_column_[i].assign(pair[i].size(), kNone);
    }
    for (std::size_t flat = 0; flat < joint.size(); ++flat) {
      const auto o = joint.outcome(flat);
      for (std::size_t i = 0; i < n; ++i) pair[i][o[0] * joint.source(i).size() + o[i + 1]] += joint.pmf()[flat];
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < pair[i].size(); ++k) {
        if (sgn(pair[i][k]) <= 0) continue;
        pair_column_[i][k] = num_columns_++;
        column_mass_.push_back(pair[i][k]);
        column_y_.push_back(k / joint.source(i).size());
        column_source_.push_back(i);
      }
    }
    // Per target outcome, the margins of all sources share one total, so one
    // column of every source after the first is implied by the others.
    row_of_column_.assign(num_columns_, kNone);
    std::vector<std::vector<bool>> seen(ny, std::vector<bool>(n, false));
    for (std::size_t c = 0; c < num_columns_; ++c) {
      const std::size_t y = column_y_[c], i = column_source_[c];
      if (i > 0 && !seen[y][i]) {
        seen[y][i] = true;
        continue;
      }
      row_of_column_[c] = rows_mass_.size();
      rows_mass_.push_back(to_double(column_mass_[c]));
    }
    num_x_ = joint.size() / ny;
    py_ = marginal_pmf(joint, 0);
    py_double_ = to_doubles(py_);
    by_y_.resize(ny);
    by_x_.resize(num_x_);
    for (std::size_t flat = 0; flat < joint.size(); ++flat) {
      const auto o = joint.outcome(flat);
      Entry e{o[0], flat % num_x_, flat, {}, {}};
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = pair_column_[i][o[0] * joint.source(i).size() + o[i + 1]];
        if (c == kNone) break;
        e.columns.push_back(c);
      }
      if (e.columns.size() != n) continue;
      for (std::size_t c : e.columns) {
        if (row_of_column_[c] != kNone) e.rows.push_back(row_of_column_[c]);
      }
      by_y_[e.y].push_back(entries_.size());
      by_x_[e.x].push_back(entries_.size());
      entries_.push_back(std::move(e));
    }
    // One transportation polytope per target outcome.
    for (std::size_t y = 0; y < ny; ++y) {
      const auto& local = by_y_[y];
      HPolytope poly(local.size());
      for (std::size_t k = 0; k < local.size(); ++k) poly.add_nonnegative(k);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t nx = joint.source(i).size();
        for (std::size_t x = 0; x < nx; ++x) {
          const std::size_t c = pair_column_[i][y * nx + x];
          if (c == kNone) continue;
          RationalVector row(local.size(), Rational(0));
          for (std::size_t k = 0; k < local.size(); ++k) {
            if (entries_[local[k]].columns[i] == c) row[k] = 1;
          }
          poly.add_equality(std::move(row), pair[i][y * nx + x]);
        }
      }
      blocks_.push_back(std::move(poly));
    }
  }

  /// p(y) prod_i p(x_i | y), positive on every admissible entry.
  RationalVector independent_coupling() const {
    std::vector<Channel> channels;
    for (std::size_t i = 0; i < joint_.num_sources(); ++i) channels.push_back(source_channel(joint_, i));
    RationalVector s(entries_.size());
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      const auto o = joint_.outcome(entries_[k].flat);
      Rational v = py_[o[0]];
      for (std::size_t i = 0; i < channels.size(); ++i) v *= channels[i](o[i + 1], o[0]);
      s[k] = v;
    }
    return s;
  }

  /// The input joint itself, always feasible.
  RationalVector input_coupling() const {
    RationalVector s(entries_.size());
    for (std::size_t k = 0; k < entries_.size(); ++k) s[k] = joint_.pmf()[entries_[k].flat];
    return s;
  }

  double value(const std::vector<double>& s) const {
    const auto sx = slice_mass(s);
    double v = 0.0;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (s[k] > 0) v += s[k] * std::log2(s[k] / (py_double_[entries_[k].y] * sx[entries_[k].x]));
    }
    return std::max(v, 0.0);
  }

  /// Exact gradient; -inf at zero entries.
  std::vector<double> gradient(const std::vector<double>& s) const {
    const auto sx = slice_mass(s);
    std::vector<double> g(entries_.size());
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      g[k] = s[k] > 0 ? std::log2(s[k] / (py_double_[entries_[k].y] * sx[entries_[k].x])) : -kInf;
    }
    return g;
  }

  Linearization linearize(const std::vector<double>& s) const {
    const auto sx = slice_mass(s);
    const auto g = gradient(s);
    enum class Slice { regular, partial, tiny };
    std::vector<Slice> kind(num_x_, Slice::regular);
    bool irregular = false;
    for (std::size_t x = 0; x < num_x_; ++x) {
      if (by_x_[x].empty()) continue;
      if (sx[x] < kTinySlice) {
        kind[x] = Slice::tiny;
      } else {
        for (std::size_t k : by_x_[x]) {
          if (s[k] <= 0) kind[x] = Slice::partial;
        }
      }
      irregular = irregular || kind[x] != Slice::regular;
    }
    Linearization out{g, g, false};
    if (irregular) {
      // Fit g ~ sum_i lambda_i(y, x_i) on regular slices, then give every
      // other slice the normalised product form of the fitted multipliers.
      Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(num_columns_, num_columns_);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(num_columns_);
      for (std::size_t k = 0; k < entries_.size(); ++k) {
        const auto& e = entries_[k];
        if (kind[e.x] != Slice::regular) continue;
        for (std::size_t a : e.columns) {
          rhs[a] += sx[e.x] * g[k];
          for (std::size_t b : e.columns) normal(a, b) += sx[e.x];
        }
      }
      normal.diagonal().array() += 1e-12 * (1.0 + normal.trace());
      const Eigen::VectorXd lambda = normal.ldlt().solve(rhs);
      for (std::size_t x = 0; x < num_x_; ++x) {
        if (kind[x] == Slice::regular) continue;
        double total = 0.0;
        for (std::size_t k : by_x_[x]) {
          double a = 0.0;
          for (std::size_t c : entries_[k].columns) a += lambda[c];
          out.certificate[k] = a;
          total += py_double_[entries_[k].y] * std::exp2(a);
        }
        const double shift = std::log2(total);
        for (std::size_t k : by_x_[x]) {
          out.certificate[k] -= shift;
          if (kind[x] == Slice::tiny) out.direction[k] = out.certificate[k];
        }
        out.differ = out.differ || kind[x] == Slice::partial;
      }
    }
    for (auto& v : out.direction) v = std::max(v, kZeroGradient);
    return out;
  }

  /// Vertex minimising <g, v> and the minimum, solved exactly per target
  /// outcome.
  std::pair<RationalVector, double> linear_minimizer(const std::vector<double>& g) const {
    RationalVector v(entries_.size(), Rational(0));
    double value = 0.0;
    for (std::size_t y = 0; y < blocks_.size(); ++y) {
      const auto& local = by_y_[y];
      RationalVector objective(local.size());
      for (std::size_t k = 0; k < local.size(); ++k) objective[k] = rational_from_double(g[local[k]]);
      const auto sol = lp_solve({blocks_[y], std::move(objective), Sense::minimize});
      if (!sol.feasible()) throw InvariantViolation("coupling polytope is empty");
      for (std::size_t k = 0; k < local.size(); ++k) v[local[k]] = sol.point[k];
      value += to_double(sol.value);
    }
    return {std::move(v), value};
  }

  /// Objective in nats plus the log barrier -mu sum log s; +inf outside
  /// the open orthant.
  double barrier(const std::vector<double>& s, double mu) const {
    const auto sx = slice_mass(s);
    double v = 0.0;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (!(s[k] > 0)) return kInf;
      v += s[k] * std::log(s[k] / (py_double_[entries_[k].y] * sx[entries_[k].x])) - mu * std::log(s[k]);
    }
    return v;
  }

  /// Equality-constrained Newton step for the barrier objective. The
  /// Hessian is block diagonal over slices, each block a diagonal minus a
  /// rank-one term, so only the reduced system in the constraint rows is
  /// factorised.
  NewtonStep newton_step(const std::vector<double>& s, double mu) const {
    const std::size_t size = entries_.size(), rows = rows_mass_.size();
    const auto sx = slice_mass(s);
    std::vector<double> grad(size), dinv(size), den(num_x_, 0.0);
    for (std::size_t k = 0; k < size; ++k) {
      const auto& e = entries_[k];
      grad[k] = std::log(s[k] / (py_double_[e.y] * sx[e.x])) - mu / s[k];
      dinv[k] = s[k] * s[k] / (s[k] + mu);
      den[e.x] += s[k] * mu / (s[k] + mu);
    }
    auto apply_inverse = [&](const std::vector<double>& v) {
      std::vector<double> out(size), acc(num_x_, 0.0);
      for (std::size_t k = 0; k < size; ++k) {
        out[k] = dinv[k] * v[k];
        acc[entries_[k].x] += out[k];
      }
      for (std::size_t k = 0; k < size; ++k) out[k] += dinv[k] * acc[entries_[k].x] / den[entries_[k].x];
      return out;
    };

    Eigen::MatrixXd reduced = Eigen::MatrixXd::Zero(rows, rows);
    for (std::size_t k = 0; k < size; ++k) {
      for (std::size_t a : entries_[k].rows) {
        for (std::size_t b : entries_[k].rows) reduced(a, b) += dinv[k];
      }
    }
    for (std::size_t x = 0; x < num_x_; ++x) {
      if (by_x_[x].empty()) continue;
      Eigen::VectorXd w = Eigen::VectorXd::Zero(rows);
      for (std::size_t k : by_x_[x]) {
        for (std::size_t a : entries_[k].rows) w[a] += dinv[k];
      }
      reduced.selfadjointView<Eigen::Lower>().rankUpdate(w, 1.0 / den[x]);
    }
    reduced.triangularView<Eigen::StrictlyUpper>() = reduced.transpose();

    std::vector<double> minus_grad(size);
    for (std::size_t k = 0; k < size; ++k) minus_grad[k] = -grad[k];
    const auto u = apply_inverse(minus_grad);
    Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(rows_mass_.data(), rows);
    for (std::size_t k = 0; k < size; ++k) {
      for (std::size_t a : entries_[k].rows) rhs[a] += u[k] + s[k];
    }
    NewtonStep step;
    step.dual = reduced.ldlt().solve(rhs);
    std::vector<double> pushed(size, 0.0);
    for (std::size_t k = 0; k < size; ++k) {
      for (std::size_t a : entries_[k].rows) pushed[k] += step.dual[a];
    }
    const auto correction = apply_inverse(pushed);
    step.delta.resize(size);
    step.decrement = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
      step.delta[k] = u[k] - correction[k];
      step.decrement -= grad[k] * step.delta[k];
    }
    return step;
  }

  /// Linear functional in bits built from Newton multipliers and shifted
  /// slice by slice so that sum_y p(y) 2^g = 1.
  std::vector<double> dual_certificate(const Eigen::VectorXd& dual) const {
    std::vector<double> g(entries_.size(), 0.0);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      for (std::size_t a : entries_[k].rows) g[k] -= dual[a] / std::log(2.0);
    }
    for (std::size_t x = 0; x < num_x_; ++x) {
      double total = 0.0;
      for (std::size_t k : by_x_[x]) total += py_double_[entries_[k].y] * std::exp2(g[k]);
      const double shift = std::log2(total);
      for (std::size_t k : by_x_[x]) g[k] -= shift;
    }
    return g;
  }

  /// Exact coupling near s: rationalise, repair every pairwise margin by an
  /// additive correction spread uniformly over each target block, then mix
  /// in just enough of `interior` to restore nonnegativity.
  RationalVector round_exact(const std::vector<double>& s, const RationalVector& interior) const {
    const std::size_t n = joint_.num_sources();
    RationalVector out(entries_.size());
    for (std::size_t k = 0; k < entries_.size(); ++k) out[k] = rational_from_double(std::max(s[k], 0.0));
    RationalVector residual(column_mass_);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      for (std::size_t c : entries_[k].columns) residual[c] -= out[k];
    }
    for (std::size_t y = 0; y < by_y_.size(); ++y) {
      if (by_y_[y].empty()) continue;
      std::vector<std::size_t> support(n, 0);
      for (std::size_t c = 0; c < num_columns_; ++c) {
        if (column_y_[c] == y) ++support[column_source_[c]];
      }
      Rational block = py_[y];
      for (std::size_t k : by_y_[y]) block -= out[k];
      std::size_t product = 1;
      for (std::size_t m : support) product *= m;
      for (std::size_t k : by_y_[y]) {
        Rational c = -Rational(static_cast<long>(n - 1)) * block / static_cast<long>(product);
        for (std::size_t i = 0; i < n; ++i) {
          c += residual[entries_[k].columns[i]] * static_cast<long>(support[i]) / static_cast<long>(product);
        }
        out[k] += c;
      }
    }
    Rational theta = 0;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (sgn(out[k]) >= 0) continue;
      const Rational needed = -out[k] / (interior[k] - out[k]);
      if (needed > theta) theta = needed;
    }
    if (sgn(theta) > 0) {
      for (std::size_t k = 0; k < entries_.size(); ++k) out[k] = (1 - theta) * out[k] + theta * interior[k];
    }
    return out;
  }

  JointDistribution to_joint(const RationalVector& s) const {
    RationalVector pmf(joint_.size(), Rational(0));
    for (std::size_t k = 0; k < entries_.size(); ++k) pmf[entries_[k].flat] = s[k];
    return JointDistribution(joint_.variables(), std::move(pmf));
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Entry {
    std::size_t y;
    std::size_t x;  // flat index of the source tuple
    std::size_t flat;
    std::vector<std::size_t> columns;  // pairwise constraint per source
    std::vector<std::size_t> rows;     // independent constraints only
  };

  std::vector<double> slice_mass(const std::vector<double>& s) const {
    std::vector<double> sx(num_x_, 0.0);
    for (std::size_t k = 0; k < entries_.size(); ++k) sx[entries_[k].x] += s[k];
    return sx;
  }

  const JointDistribution& joint_;
  std::size_t num_x_ = 0;
  std::size_t num_columns_ = 0;
  std::vector<std::vector<std::size_t>> pair_column_;
  RationalVector column_mass_;
  std::vector<std::size_t> column_y_;
  std::vector<std::size_t> column_source_;
  std::vector<std::size_t> row_of_column_;
  std::vector<double> rows_mass_;
  RationalVector py_;
  std::vector<double> py_double_;
  std::vector<Entry> entries_;
  std::vector<std::vector<std::size_t>> by_y_;
  std::vector<std::vector<std::size_t>> by_x_;
  std::vector<HPolytope> blocks_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double v = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (b[k] != 0) v += a[k] * b[k];
  }
  return v;
}

/// Minimises the objective along s + t d, t in [0, t_max], by bisection on
/// the directional derivative.
double line_search(const CouplingProblem& problem, const std::vector<double>& s, const std::vector<double>& d,
                   double t_max) {
  std::vector<double> point(s.size());
  auto slope = [&](double t) {
    for (std::size_t k = 0; k < s.size(); ++k) point[k] = std::max(s[k] + t * d[k], 0.0);
    return dot(problem.gradient(point), d);
  };
  if (!(slope(t_max) > 0)) return t_max;
  double lo = 0.0, hi = t_max;
  for (int step = 0; step < kLineSearchSteps; ++step) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0 ? hi : lo) = mid;
  }
  return lo;
}

/// Exact vertices with floating-point weights. Pairwise steps move weight
/// from the worst active vertex to the new one.
struct ActiveSet {
  std::vector<RationalVector> atoms;
  std::vector<std::vector<double>> atoms_double;
  std::vector<double> weights;

  std::size_t insert(RationalVector atom) {
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (atoms[a] == atom) return a;
    }
    atoms_double.push_back(to_doubles(atom));
    atoms.push_back(std::move(atom));
    weights.push_back(0.0);
    return atoms.size() - 1;
  }

  /// Removes negligible atoms and renormalises the rest.
  void prune() {
    double total = 0.0;
    for (std::size_t a = atoms.size(); a-- > 0;) {
      if (weights[a] > kTinyWeight) {
        total += weights[a];
        continue;
      }
      atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(a));
      atoms_double.erase(atoms_double.begin() + static_cast<std::ptrdiff_t>(a));
      weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(a));
    }
    for (auto& w : weights) w /= total;
  }

  /// Sum of nonnegative terms, so entries outside every active support stay
  /// exactly zero.
  std::vector<double> point() const {
    std::vector<double> s(atoms_double.front().size(), 0.0);
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      for (std::size_t k = 0; k < s.size(); ++k) s[k] += weights[a] * atoms_double[a][k];
    }
    return s;
  }

  /// Exact convex combination with the weights rounded to rationals.
  RationalVector combine() const {
    RationalVector w(weights.size());
    Rational total = 0;
    for (std::size_t a = 0; a < weights.size(); ++a) {
      w[a] = rational_from_double(weights[a]);
      total += w[a];
    }
    RationalVector s(atoms.front().size(), Rational(0));
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const Rational scale = w[a] / total;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (sgn(atoms[a][k]) != 0) s[k] += scale * atoms[a][k];
      }
    }
    return s;
  }
};

/// Result for an exact coupling certified by `lower`, replaced by the input
/// joint when that is no worse.
UnionResult finish(const CouplingProblem& problem, RationalVector exact, double lower, std::size_t iter) {
  double value = problem.value(to_doubles(exact));
  auto input = problem.input_coupling();
  const double input_value = problem.value(to_doubles(input));
  if (input_value <= value) {
    exact = std::move(input);
    value = input_value;
  }
  return {value, problem.to_joint(exact), std::max(value - lower, 0.0), iter};
}

[[noreturn]] void fail(double value, double gap, std::size_t iter) {
  throw NonConvergenceError("union information did not converge within " + std::to_string(iter) +
                                " iterations (gap " + std::to_string(gap) + " bits)",
                            value, gap);
}

/// Follows the barrier central path from a Frank-Wolfe iterate until the
/// dual certificate closes the gap.
UnionResult barrier_polish(const CouplingProblem& problem, const RationalVector& start, std::vector<double> s,
                           double gap, std::size_t iter, const UnionOptions& options) {
  const auto interior = to_doubles(start);
  const double size = static_cast<double>(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = (1 - kWarmMix) * s[k] + kWarmMix * interior[k];
  double mu = std::max(gap, options.tol) / size;
  std::vector<double> trial(s.size());
  while (true) {
    Eigen::VectorXd dual;
    while (true) {
      if (iter == options.max_iter) fail(problem.value(s), gap, iter);
      ++iter;
      const auto step = problem.newton_step(s, mu);
      dual = step.dual;
      if (step.decrement <= kNewtonTolerance) break;
      double t = 1.0;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (step.delta[k] < 0) t = std::min(t, 0.99 * s[k] / -step.delta[k]);
      }
      const double current = problem.barrier(s, mu);
      bool moved = false;
      for (int halving = 0; halving < kLineSearchSteps && !moved; ++halving, t *= 0.5) {
        for (std::size_t k = 0; k < s.size(); ++k) trial[k] = s[k] + t * step.delta[k];
        moved = problem.barrier(trial, mu) <= current - 0.01 * t * step.decrement;
      }
      if (!moved) break;
      s.swap(trial);
    }
    if (mu * size <= options.tol) {
      const double lower = problem.linear_minimizer(problem.dual_certificate(dual)).second;
      const RationalVector exact = problem.round_exact(s, start);
      const double value = problem.value(to_doubles(exact));
      gap = std::max(value - lower, 0.0);
      if (gap <= options.tol) return finish(problem, exact, lower, iter);
    }
    if (mu < kSmallestBarrier) fail(problem.value(s), gap, iter);
    mu *= 0.1;
  }
}

}  // namespace

UnionResult union_star(const JointDistribution& input, const UnionOptions& options) {
  if (input.num_sources() < 1) throw InputError("at least one source is required");
  if (!(options.tol > 0)) throw InputError("tolerance must be positive");
  const JointDistribution joint = canonicalize(input).joint;
  const CouplingProblem problem(joint);
  const RationalVector start = problem.independent_coupling();

  ActiveSet active;
  active.weights[active.insert(start)] = 1.0;
  std::vector<double> s = active.point();

  const std::size_t budget = std::min(options.max_iter, kFrankWolfeBudget);
  double gap = kInf, lower = -kInf;
  std::size_t iter = 0;
  while (true) {
    const auto lin = problem.linearize(s);
    auto [vertex, bound] = problem.linear_minimizer(lin.direction);
    if (lin.differ) bound = problem.linear_minimizer(lin.certificate).second;
    lower = bound;
    gap = std::max(problem.value(s) - lower, 0.0);
    if (gap <= options.tol) break;
    if (iter == budget) {
      if (iter == options.max_iter) fail(problem.value(s), gap, iter);
      return barrier_polish(problem, start, s, gap, iter, options);
    }
    ++iter;

    const std::size_t fw = active.insert(std::move(vertex));
    std::size_t away = fw;
    double worst = -kInf;
    for (std::size_t a = 0; a < active.atoms.size(); ++a) {
      if (a == fw || active.weights[a] <= 0) continue;
      const double v = dot(lin.direction, active.atoms_double[a]);
      if (v > worst) {
        worst = v;
        away = a;
      }
    }
    if (away == fw) {
      active.prune();
      continue;
    }
    std::vector<double> d(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) d[k] = active.atoms_double[fw][k] - active.atoms_double[away][k];
    const double t_max = active.weights[away];
    double t = line_search(problem, s, d, t_max);
    // A minimiser within rounding of the boundary is taken as a drop step.
    if (t >= t_max * (1 - 1e-12)) t = t_max;
    active.weights[fw] += t;
    active.weights[away] = t == t_max ? 0.0 : active.weights[away] - t;
    active.prune();
    s = active.point();
  }

  auto result = finish(problem, active.combine(), lower, iter);
  if (result.fw_gap <= options.tol) return result;
  return barrier_polish(problem, start, s, result.fw_gap, iter, options);
}

double synergy(const JointDistribution& joint, const UnionOptions& options) {
  return total_information(joint) - union_star(joint, options).value;
}

double excluded_information(const JointDistribution& joint, std::size_t source, const UnionOptions& options) {
  if (source >= joint.num_sources()) {
    throw InputError("source index " + std::to_string(source) + " out of range");
  }
  return union_star(joint, options).value - source_information(joint, source);
}

double broja_redundancy(const JointDistribution& joint, const UnionOptions& options) {
  if (joint.num_sources() != 2) throw InputError("BROJA redundancy is defined for exactly two sources");
  return source_information(joint, 0) + source_information(joint, 1) - union_star(joint, options).value;
}

}  // namespace pidkit
