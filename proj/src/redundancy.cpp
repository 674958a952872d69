#include "pidkit/redundancy.hpp"

#include <algorithm>
#include <numeric>

#include "pidkit/errors.hpp"
#include "pidkit/info.hpp"

namespace pidkit {
namespace {

constexpr double kTieTolerance = 1e-12;

/// The set of admissible unnormalised label vectors u_q >= 0 with A u_q = 0.
/// A feasible Q is a tuple of such vectors summing to the all-ones vector;
/// its information is sum_q f(L u_q) with f convex and positively
/// homogeneous, so the optimum is a nonnegative combination of extreme rays.
struct Cone {
  std::size_t dim = 0;
  std::vector<RationalVector> equalities;
  /// Strictly positive on every nonzero point of the cone.
  RationalVector normalizer;
  /// Row y maps u_q to s(q|y).
  std::vector<RationalVector> to_target;
  std::vector<double> prior;
};

struct ConeOptimum {
  double value = 0.0;
  std::vector<RationalVector> labels;
  std::size_t examined = 0;
  std::optional<std::size_t> optimal_count;
};

RationalVector target_row(const Cone& cone, const RationalVector& u) {
  RationalVector s(cone.to_target.size(), Rational(0));
  for (std::size_t y = 0; y < s.size(); ++y) {
    for (std::size_t k = 0; k < cone.dim; ++k) {
      if (sgn(u[k]) != 0 && sgn(cone.to_target[y][k]) != 0) s[y] += cone.to_target[y][k] * u[k];
    }
  }
  return s;
}

double label_value(const Cone& cone, const RationalVector& u) {
  const auto row = to_doubles(target_row(cone, u));
  return output_row_information(cone.prior, row);
}

double total_value(const Cone& cone, const std::vector<RationalVector>& labels) {
  double v = 0.0;
  for (const auto& u : labels) v += label_value(cone, u);
  return std::max(v, 0.0);
}

ConeOptimum ray_optimum(const Cone& cone, std::size_t cap) {
  HPolytope slice(cone.dim);
  for (std::size_t k = 0; k < cone.dim; ++k) slice.add_nonnegative(k);
  for (const auto& e : cone.equalities) slice.add_equality(e, 0);
  slice.add_equality(cone.normalizer, 1);
  const VertexSet rays = enumerate_vertices(slice, {cap});
  if (rays.empty()) throw InvariantViolation("consistency cone has no extreme rays");

  const std::size_t j = rays.size();
  HPolytope weights(j);
  for (std::size_t r = 0; r < j; ++r) weights.add_nonnegative(r);
  for (std::size_t k = 0; k < cone.dim; ++k) {
    RationalVector row(j);
    for (std::size_t r = 0; r < j; ++r) row[r] = rays.points[r][k];
    weights.add_equality(std::move(row), 1);
  }
  RationalVector objective(j);
  for (std::size_t r = 0; r < j; ++r) objective[r] = rational_from_double(label_value(cone, rays.points[r]));
  const auto sol = lp_solve({std::move(weights), std::move(objective), Sense::maximize});
  if (!sol.feasible()) throw InvariantViolation("extreme rays do not cover the all-ones vector");

  ConeOptimum out;
  out.examined = j;
  for (std::size_t r = 0; r < j; ++r) {
    if (sgn(sol.point[r]) == 0) continue;
    RationalVector u = rays.points[r];
    for (auto& v : u) v *= sol.point[r];
    out.labels.push_back(std::move(u));
  }
  out.value = total_value(cone, out.labels);
  return out;
}

HPolytope lambda_polytope(const Cone& cone, std::size_t q_card) {
  const std::size_t d = cone.dim;
  HPolytope poly(q_card * d);
  for (std::size_t k = 0; k < q_card * d; ++k) poly.add_nonnegative(k);
  for (std::size_t k = 0; k < d; ++k) {
    RationalVector row(q_card * d, Rational(0));
    for (std::size_t q = 0; q < q_card; ++q) row[q * d + k] = 1;
    poly.add_equality(std::move(row), 1);
  }
  for (std::size_t q = 0; q < q_card; ++q) {
    for (const auto& e : cone.equalities) {
      RationalVector row(q_card * d, Rational(0));
      std::copy(e.begin(), e.end(), row.begin() + static_cast<std::ptrdiff_t>(q * d));
      poly.add_equality(std::move(row), 0);
    }
  }
  return poly;
}

std::vector<RationalVector> split_labels(const RationalVector& point, std::size_t q_card, std::size_t d) {
  std::vector<RationalVector> labels;
  for (std::size_t q = 0; q < q_card; ++q) {
    const auto first = point.begin() + static_cast<std::ptrdiff_t>(q * d);
    labels.emplace_back(first, first + static_cast<std::ptrdiff_t>(d));
  }
  return labels;
}

/// Exhaustive search over the vertices of the full system with q_card
/// labels. Ties are broken towards the lexicographically smallest vertex.
ConeOptimum lambda_optimum(const Cone& cone, std::size_t q_card, std::size_t cap) {
  const VertexSet vertices = enumerate_vertices(lambda_polytope(cone, q_card), {cap});
  if (vertices.empty()) throw InvariantViolation("label system is infeasible");
  std::vector<double> values;
  values.reserve(vertices.size());
  for (const auto& v : vertices.points) values.push_back(total_value(cone, split_labels(v, q_card, cone.dim)));
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best] + kTieTolerance) best = k;
  }
  ConeOptimum out;
  out.examined = vertices.size();
  out.labels = split_labels(vertices.points[best], q_card, cone.dim);
  out.value = values[best];
  out.optimal_count = static_cast<std::size_t>(std::count_if(
      values.begin(), values.end(), [&](double v) { return v >= values[best] - kTieTolerance; }));
  return out;
}

/// Ray route when its solution fits in q_card labels, full search otherwise.
ConeOptimum cone_optimum(const Cone& cone, std::size_t q_card, std::size_t cap, bool& limited) {
  ConeOptimum rays = ray_optimum(cone, cap);
  limited = rays.labels.size() > q_card;
  if (!limited) return rays;
  ConeOptimum full = lambda_optimum(cone, q_card, cap);
  full.examined += rays.examined;
  return full;
}

Cone redundancy_cone(const RationalVector& prior_y, const std::vector<Channel>& channels) {
  if (channels.empty()) throw InputError("at least one source channel is required");
  for (const auto& ch : channels) {
    if (ch.input().labels() != channels.front().input().labels()) {
      throw InputError("source channels do not share an input alphabet");
    }
  }
  const std::size_t ny = channels.front().num_inputs();
  if (prior_y.size() != ny) throw InputError("target prior does not match the channel input alphabet");

  std::vector<std::size_t> offset;
  Cone cone;
  for (const auto& ch : channels) {
    offset.push_back(cone.dim);
    cone.dim += ch.num_outputs();
  }
  const Channel& first = channels.front();
  for (std::size_t i = 1; i < channels.size(); ++i) {
    for (std::size_t y = 0; y < ny; ++y) {
      RationalVector row(cone.dim, Rational(0));
      for (std::size_t x = 0; x < channels[i].num_outputs(); ++x) row[offset[i] + x] = channels[i](x, y);
      for (std::size_t x = 0; x < first.num_outputs(); ++x) row[x] -= first(x, y);
      cone.equalities.push_back(std::move(row));
    }
  }
  cone.normalizer.assign(cone.dim, Rational(0));
  for (std::size_t x = 0; x < first.num_outputs(); ++x) cone.normalizer[x] = 1;
  for (std::size_t y = 0; y < ny; ++y) {
    RationalVector row(cone.dim, Rational(0));
    for (std::size_t x = 0; x < first.num_outputs(); ++x) row[x] = first(x, y);
    cone.to_target.push_back(std::move(row));
  }
  cone.prior = to_doubles(prior_y);
  return cone;
}

JointDistribution prepared(const JointDistribution& joint) {
  if (joint.num_sources() < 1) throw InputError("at least one source is required");
  return canonicalize(joint).joint;
}

std::vector<Channel> source_channels(const JointDistribution& joint) {
  std::vector<Channel> out;
  for (std::size_t i = 0; i < joint.num_sources(); ++i) out.push_back(source_channel(joint, i));
  return out;
}

Alphabet q_alphabet(std::size_t q_card) {
  std::vector<std::string> labels;
  for (std::size_t q = 0; q < q_card; ++q) labels.push_back("q" + std::to_string(q));
  return Alphabet("Q", std::move(labels));
}

std::size_t resolve_cardinality(const RedundancyOptions& options, std::size_t bound,
                                std::vector<std::string>& caveats) {
  const std::size_t q_card = options.q_cardinality.value_or(bound);
  if (q_card < 1) throw InputError("q cardinality must be at least 1");
  if (q_card > bound) {
    caveats.push_back("q cardinality " + std::to_string(q_card) + " exceeds the sufficient bound " +
                      std::to_string(bound) + "; extra labels stay unused");
  }
  return q_card;
}

/// Re-raises a cap overflow with a feasible, uncertified lower bound.
[[noreturn]] void rethrow_with_floor(const ResourceError& e, const JointDistribution& joint,
                                     std::size_t q_card) {
  std::vector<std::size_t> sources(joint.num_sources());
  std::iota(sources.begin(), sources.end(), 1);
  const bool fits = common_partition(joint, sources).num_components <= q_card;
  const double floor = fits ? redundancy_wedge(joint) : 0.0;
  throw ResourceError(std::string(e.what()) + " (best so far " + std::to_string(floor) +
                          " bits, not certified)",
                      e.cap(), floor);
}

std::size_t find(std::vector<std::size_t>& parent, std::size_t a) {
  while (parent[a] != a) a = parent[a] = parent[parent[a]];
  return a;
}

}  // namespace

std::size_t redundancy_cardinality_bound(const JointDistribution& joint) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < joint.num_sources(); ++i) total += joint.source(i).size();
  return total - joint.num_sources() + 1;
}

HPolytope build_lambda_system(const RationalVector& prior_y, const std::vector<Channel>& channels,
                              std::size_t q_cardinality) {
  if (q_cardinality < 1) throw InputError("q cardinality must be at least 1");
  return lambda_polytope(redundancy_cone(prior_y, channels), q_cardinality);
}

RedundancyResult redundancy_star(const JointDistribution& input, const RedundancyOptions& options) {
  const JointDistribution joint = prepared(input);
  const auto channels = source_channels(joint);
  const RationalVector prior = marginal_pmf(joint, 0);
  const Cone cone = redundancy_cone(prior, channels);

  std::vector<std::string> caveats;
  const std::size_t q_card = resolve_cardinality(options, redundancy_cardinality_bound(joint), caveats);
  bool limited = false;
  ConeOptimum best;
  try {
    best = cone_optimum(cone, q_card, options.vertex_cap, limited);
  } catch (const ResourceError& e) {
    rethrow_with_floor(e, joint, q_card);
  }
  if (limited) caveats.push_back("searched all vertices with the requested q cardinality");
  best.labels.resize(q_card, RationalVector(cone.dim, Rational(0)));

  const Alphabet q = q_alphabet(q_card);
  const std::size_t ny = joint.target().size();
  RationalVector sy(q_card * ny);
  for (std::size_t k = 0; k < q_card; ++k) {
    const auto row = target_row(cone, best.labels[k]);
    std::copy(row.begin(), row.end(), sy.begin() + static_cast<std::ptrdiff_t>(k * ny));
  }
  RedundancyResult result{best.value, Channel(joint.target(), q, std::move(sy)), {}, q_card,
                          best.examined, best.optimal_count, std::move(caveats)};
  std::size_t offset = 0;
  for (std::size_t i = 0; i < joint.num_sources(); ++i) {
    const std::size_t nx = joint.source(i).size();
    RationalVector m(q_card * nx);
    for (std::size_t k = 0; k < q_card; ++k) {
      for (std::size_t x = 0; x < nx; ++x) m[k * nx + x] = best.labels[k][offset + x];
    }
    result.channels_q_given_x.emplace_back(joint.source(i), q, std::move(m));
    offset += nx;
  }
  return result;
}

CommonPartition common_partition(const JointDistribution& joint, const std::vector<std::size_t>& vars) {
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  for (std::size_t v : vars) {
    offset.push_back(total);
    total += joint.variable(v).size();
  }
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    if (sgn(joint.pmf()[flat]) == 0) continue;
    const auto o = joint.outcome(flat);
    const std::size_t root = find(parent, offset[0] + o[vars[0]]);
    for (std::size_t k = 1; k < vars.size(); ++k) parent[find(parent, offset[k] + o[vars[k]])] = root;
  }
  CommonPartition out;
  std::vector<std::size_t> label_of_root(total, total);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    std::vector<std::size_t> labels;
    for (std::size_t x = 0; x < joint.variable(vars[k]).size(); ++x) {
      auto& l = label_of_root[find(parent, offset[k] + x)];
      if (l == total) l = out.num_components++;
      labels.push_back(l);
    }
    out.labels.push_back(std::move(labels));
  }
  return out;
}

CommonInformation gk_common_information(const JointDistribution& pair_joint) {
  if (pair_joint.num_variables() != 2) throw InputError("common information needs exactly two variables");
  CommonInformation out{0.0, common_partition(pair_joint, {0, 1})};
  RationalVector mass(out.partition.num_components, Rational(0));
  for (std::size_t flat = 0; flat < pair_joint.size(); ++flat) {
    mass[out.partition.labels[0][pair_joint.outcome(flat)[0]]] += pair_joint.pmf()[flat];
  }
  out.value = entropy(std::span<const Rational>(mass));
  return out;
}

double redundancy_wedge(const JointDistribution& joint) {
  if (joint.num_sources() < 1) throw InputError("at least one source is required");
  std::vector<std::size_t> sources(joint.num_sources());
  std::iota(sources.begin(), sources.end(), 1);
  const CommonPartition part = common_partition(joint, sources);
  const std::size_t ny = joint.target().size(), nc = part.num_components;
  RationalVector table(ny * nc, Rational(0));
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    if (sgn(joint.pmf()[flat]) == 0) continue;
    const auto o = joint.outcome(flat);
    table[o[0] * nc + part.labels[0][o[1]]] += joint.pmf()[flat];
  }
  const JointDistribution yq({joint.target(), Alphabet::range("Q", nc)}, std::move(table));
  const std::size_t a = 0, b = 1;
  return mutual_information_indices(yq, std::span(&a, 1), std::span(&b, 1));
}

GhResult redundancy_gh(const JointDistribution& input, const RedundancyOptions& options) {
  const JointDistribution joint = prepared(input);
  const std::size_t n = joint.num_sources(), ny = joint.target().size();
  std::vector<std::vector<std::size_t>> support;
  RationalVector mass;
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    if (sgn(joint.pmf()[flat]) == 0) continue;
    support.push_back(joint.outcome(flat));
    mass.push_back(joint.pmf()[flat]);
  }
  const RationalVector py = marginal_pmf(joint, 0);

  Cone cone;
  cone.dim = support.size();
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t nx = joint.variable(i).size();
    const RationalVector px = marginal_pmf(joint, i);
    RationalVector pyx(ny * nx, Rational(0));
    for (std::size_t k = 0; k < cone.dim; ++k) pyx[support[k][0] * nx + support[k][i]] += mass[k];
    // s(q|y,x_i) = s(q|x_i) wherever p(y,x_i) > 0.
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t x = 0; x < nx; ++x) {
        if (sgn(pyx[y * nx + x]) == 0) continue;
        RationalVector row(cone.dim, Rational(0));
        for (std::size_t k = 0; k < cone.dim; ++k) {
          if (support[k][i] != x) continue;
          if (support[k][0] == y) row[k] += mass[k] / pyx[y * nx + x];
          row[k] -= mass[k] / px[x];
        }
        cone.equalities.push_back(std::move(row));
      }
    }
  }
  cone.normalizer = mass;
  for (std::size_t y = 0; y < ny; ++y) {
    RationalVector row(cone.dim, Rational(0));
    for (std::size_t k = 0; k < cone.dim; ++k) {
      if (support[k][0] == y) row[k] = mass[k] / py[y];
    }
    cone.to_target.push_back(std::move(row));
  }
  cone.prior = to_doubles(py);

  GhResult out;
  const std::size_t q_card = resolve_cardinality(options, redundancy_cardinality_bound(joint), out.caveats);
  ConeOptimum best;
  try {
    best = cone_optimum(cone, q_card, options.vertex_cap, out.cardinality_limited);
  } catch (const ResourceError& e) {
    rethrow_with_floor(e, joint, q_card);
  }
  if (out.cardinality_limited) {
    out.caveats.push_back("optimum restricted to " + std::to_string(q_card) +
                          " labels; no cardinality bound is known, so the value may undershoot");
  }
  out.value = best.value;
  out.q_cardinality = q_card;
  out.vertices_examined = best.examined;
  return out;
}

double unique_information(const JointDistribution& joint, std::size_t source,
                          const RedundancyOptions& options) {
  if (source >= joint.num_sources()) {
    throw InputError("source index " + std::to_string(source) + " out of range");
  }
  return source_information(joint, source) - redundancy_star(joint, options).value;
}

}  // namespace pidkit
