#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pidkit/geometry.hpp"
#include "pidkit/prob.hpp"

namespace pidkit {

struct RedundancyOptions {
  /// Number of Q labels. Defaults to sum_i |X_i| - n + 1.
  std::optional<std::size_t> q_cardinality;
  std::size_t vertex_cap = EnumerationOptions{}.vertex_cap;
};

struct RedundancyResult {
  double value = 0.0;
  /// s(q|y), Y -> Q.
  Channel channel_q_given_y;
  /// s(q|x_i), X_i -> Q, one per source.
  std::vector<Channel> channels_q_given_x;
  std::size_t q_cardinality = 0;
  /// Extreme rays of the consistency cone, or vertices of the full system
  /// when the cardinality-restricted search runs.
  std::size_t vertices_examined = 0;
  /// Optimal vertices within 1e-12 bits; only known for the full search.
  std::optional<std::size_t> optimal_vertex_count;
  std::vector<std::string> caveats;
};

/// sum_i |X_i| - n + 1
std::size_t redundancy_cardinality_bound(const JointDistribution& joint);

/// The feasible set of channel tuples s(q|x_i) with a common s(q|y).
/// Variable s(q|x_i) sits at q * (sum_i |X_i|) + offset_i + x_i.
HPolytope build_lambda_system(const RationalVector& prior_y, const std::vector<Channel>& channels,
                              std::size_t q_cardinality);

/// Redundancy I_cap*: the largest I(Y;Q) over channels Q that are garblings
/// of every source channel. Zero-marginal outcomes are pruned first.
RedundancyResult redundancy_star(const JointDistribution& joint, const RedundancyOptions& options = {});

/// Component label per outcome of each grouped variable.
struct CommonPartition {
  std::vector<std::vector<std::size_t>> labels;
  std::size_t num_components = 0;
};

/// Connected components of outcomes of `vars` linked by co-occurrence with
/// positive probability. Components are numbered in order of first
/// appearance.
CommonPartition common_partition(const JointDistribution& joint, const std::vector<std::size_t>& vars);

struct CommonInformation {
  double value = 0.0;
  CommonPartition partition;
};

/// Gacs-Korner common information of a two-variable joint.
CommonInformation gk_common_information(const JointDistribution& pair_joint);

/// I(Y;Q) for Q the common component of all sources.
double redundancy_wedge(const JointDistribution& joint);

struct GhResult {
  double value = 0.0;
  std::size_t q_cardinality = 0;
  std::size_t vertices_examined = 0;
  /// True when the search ran with a fixed label count that may be too
  /// small to reach the supremum.
  bool cardinality_limited = false;
  std::vector<std::string> caveats;
};

/// R^GH: the largest I(Y;Q) over Q with I(Y;Q|X_i) = 0 for every source.
GhResult redundancy_gh(const JointDistribution& joint, const RedundancyOptions& options = {});

/// I(Y;X_i) - I_cap* for source i (zero based).
double unique_information(const JointDistribution& joint, std::size_t source,
                          const RedundancyOptions& options = {});

}  // namespace pidkit
