#pragma once

#include <span>
#include <string>
#include <vector>

#include "pidkit/prob.hpp"

namespace pidkit {

/// Shannon entropy in bits with 0 log 0 = 0.
double entropy(std::span<const double> pmf);
double entropy(std::span<const Rational> pmf);

/// Entropy of the marginal over a set of variable indices.
double joint_entropy(const JointDistribution& joint, std::span<const std::size_t> vars);

/// I(A;B) in bits. Groups must be non-empty and disjoint.
double mutual_information(const JointDistribution& joint, std::span<const std::string> group_a,
                          std::span<const std::string> group_b);
double mutual_information_indices(const JointDistribution& joint,
                                  std::span<const std::size_t> group_a,
                                  std::span<const std::size_t> group_b);

/// I(A;B|C) in bits. The three groups must be pairwise disjoint; C may be empty.
double conditional_mutual_information(const JointDistribution& joint,
                                      std::span<const std::string> group_a,
                                      std::span<const std::string> group_b,
                                      std::span<const std::string> given);
double conditional_mutual_information_indices(const JointDistribution& joint,
                                              std::span<const std::size_t> group_a,
                                              std::span<const std::size_t> group_b,
                                              std::span<const std::size_t> given);

/// I(Y; X_i) for source i.
double source_information(const JointDistribution& joint, std::size_t source);
/// I(Y; X_1..X_n).
double total_information(const JointDistribution& joint);

/// I(Z; C) for prior p_Z and channel p_{C|Z}.
double channel_information(std::span<const double> prior, const Channel& channel);
double channel_information(std::span<const Rational> prior, const Channel& channel);

/// I(Z;C) for a prior and a dense output-major channel matrix of doubles
/// (rows are outputs, columns inputs). Rows need not be normalised across
/// outputs; each row contributes sum_z p(z) k(c|z) log(k(c|z) / k(c)).
double channel_information(std::span<const double> prior, std::span<const double> matrix,
                           std::size_t num_outputs);

/// One output row's contribution to I(Z;C):
/// sum_z p(z) a_z log2(a_z / sum_z' p(z') a_z'). Positively homogeneous and
/// convex in a.
double output_row_information(std::span<const double> prior, std::span<const double> row);

}  // namespace pidkit
