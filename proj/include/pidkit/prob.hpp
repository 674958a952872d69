#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pidkit/rational.hpp"

namespace pidkit {

/// A named discrete variable with an ordered list of outcome labels.
/// Position in the label list is the outcome index everywhere else.
class Alphabet {
 public:
  Alphabet(std::string name, std::vector<std::string> labels);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  /// Throws InputError for an unknown label.
  std::size_t index_of(std::string_view label) const;

  /// {"0", "1", ..., "k-1"}
  static Alphabet range(std::string name, std::size_t k);

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string name_;
  std::vector<std::string> labels_;
};

/// Exact joint pmf over a target (variable 0) and sources (variables 1..n),
/// stored densely in row-major order with the last variable fastest.
class JointDistribution {
 public:
  JointDistribution(std::vector<Alphabet> variables, RationalVector pmf);

  const std::vector<Alphabet>& variables() const noexcept { return variables_; }
  std::size_t num_variables() const noexcept { return variables_.size(); }
  std::size_t num_sources() const noexcept { return variables_.size() - 1; }
  const Alphabet& variable(std::size_t i) const { return variables_.at(i); }
  const Alphabet& target() const { return variables_.front(); }
  const Alphabet& source(std::size_t i) const { return variables_.at(i + 1); }

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  const RationalVector& pmf() const noexcept { return pmf_; }
  std::size_t size() const noexcept { return pmf_.size(); }

  const Rational& at(std::span<const std::size_t> outcome) const {
    return pmf_[flat_index(outcome)];
  }
  std::size_t flat_index(std::span<const std::size_t> outcome) const;
  std::vector<std::size_t> outcome(std::size_t flat) const;

  /// Throws InputError for an unknown name.
  std::size_t variable_index(std::string_view name) const;
  std::vector<std::size_t> variable_indices(std::span<const std::string> names) const;

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

 private:
  std::vector<Alphabet> variables_;
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;
  RationalVector pmf_;
};

/// Column-stochastic conditional distribution, entry (out, in) = k(out | in).
class Channel {
 public:
  Channel(Alphabet input, Alphabet output, RationalVector matrix);

  const Alphabet& input() const noexcept { return input_; }
  const Alphabet& output() const noexcept { return output_; }
  std::size_t num_inputs() const noexcept { return input_.size(); }
  std::size_t num_outputs() const noexcept { return output_.size(); }

  const Rational& operator()(std::size_t out, std::size_t in) const {
    return matrix_[out * input_.size() + in];
  }
  /// Output-major storage.
  const RationalVector& matrix() const noexcept { return matrix_; }

  static Channel identity(const Alphabet& alphabet);
  /// Every input mapped to the same output distribution.
  static Channel constant(Alphabet input, Alphabet output, const RationalVector& column);

  friend bool operator==(const Channel&, const Channel&) = default;

 private:
  Alphabet input_;
  Alphabet output_;
  RationalVector matrix_;
};

/// Result of pruning zero-probability outcomes.
struct PrunedOutcome {
  std::string variable;
  std::string label;
};

struct CanonicalJoint {
  JointDistribution joint;
  std::vector<PrunedOutcome> pruned;
};

/// Drops every outcome whose single-variable marginal is zero.
CanonicalJoint canonicalize(const JointDistribution& joint);

/// True when every single-variable marginal has full support.
bool is_canonical(const JointDistribution& joint);

/// Marginal over the named variables; the result keeps the joint's variable
/// order, so its first variable plays the target role.
JointDistribution marginalize(const JointDistribution& joint,
                              std::span<const std::string> vars);
JointDistribution marginalize_indices(const JointDistribution& joint,
                                      std::span<const std::size_t> vars);

/// Marginal pmf of a single variable.
RationalVector marginal_pmf(const JointDistribution& joint, std::size_t var);

/// Channel from `given` to the joint outcome of `of`. Tuple outcomes are
/// labelled by comma-joining their components.
Channel condition(const JointDistribution& joint, std::string_view given,
                  std::span<const std::string> of);
Channel condition_indices(const JointDistribution& joint, std::size_t given,
                          std::span<const std::size_t> of);

/// p(x_i | y) for source i (zero based).
Channel source_channel(const JointDistribution& joint, std::size_t source);

/// outer o inner: (outer o inner)(a|z) = sum_b outer(a|b) inner(b|z).
Channel compose(const Channel& outer, const Channel& inner);

/// Joint over (input, output) from a prior on the input.
JointDistribution joint_from_channel(const RationalVector& prior, const Channel& channel);

/// Builds a joint with `y` as target and sources given by conditional
/// channels applied independently: p(y) prod_i k_i(x_i | y).
JointDistribution conditionally_independent_joint(const Alphabet& target,
                                                  const RationalVector& prior,
                                                  std::span<const Channel> channels);

/// Appends a new source that is a channel applied to an existing variable.
JointDistribution append_source(const JointDistribution& joint, std::size_t from_var,
                                const Channel& channel);

/// Result variable k is joint variable order[k]. Indices may repeat; a
/// repeated variable is renamed with a trailing "'" to keep names unique.
JointDistribution select_variables(const JointDistribution& joint,
                                   std::span<const std::size_t> order);

}  // namespace pidkit
