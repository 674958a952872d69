#include "pidkit/info.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pidkit/errors.hpp"

namespace pidkit {
namespace {

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

void check_groups(std::span<const std::size_t> a, std::span<const std::size_t> b,
                  std::span<const std::size_t> c, std::size_t num_vars) {
  if (a.empty() || b.empty()) throw InputError("information groups must be non-empty");
  std::set<std::size_t> seen;
  for (auto group : {a, b, c}) {
    for (std::size_t v : group) {
      if (v >= num_vars) throw InputError("variable index out of range");
      if (!seen.insert(v).second) throw InputError("information groups overlap");
    }
  }
}

std::vector<std::size_t> merged(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  std::vector<std::size_t> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

double entropy(std::span<const double> pmf) {
  double h = 0.0;
  for (double p : pmf) h -= xlog2x(p);
  return std::max(h, 0.0);
}

double entropy(std::span<const Rational> pmf) {
  double h = 0.0;
  for (const auto& p : pmf) {
    if (sgn(p) < 0) throw InputError("negative probability");
    h -= xlog2x(p.get_d());
  }
  return std::max(h, 0.0);
}

double joint_entropy(const JointDistribution& joint, std::span<const std::size_t> vars) {
  if (vars.empty()) return 0.0;
  return entropy(std::span<const Rational>(marginalize_indices(joint, vars).pmf()));
}

double mutual_information_indices(const JointDistribution& joint, std::span<const std::size_t> group_a,
                                  std::span<const std::size_t> group_b) {
  return conditional_mutual_information_indices(joint, group_a, group_b, {});
}

double conditional_mutual_information_indices(const JointDistribution& joint,
                                              std::span<const std::size_t> group_a,
                                              std::span<const std::size_t> group_b,
                                              std::span<const std::size_t> given) {
  check_groups(group_a, group_b, given, joint.num_variables());
  const auto ac = merged(group_a, given);
  const auto bc = merged(group_b, given);
  const auto abc = merged(ac, group_b);
  // I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)
  const double value = joint_entropy(joint, ac) + joint_entropy(joint, bc) -
                       joint_entropy(joint, abc) - joint_entropy(joint, given);
  return std::max(value, 0.0);
}

double mutual_information(const JointDistribution& joint, std::span<const std::string> group_a,
                          std::span<const std::string> group_b) {
  return mutual_information_indices(joint, joint.variable_indices(group_a),
                                    joint.variable_indices(group_b));
}

double conditional_mutual_information(const JointDistribution& joint,
                                      std::span<const std::string> group_a,
                                      std::span<const std::string> group_b,
                                      std::span<const std::string> given) {
  return conditional_mutual_information_indices(joint, joint.variable_indices(group_a),
                                                joint.variable_indices(group_b),
                                                joint.variable_indices(given));
}

double source_information(const JointDistribution& joint, std::size_t source) {
  if (source >= joint.num_sources()) throw InputError("source index out of range");
  const std::size_t y[] = {0};
  const std::size_t x[] = {source + 1};
  return mutual_information_indices(joint, y, x);
}

double total_information(const JointDistribution& joint) {
  if (joint.num_sources() == 0) return 0.0;
  const std::size_t y[] = {0};
  std::vector<std::size_t> xs;
  for (std::size_t i = 1; i < joint.num_variables(); ++i) xs.push_back(i);
  return mutual_information_indices(joint, y, xs);
}

double output_row_information(std::span<const double> prior, std::span<const double> row) {
  double mass = 0.0;
  for (std::size_t z = 0; z < prior.size(); ++z) mass += prior[z] * row[z];
  if (mass <= 0.0) return 0.0;
  double value = 0.0;
  for (std::size_t z = 0; z < prior.size(); ++z) {
    const double a = row[z];
    if (a > 0.0 && prior[z] > 0.0) value += prior[z] * a * std::log2(a / mass);
  }
  return value;
}

double channel_information(std::span<const double> prior, std::span<const double> matrix,
                           std::size_t num_outputs) {
  const std::size_t nin = prior.size();
  if (matrix.size() != nin * num_outputs) throw InputError("channel matrix has wrong size");
  double value = 0.0;
  for (std::size_t c = 0; c < num_outputs; ++c) {
    value += output_row_information(prior, matrix.subspan(c * nin, nin));
  }
  return std::max(value, 0.0);
}

double channel_information(std::span<const double> prior, const Channel& channel) {
  if (prior.size() != channel.num_inputs()) throw InputError("prior does not match channel input");
  return channel_information(prior, to_doubles(channel.matrix()), channel.num_outputs());
}

double channel_information(std::span<const Rational> prior, const Channel& channel) {
  const std::vector<double> p = to_doubles(RationalVector(prior.begin(), prior.end()));
  return channel_information(std::span<const double>(p), channel);
}

}  // namespace pidkit
