#include "pidkit/prob.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "pidkit/errors.hpp"

namespace pidkit {
namespace {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::string join_labels(const std::vector<const std::string*>& parts) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += ',';
    out += *parts[k];
  }
  return out;
}

/// Alphabet over the Cartesian product of several variables, first
/// variable slowest.
Alphabet product_alphabet(const JointDistribution& joint, std::span<const std::size_t> vars) {
  std::vector<std::size_t> dims;
  std::string name;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    dims.push_back(joint.variable(vars[k]).size());
    if (k) name += ',';
    name += joint.variable(vars[k]).name();
  }
  if (vars.size() == 1) return joint.variable(vars[0]);
  std::vector<std::string> labels;
  std::vector<std::size_t> idx(vars.size(), 0);
  const std::size_t total = product(dims);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t k = vars.size(); k-- > 0;) {
      idx[k] = rem % dims[k];
      rem /= dims[k];
    }
    std::vector<const std::string*> parts;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      parts.push_back(&joint.variable(vars[k]).label(idx[k]));
    }
    labels.push_back(join_labels(parts));
  }
  return Alphabet(std::move(name), std::move(labels));
}

std::size_t sub_index(const std::vector<std::size_t>& outcome, std::span<const std::size_t> vars,
                      const std::vector<std::size_t>& shape) {
  std::size_t out = 0;
  for (std::size_t v : vars) out = out * shape[v] + outcome[v];
  return out;
}

void check_distinct(std::span<const std::size_t> vars, std::size_t num_vars) {
  std::set<std::size_t> seen;
  for (std::size_t v : vars) {
    if (v >= num_vars) throw InputError("variable index out of range");
    if (!seen.insert(v).second) throw InputError("variable listed twice");
  }
}

}  // namespace

Alphabet::Alphabet(std::string name, std::vector<std::string> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
  if (labels_.empty()) throw InputError("variable '" + name_ + "' has no outcomes");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw InputError("variable '" + name_ + "' has duplicate outcome '" + l + "'");
    }
  }
}

std::size_t Alphabet::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw InputError("unknown outcome '" + std::string(label) + "' for variable '" + name_ + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

Alphabet Alphabet::range(std::string name, std::size_t k) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) labels.push_back(std::to_string(i));
  return Alphabet(std::move(name), std::move(labels));
}

JointDistribution::JointDistribution(std::vector<Alphabet> variables, RationalVector pmf)
    : variables_(std::move(variables)), pmf_(std::move(pmf)) {
  if (variables_.empty()) throw InputError("a joint distribution needs at least one variable");
  std::set<std::string> names;
  for (const auto& v : variables_) {
    if (!names.insert(v.name()).second) throw InputError("duplicate variable name '" + v.name() + "'");
    shape_.push_back(v.size());
  }
  strides_.assign(shape_.size(), 1);
  for (std::size_t k = shape_.size() - 1; k-- > 0;) strides_[k] = strides_[k + 1] * shape_[k + 1];
  if (pmf_.size() != product(shape_)) {
    throw InputError("pmf has " + std::to_string(pmf_.size()) + " entries, expected " +
                     std::to_string(product(shape_)));
  }
  Rational total = 0;
  for (const auto& p : pmf_) {
    if (sgn(p) < 0) throw InputError("negative probability " + to_string(p));
    total += p;
  }
  if (total != 1) {
    throw InputError("probabilities sum to " + to_string(total) + " (deficit " +
                     to_string(Rational(1 - total)) + ")");
  }
}

std::size_t JointDistribution::flat_index(std::span<const std::size_t> outcome) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape_.size(); ++k) flat += outcome[k] * strides_[k];
  return flat;
}

std::vector<std::size_t> JointDistribution::outcome(std::size_t flat) const {
  std::vector<std::size_t> out(shape_.size());
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    out[k] = flat / strides_[k];
    flat %= strides_[k];
  }
  return out;
}

std::size_t JointDistribution::variable_index(std::string_view name) const {
  for (std::size_t k = 0; k < variables_.size(); ++k) {
    if (variables_[k].name() == name) return k;
  }
  throw InputError("unknown variable '" + std::string(name) + "'");
}

std::vector<std::size_t> JointDistribution::variable_indices(std::span<const std::string> names) const {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(variable_index(n));
  return out;
}

Channel::Channel(Alphabet input, Alphabet output, RationalVector matrix)
    : input_(std::move(input)), output_(std::move(output)), matrix_(std::move(matrix)) {
  if (matrix_.size() != input_.size() * output_.size()) {
    throw InputError("channel matrix has wrong size");
  }
  for (std::size_t in = 0; in < input_.size(); ++in) {
    Rational column = 0;
    for (std::size_t out = 0; out < output_.size(); ++out) {
      const Rational& v = (*this)(out, in);
      if (sgn(v) < 0) throw InputError("negative channel entry");
      column += v;
    }
    if (column != 1) {
      throw InputError("channel column for input '" + input_.label(in) + "' sums to " +
                       to_string(column));
    }
  }
}

Channel Channel::identity(const Alphabet& alphabet) {
  const std::size_t k = alphabet.size();
  RationalVector m(k * k, Rational(0));
  for (std::size_t i = 0; i < k; ++i) m[i * k + i] = 1;
  return Channel(alphabet, alphabet, std::move(m));
}

Channel Channel::constant(Alphabet input, Alphabet output, const RationalVector& column) {
  if (column.size() != output.size()) throw InputError("constant channel column has wrong size");
  RationalVector m(input.size() * output.size());
  for (std::size_t out = 0; out < output.size(); ++out) {
    for (std::size_t in = 0; in < input.size(); ++in) m[out * input.size() + in] = column[out];
  }
  return Channel(std::move(input), std::move(output), std::move(m));
}

RationalVector marginal_pmf(const JointDistribution& joint, std::size_t var) {
  if (var >= joint.num_variables()) throw InputError("variable index out of range");
  RationalVector out(joint.variable(var).size(), Rational(0));
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const auto& p = joint.pmf()[flat];
    if (sgn(p) == 0) continue;
    out[joint.outcome(flat)[var]] += p;
  }
  return out;
}

bool is_canonical(const JointDistribution& joint) {
  for (std::size_t v = 0; v < joint.num_variables(); ++v) {
    for (const auto& p : marginal_pmf(joint, v)) {
      if (sgn(p) == 0) return false;
    }
  }
  return true;
}

CanonicalJoint canonicalize(const JointDistribution& joint) {
  std::vector<PrunedOutcome> pruned;
  std::vector<std::vector<std::size_t>> kept(joint.num_variables());
  std::vector<Alphabet> variables;
  for (std::size_t v = 0; v < joint.num_variables(); ++v) {
    const auto marginal = marginal_pmf(joint, v);
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < marginal.size(); ++k) {
      if (sgn(marginal[k]) > 0) {
        kept[v].push_back(k);
        labels.push_back(joint.variable(v).label(k));
      } else {
        pruned.push_back({joint.variable(v).name(), joint.variable(v).label(k)});
      }
    }
    variables.emplace_back(joint.variable(v).name(), std::move(labels));
  }
  if (pruned.empty()) return {joint, {}};

  std::vector<std::size_t> shape;
  for (const auto& k : kept) shape.push_back(k.size());
  RationalVector pmf(product(shape));
  std::vector<std::size_t> idx(shape.size()), original(shape.size());
  for (std::size_t flat = 0; flat < pmf.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t k = shape.size(); k-- > 0;) {
      idx[k] = rem % shape[k];
      rem /= shape[k];
      original[k] = kept[k][idx[k]];
    }
    pmf[flat] = joint.at(original);
  }
  return {JointDistribution(std::move(variables), std::move(pmf)), std::move(pruned)};
}

JointDistribution marginalize_indices(const JointDistribution& joint,
                                      std::span<const std::size_t> vars) {
  if (vars.empty()) throw InputError("marginalize needs at least one variable");
  check_distinct(vars, joint.num_variables());
  std::vector<std::size_t> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Alphabet> variables;
  std::vector<std::size_t> shape;
  for (std::size_t v : sorted) {
    variables.push_back(joint.variable(v));
    shape.push_back(joint.variable(v).size());
  }
  RationalVector pmf(product(shape), Rational(0));
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const auto& p = joint.pmf()[flat];
    if (sgn(p) == 0) continue;
    pmf[sub_index(joint.outcome(flat), sorted, joint.shape())] += p;
  }
  return JointDistribution(std::move(variables), std::move(pmf));
}

JointDistribution marginalize(const JointDistribution& joint, std::span<const std::string> vars) {
  return marginalize_indices(joint, joint.variable_indices(vars));
}

Channel condition_indices(const JointDistribution& joint, std::size_t given,
                          std::span<const std::size_t> of) {
  if (of.empty()) throw InputError("condition needs a non-empty output variable set");
  std::vector<std::size_t> all(of.begin(), of.end());
  all.push_back(given);
  check_distinct(all, joint.num_variables());

  Alphabet input = joint.variable(given);
  Alphabet output = product_alphabet(joint, of);
  const std::size_t nin = input.size();
  RationalVector m(nin * output.size(), Rational(0));
  RationalVector given_mass(nin, Rational(0));
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const auto& p = joint.pmf()[flat];
    if (sgn(p) == 0) continue;
    const auto o = joint.outcome(flat);
    m[sub_index(o, of, joint.shape()) * nin + o[given]] += p;
    given_mass[o[given]] += p;
  }
  for (std::size_t in = 0; in < nin; ++in) {
    if (sgn(given_mass[in]) == 0) {
      throw InvariantViolation("conditioning on zero-probability outcome '" + input.label(in) +
                               "' of '" + input.name() + "'");
    }
    for (std::size_t out = 0; out < output.size(); ++out) m[out * nin + in] /= given_mass[in];
  }
  return Channel(std::move(input), std::move(output), std::move(m));
}

Channel condition(const JointDistribution& joint, std::string_view given,
                  std::span<const std::string> of) {
  return condition_indices(joint, joint.variable_index(given), joint.variable_indices(of));
}

Channel source_channel(const JointDistribution& joint, std::size_t source) {
  if (source >= joint.num_sources()) throw InputError("source index out of range");
  const std::size_t of[] = {source + 1};
  return condition_indices(joint, 0, of);
}

Channel compose(const Channel& outer, const Channel& inner) {
  if (outer.input() != inner.output()) {
    throw InputError("cannot compose: outer input alphabet '" + outer.input().name() +
                     "' differs from inner output alphabet '" + inner.output().name() + "'");
  }
  const std::size_t na = outer.num_outputs(), nb = inner.num_outputs(), nz = inner.num_inputs();
  RationalVector m(na * nz, Rational(0));
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      const Rational& w = outer(a, b);
      if (sgn(w) == 0) continue;
      for (std::size_t z = 0; z < nz; ++z) m[a * nz + z] += w * inner(b, z);
    }
  }
  return Channel(inner.input(), outer.output(), std::move(m));
}

JointDistribution joint_from_channel(const RationalVector& prior, const Channel& channel) {
  if (prior.size() != channel.num_inputs()) throw InputError("prior does not match channel input");
  if (channel.input().name() == channel.output().name()) {
    throw InputError("channel input and output share a name");
  }
  RationalVector pmf(prior.size() * channel.num_outputs());
  for (std::size_t z = 0; z < prior.size(); ++z) {
    for (std::size_t c = 0; c < channel.num_outputs(); ++c) {
      pmf[z * channel.num_outputs() + c] = prior[z] * channel(c, z);
    }
  }
  return JointDistribution({channel.input(), channel.output()}, std::move(pmf));
}

JointDistribution conditionally_independent_joint(const Alphabet& target, const RationalVector& prior,
                                                  std::span<const Channel> channels) {
  if (prior.size() != target.size()) throw InputError("prior does not match target alphabet");
  std::vector<Alphabet> variables{target};
  std::vector<std::size_t> shape{target.size()};
  for (const auto& ch : channels) {
    if (ch.input().size() != target.size()) throw InputError("channel input does not match target");
    variables.push_back(ch.output());
    shape.push_back(ch.num_outputs());
  }
  RationalVector pmf(product(shape));
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t flat = 0; flat < pmf.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t k = shape.size(); k-- > 0;) {
      idx[k] = rem % shape[k];
      rem /= shape[k];
    }
    Rational p = prior[idx[0]];
    for (std::size_t i = 0; i < channels.size() && sgn(p) != 0; ++i) p *= channels[i](idx[i + 1], idx[0]);
    pmf[flat] = p;
  }
  return JointDistribution(std::move(variables), std::move(pmf));
}

JointDistribution append_source(const JointDistribution& joint, std::size_t from_var,
                                const Channel& channel) {
  if (from_var >= joint.num_variables()) throw InputError("variable index out of range");
  if (channel.num_inputs() != joint.variable(from_var).size()) {
    throw InputError("channel input does not match variable '" + joint.variable(from_var).name() + "'");
  }
  std::vector<Alphabet> variables = joint.variables();
  variables.push_back(channel.output());
  const std::size_t nout = channel.num_outputs();
  RationalVector pmf(joint.size() * nout);
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const std::size_t in = joint.outcome(flat)[from_var];
    for (std::size_t c = 0; c < nout; ++c) pmf[flat * nout + c] = joint.pmf()[flat] * channel(c, in);
  }
  return JointDistribution(std::move(variables), std::move(pmf));
}

JointDistribution select_variables(const JointDistribution& joint, std::span<const std::size_t> order) {
  if (order.empty()) throw InputError("select_variables needs at least one variable");
  std::vector<Alphabet> variables;
  std::set<std::string> names;
  std::vector<std::size_t> shape;
  for (std::size_t v : order) {
    if (v >= joint.num_variables()) throw InputError("variable index out of range");
    const Alphabet& a = joint.variable(v);
    std::string name = a.name();
    while (!names.insert(name).second) name += '\'';
    variables.emplace_back(name, a.labels());
    shape.push_back(a.size());
  }
  RationalVector pmf(product(shape), Rational(0));
  std::vector<std::size_t> target(order.size());
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const auto& p = joint.pmf()[flat];
    if (sgn(p) == 0) continue;
    const auto o = joint.outcome(flat);
    std::size_t out = 0;
    for (std::size_t k = 0; k < order.size(); ++k) out = out * shape[k] + o[order[k]];
    pmf[out] += p;
  }
  return JointDistribution(std::move(variables), std::move(pmf));
}

}  // namespace pidkit
