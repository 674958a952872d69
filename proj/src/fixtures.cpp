#include "pidkit/fixtures.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "pidkit/errors.hpp"

namespace pidkit {
namespace {

using Outcome = std::vector<std::string>;  // target label first, then sources

/// Accumulates weighted outcomes; alphabets list labels in order of first
/// appearance.
class FixtureBuilder {
 public:
  explicit FixtureBuilder(std::vector<std::string> names) : names_(std::move(names)) {
    labels_.resize(names_.size());
  }

  void add(const Outcome& outcome, const Rational& p) {
    for (std::size_t k = 0; k < outcome.size(); ++k) {
      auto& l = labels_[k];
      if (std::find(l.begin(), l.end(), outcome[k]) == l.end()) l.push_back(outcome[k]);
    }
    auto [it, inserted] = mass_.try_emplace(outcome, p);
    if (inserted) {
      order_.push_back(outcome);
    } else {
      it->second += p;
    }
  }

  DistributionFile build() const {
    DistributionFile file;
    for (std::size_t k = 0; k < names_.size(); ++k) file.variables.emplace_back(names_[k], labels_[k]);
    for (const auto& o : order_) file.pmf.push_back({o, to_string(mass_.at(o))});
    return file;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> labels_;
  std::map<Outcome, Rational> mass_;
  std::vector<Outcome> order_;
};

std::string bit(int b) { return b ? "1" : "0"; }

/// Enumerates `count` independent uniform bits in lexicographic order.
void for_each_bits(int count, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> bits(static_cast<std::size_t>(count));
  for (int mask = 0; mask < (1 << count); ++mask) {
    for (int k = 0; k < count; ++k) bits[static_cast<std::size_t>(k)] = (mask >> (count - 1 - k)) & 1;
    f(bits);
  }
}

DistributionFile gate(int num_sources, const std::function<std::string(const std::vector<int>&)>& f) {
  std::vector<std::string> names{"Y"};
  for (int i = 1; i <= num_sources; ++i) names.push_back("X" + std::to_string(i));
  FixtureBuilder b(names);
  const Rational p(1, 1 << num_sources);
  for_each_bits(num_sources, [&](const std::vector<int>& x) {
    Outcome o{f(x)};
    for (int v : x) o.push_back(bit(v));
    b.add(o, p);
  });
  return b.build();
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"and",  "or",   "xor",     "sum",   "copy",
                                              "unq",  "and3", "sum3",    "overlap", "lemma1"};
  return names;
}

DistributionFile generate_fixture(std::string_view name, const Rational& flip) {
  if (name == "and") return gate(2, [](const auto& x) { return bit(x[0] & x[1]); });
  if (name == "or") return gate(2, [](const auto& x) { return bit(x[0] | x[1]); });
  if (name == "xor") return gate(2, [](const auto& x) { return bit(x[0] ^ x[1]); });
  if (name == "sum") return gate(2, [](const auto& x) { return std::to_string(x[0] + x[1]); });
  if (name == "copy") return gate(2, [](const auto& x) { return bit(x[0]) + bit(x[1]); });
  if (name == "and3") return gate(3, [](const auto& x) { return bit(x[0] & x[1] & x[2]); });
  if (name == "sum3") {
    return gate(3, [](const auto& x) { return std::to_string(x[0] + x[1] + x[2]); });
  }
  if (name == "unq") {
    if (sgn(flip) < 0 || flip > 1) throw InputError("unq: flip probability must lie in [0, 1]");
    FixtureBuilder b({"Y", "X1", "X2"});
    for (int x1 = 0; x1 < 2; ++x1) {
      for (int x2 = 0; x2 < 2; ++x2) {
        const Rational p = (x1 == x2 ? Rational(1 - flip) : flip) / 2;
        if (sgn(p) != 0) b.add({bit(x1), bit(x1), bit(x2)}, p);
      }
    }
    return b.build();
  }
  if (name == "overlap") {
    FixtureBuilder b({"Y", "X1", "X2", "X3"});
    for_each_bits(4, [&](const std::vector<int>& v) {
      const std::string x1 = bit(v[0]) + bit(v[1]);
      const std::string x2 = bit(v[0]) + bit(v[2]);
      const std::string x3 = bit(v[0]) + bit(v[3]);
      b.add({x1 + "," + x2 + "," + x3, x1, x2, x3}, Rational(1, 16));
    });
    return b.build();
  }
  if (name == "lemma1") {
    FixtureBuilder b({"Y", "X1", "X2", "X3"});
    for_each_bits(2, [&](const std::vector<int>& v) {
      const std::string x3 = bit(v[0] ^ v[1]);
      b.add({bit(v[0]) + bit(v[1]) + x3, bit(v[0]), bit(v[1]), x3}, Rational(1, 4));
    });
    return b.build();
  }
  throw InputError("unknown fixture '" + std::string(name) + "'");
}

JointDistribution fixture_joint(std::string_view name, const Rational& flip) {
  return canonicalize(to_joint(generate_fixture(name, flip))).joint;
}

}  // namespace pidkit
