#include "random_models.hpp"

#include <algorithm>
#include <string>

namespace pidkit::testing {

RationalVector random_pmf(Rng& rng, std::size_t k, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  std::vector<int> w(k);
  int total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : w) total += (x = std::max(0, dist(rng)));
  }
  RationalVector out(k);
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = make_rational(w[i], total);
  }
  return out;
}

Channel random_channel(Rng& rng, const Alphabet& input, const Alphabet& output, bool sparse) {
  RationalVector m(input.size() * output.size());
  for (std::size_t in = 0; in < input.size(); ++in) {
    const auto col = random_pmf(rng, output.size(), sparse ? 0 : 1, 6);
    for (std::size_t out = 0; out < output.size(); ++out) m[out * input.size() + in] = col[out];
  }
  return Channel(input, output, std::move(m));
}

std::vector<Alphabet> standard_alphabets(const std::vector<std::size_t>& shape) {
  std::vector<Alphabet> vars;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    vars.push_back(Alphabet::range(k == 0 ? "Y" : "X" + std::to_string(k), shape[k]));
  }
  return vars;
}

JointDistribution random_joint(Rng& rng, const std::vector<std::size_t>& shape, bool sparse) {
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  while (true) {
    JointDistribution joint(standard_alphabets(shape), random_pmf(rng, total, sparse ? -3 : 1, 6));
    if (is_canonical(joint)) return joint;
  }
}

JointDistribution random_pid_joint(Rng& rng, std::size_t num_sources, std::size_t max_alphabet) {
  std::uniform_int_distribution<std::size_t> size_dist(2, max_alphabet);
  std::uniform_int_distribution<int> kind_dist(0, 2);
  while (true) {
    const int kind = kind_dist(rng);
    std::vector<std::size_t> shape{size_dist(rng)};
    for (std::size_t i = 0; i < num_sources; ++i) shape.push_back(size_dist(rng));
    auto vars = standard_alphabets(shape);
    if (kind == 0) {
      std::size_t total = 1;
      for (auto s : shape) total *= s;
      JointDistribution joint(vars, random_pmf(rng, total, -4, 6));
      if (is_canonical(joint)) return joint;
      continue;
    }
    // Markov structure: each source is either a channel of Y or a channel
    // of an earlier source, which makes garbling relations common.
    JointDistribution joint(std::vector<Alphabet>{vars[0]}, random_pmf(rng, shape[0], 1, 5));
    for (std::size_t i = 1; i <= num_sources; ++i) {
      std::uniform_int_distribution<std::size_t> parent_dist(0, i - 1);
      const std::size_t parent = kind == 1 ? parent_dist(rng) : 0;
      Channel ch = random_channel(rng, joint.variable(parent), vars[i], true);
      joint = append_source(joint, parent, ch);
    }
    auto canon = canonicalize(joint).joint;
    bool ok = canon.num_variables() == num_sources + 1;
    for (std::size_t v = 0; ok && v < canon.num_variables(); ++v) ok = canon.variable(v).size() >= 2;
    if (ok) return canon;
  }
}

Channel bsc(const Rational& eps, const std::string& input, const std::string& output) {
  const Rational keep = 1 - eps;
  return Channel(Alphabet::range(input, 2), Alphabet::range(output, 2), {keep, eps, eps, keep});
}

}  // namespace pidkit::testing

namespace pidkit::testing {

HPolytope random_hsystem(Rng& rng, std::size_t dim, std::size_t extra_rows) {
  std::uniform_int_distribution<int> box(1, 3), coef(-3, 3), rhs(-2, 5), coin(0, 3);
  HPolytope poly(dim);
  for (std::size_t i = 0; i < dim; ++i) poly.add_bounds(i, Rational(-box(rng)), Rational(box(rng)));
  for (std::size_t r = 0; r < extra_rows; ++r) {
    RationalVector row(dim);
    for (auto& v : row) v = coef(rng);
    poly.add_inequality(std::move(row), Rational(rhs(rng)));
  }
  if (dim > 1 && coin(rng) == 0) {
    RationalVector row(dim);
    for (auto& v : row) v = coef(rng);
    poly.add_equality(std::move(row), make_rational(coef(rng), 2));
  }
  return poly;
}

RationalVector random_objective(Rng& rng, std::size_t dim) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  RationalVector out(dim);
  for (auto& v : out) {
    v = make_rational(num(rng), den(rng));
  }
  return out;
}

}  // namespace pidkit::testing
