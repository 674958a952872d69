#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace pidkit::testing {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

double naive_channel_mi(const std::vector<double>& prior, const std::vector<std::vector<double>>& rows) {
  double total = 0.0;
  for (const auto& t : rows) {
    double pq = 0.0;
    for (std::size_t y = 0; y < prior.size(); ++y) pq += prior[y] * t[y];
    for (std::size_t y = 0; y < prior.size(); ++y) {
      if (prior[y] * t[y] > 0) total += prior[y] * t[y] * std::log2(t[y] / pq);
    }
  }
  return total;
}

JointDistribution append_tuple(const JointDistribution& joint, const std::vector<std::size_t>& vars) {
  std::vector<std::string> labels;
  std::vector<std::size_t> radix;
  std::size_t count = 1;
  for (std::size_t v : vars) count *= joint.variable(v).size();
  for (std::size_t code = 0; code < count; ++code) {
    std::string label;
    std::size_t rest = code;
    for (std::size_t k = vars.size(); k-- > 0;) {
      const auto& a = joint.variable(vars[k]);
      label = a.label(rest % a.size()) + (label.empty() ? "" : "," + label);
      rest /= a.size();
    }
    labels.push_back(label);
  }
  std::string name;
  for (std::size_t v : vars) name += joint.variable(v).name();
  auto variables = joint.variables();
  variables.emplace_back(name, labels);
  RationalVector pmf(joint.size() * count, Rational(0));
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const auto o = joint.outcome(flat);
    std::size_t code = 0;
    for (std::size_t v : vars) code = code * joint.variable(v).size() + o[v];
    pmf[flat * count + code] = joint.pmf()[flat];
  }
  return JointDistribution(std::move(variables), std::move(pmf));
}

JointDistribution tuple_target(const JointDistribution& pair) {
  const auto with = append_tuple(pair, {0, 1});
  const std::vector<std::size_t> order{2, 0, 1};
  return canonicalize(select_variables(with, order)).joint;
}

JointDistribution block_pair_joint(Rng& rng, std::size_t n1, std::size_t n2) {
  std::uniform_int_distribution<std::size_t> blocks_dist(1, std::min(n1, n2));
  const std::size_t blocks = blocks_dist(rng);
  std::vector<std::size_t> b1(n1), b2(n2);
  // Every block gets at least one outcome on each side.
  for (std::size_t k = 0; k < n1; ++k) b1[k] = k < blocks ? k : std::uniform_int_distribution<std::size_t>(0, blocks - 1)(rng);
  for (std::size_t k = 0; k < n2; ++k) b2[k] = k < blocks ? k : std::uniform_int_distribution<std::size_t>(0, blocks - 1)(rng);
  std::shuffle(b1.begin(), b1.end(), rng);
  std::shuffle(b2.begin(), b2.end(), rng);
  std::uniform_int_distribution<int> w(0, 6);
  while (true) {
    RationalVector pmf(n1 * n2, Rational(0));
    Rational total = 0;
    for (std::size_t a = 0; a < n1; ++a) {
      for (std::size_t b = 0; b < n2; ++b) {
        if (b1[a] == b2[b]) pmf[a * n2 + b] = w(rng);
        total += pmf[a * n2 + b];
      }
    }
    if (sgn(total) == 0) continue;
    for (auto& p : pmf) p /= total;
    JointDistribution joint({Alphabet::range("X1", n1), Alphabet::range("X2", n2)}, std::move(pmf));
    if (is_canonical(joint)) return joint;
  }
}

namespace {

/// Random stochastic 3x2 matrix a[q][x]; sometimes sharpened towards
/// deterministic columns.
std::vector<std::vector<double>> random_labels(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double power = u(rng) < 0.4 ? 6.0 : 1.0;
  std::vector<std::vector<double>> a(3, std::vector<double>(2));
  for (std::size_t x = 0; x < 2; ++x) {
    double sum = 0.0;
    for (std::size_t q = 0; q < 3; ++q) sum += a[q][x] = std::pow(u(rng), power);
    for (std::size_t q = 0; q < 3; ++q) a[q][x] /= sum;
  }
  return a;
}

}  // namespace

double brute_force_redundancy(const JointDistribution& joint, std::size_t samples, Rng& rng) {
  if (joint.shape() != std::vector<std::size_t>{2, 2, 2}) {
    throw std::invalid_argument("brute force search needs an all-binary bivariate joint");
  }
  std::vector<double> prior(2);
  for (std::size_t y = 0; y < 2; ++y) prior[y] = to_double(marginal_pmf(joint, 0)[y]);
  double p[2][2][2];  // p(x_i | y) as [i][y][x]
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t y = 0; y < 2; ++y) {
      for (std::size_t x = 0; x < 2; ++x) {
        double m = 0.0;
        for (std::size_t other = 0; other < 2; ++other) {
          const std::size_t o[3] = {y, i == 0 ? x : other, i == 0 ? other : x};
          m += to_double(joint.at(o));
        }
        p[i][y][x] = m / prior[y];
      }
    }
  }
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t from = s % 2, to = 1 - from;
    const auto a = random_labels(rng);
    // Solve P_to b_q = P_from a_q for the other source's label column.
    const double det = p[to][0][0] * p[to][1][1] - p[to][0][1] * p[to][1][0];
    if (std::abs(det) < 1e-12) continue;
    std::vector<std::vector<double>> rows;
    bool feasible = true;
    for (std::size_t q = 0; q < 3 && feasible; ++q) {
      const double t0 = p[from][0][0] * a[q][0] + p[from][0][1] * a[q][1];
      const double t1 = p[from][1][0] * a[q][0] + p[from][1][1] * a[q][1];
      const double b0 = (p[to][1][1] * t0 - p[to][0][1] * t1) / det;
      const double b1 = (p[to][0][0] * t1 - p[to][1][0] * t0) / det;
      feasible = b0 >= -1e-15 && b1 >= -1e-15;
      rows.push_back({t0, t1});
    }
    if (feasible) best = std::max(best, naive_channel_mi(prior, rows));
  }
  return best;
}

}  // namespace pidkit::testing
