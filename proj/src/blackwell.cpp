#include "pidkit/blackwell.hpp"

#include <random>

#include "pidkit/errors.hpp"
#include "pidkit/geometry.hpp"

namespace pidkit {
namespace {

void require_shared_input(const Channel& a, const Channel& b) {
  if (a.input().labels() != b.input().labels()) {
    throw InputError("channels '" + a.output().name() + "' and '" + b.output().name() +
                     "' do not share an input alphabet");
  }
}

}  // namespace

GarblingResult is_garbling(const Channel& chA, const Channel& chB) {
  require_shared_input(chA, chB);
  const std::size_t na = chA.num_outputs(), nb = chB.num_outputs(), nz = chA.num_inputs();
  // Variable W(a|b) lives at a * nb + b.
  HPolytope poly(na * nb);
  for (std::size_t k = 0; k < na * nb; ++k) poly.add_nonnegative(k);
  for (std::size_t b = 0; b < nb; ++b) {
    RationalVector row(na * nb, Rational(0));
    for (std::size_t a = 0; a < na; ++a) row[a * nb + b] = 1;
    poly.add_equality(std::move(row), 1);
  }
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t z = 0; z < nz; ++z) {
      RationalVector row(na * nb, Rational(0));
      for (std::size_t b = 0; b < nb; ++b) row[a * nb + b] = chB(b, z);
      poly.add_equality(std::move(row), chA(a, z));
    }
  }
  const auto sol = lp_solve({std::move(poly), RationalVector(na * nb, Rational(0)), Sense::minimize});
  if (!sol.feasible()) return {false, std::nullopt};
  Channel witness(chB.output(), chA.output(), sol.point);
  if (compose(witness, chB).matrix() != chA.matrix()) {
    throw InvariantViolation("garbling witness does not reproduce the channel");
  }
  return {true, std::move(witness)};
}

DecisionProblem guessing_problem(const RationalVector& prior) {
  const std::size_t k = prior.size();
  DecisionProblem d{prior, {}, RationalVector(k * k, Rational(0))};
  for (std::size_t a = 0; a < k; ++a) {
    d.actions.push_back("guess" + std::to_string(a));
    d.utility[a * k + a] = 1;
  }
  return d;
}

Rational best_response_utility(const Channel& channel, const DecisionProblem& problem) {
  const std::size_t nz = problem.prior.size();
  if (channel.num_inputs() != nz) throw InputError("decision problem prior does not match channel input");
  if (problem.actions.empty() || problem.utility.size() != problem.actions.size() * nz) {
    throw InputError("decision problem utility table is incomplete");
  }
  Rational total = 0;
  for (std::size_t c = 0; c < channel.num_outputs(); ++c) {
    Rational best;
    for (std::size_t a = 0; a < problem.actions.size(); ++a) {
      Rational value = 0;
      for (std::size_t z = 0; z < nz; ++z) {
        if (sgn(channel(c, z)) != 0) value += problem.prior[z] * channel(c, z) * problem.u(a, z);
      }
      if (a == 0 || value > best) best = std::move(value);
    }
    total += best;
  }
  return total;
}

DecisionProblem random_decision_problem(std::size_t num_states, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> action_count(2, num_states + 1);
  std::uniform_int_distribution<int> weight(1, 9), den(1, 64);
  DecisionProblem d;
  int total = 0;
  std::vector<int> w(num_states);
  for (auto& x : w) total += (x = weight(rng));
  for (int x : w) d.prior.push_back(make_rational(x, total));
  const std::size_t na = action_count(rng);
  for (std::size_t a = 0; a < na; ++a) d.actions.push_back("a" + std::to_string(a));
  for (std::size_t k = 0; k < na * num_states; ++k) {
    const int q = den(rng);
    std::uniform_int_distribution<int> num(0, q);
    d.utility.push_back(make_rational(num(rng), q));
  }
  return d;
}

BlackwellReport blackwell_consistency_check(const Channel& chA, const Channel& chB,
                                            std::size_t num_problems, std::uint64_t seed) {
  require_shared_input(chA, chB);
  BlackwellReport report;
  report.garbling = is_garbling(chA, chB).holds;
  std::mt19937_64 seeds(seed);
  for (std::size_t k = 0; k < num_problems; ++k) {
    DecisionProblem d = random_decision_problem(chA.num_inputs(), seeds());
    ++report.problems_checked;
    if (best_response_utility(chA, d) > best_response_utility(chB, d)) {
      if (report.garbling) ++report.violations;
      if (!report.separating) {
        report.separating = std::move(d);
        report.separating_index = k;
      }
    }
  }
  return report;
}

}  // namespace pidkit
