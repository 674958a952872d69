#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pidkit/prob.hpp"

namespace pidkit {

/// Outcome of an exact garbling test. `witness` is present iff `holds`,
/// and then compose(*witness, chB) == chA exactly.
struct GarblingResult {
  bool holds = false;
  std::optional<Channel> witness;
};

/// Does some channel k_{A|B} satisfy chA = k_{A|B} o chB? Answered by an
/// exact rational LP, so there is no tolerance. Both channels must share
/// the input alphabet (compared by labels).
GarblingResult is_garbling(const Channel& chA, const Channel& chB);

/// Prior over states, a finite action set and utilities u(a, z).
struct DecisionProblem {
  RationalVector prior;
  std::vector<std::string> actions;
  RationalVector utility;  // action-major: utility[a * |Z| + z]

  const Rational& u(std::size_t a, std::size_t z) const { return utility[a * prior.size() + z]; }
};

/// Guess-the-state problem: u(a, z) = 1 iff a == z.
DecisionProblem guessing_problem(const RationalVector& prior);

/// max over decision rules of expected utility when acting on the channel
/// output: sum_c max_a sum_z p(z) k(c|z) u(a,z).
Rational best_response_utility(const Channel& channel, const DecisionProblem& problem);

/// Random problem: 2..|Z|+1 actions, prior with small integer weights and
/// utilities with denominators at most 64.
DecisionProblem random_decision_problem(std::size_t num_states, std::uint64_t seed);

struct BlackwellReport {
  bool garbling = false;              // is_garbling(chA, chB).holds
  std::size_t problems_checked = 0;
  std::size_t violations = 0;         // problems with U*(chA) > U*(chB) while garbling holds
  std::optional<DecisionProblem> separating;  // first problem with U*(chA) > U*(chB)
  std::optional<std::size_t> separating_index;
};

/// Samples decision problems and compares best-response utilities. When
/// chA is a garbling of chB every problem must favour chB; otherwise the
/// first sampled problem favouring chA is reported (none may be found).
BlackwellReport blackwell_consistency_check(const Channel& chA, const Channel& chB,
                                            std::size_t num_problems, std::uint64_t seed);

}  // namespace pidkit
