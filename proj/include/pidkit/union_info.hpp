#pragma once

#include <cstddef>

#include "pidkit/prob.hpp"

namespace pidkit {

struct UnionOptions {
  /// Stop once the Frank-Wolfe gap is at most this many bits.
  double tol = 1e-7;
  std::size_t max_iter = 100'000;
};

struct UnionResult {
  double value = 0.0;
  /// Minimising coupling s over (Y, X_1..X_n); its (Y, X_i) marginals equal
  /// those of the input exactly.
  JointDistribution optimal_coupling;
  /// Certified gap: value minus a lower bound on the optimum.
  double fw_gap = 0.0;
  std::size_t iterations = 0;
};

/// Union information: min I_s(Y; X_1..X_n) over couplings s with the same
/// pairwise (Y, X_i) marginals. Throws NonConvergenceError when the gap is
/// still above tol after max_iter iterations (Frank-Wolfe steps plus Newton
/// steps of the barrier fallback).
UnionResult union_star(const JointDistribution& joint, const UnionOptions& options = {});

/// I(Y; X_1..X_n) minus union information.
double synergy(const JointDistribution& joint, const UnionOptions& options = {});

/// Union information minus I(Y; X_i), source i zero based.
double excluded_information(const JointDistribution& joint, std::size_t source,
                            const UnionOptions& options = {});

/// I(Y;X_1) + I(Y;X_2) minus union information. Two sources only.
double broja_redundancy(const JointDistribution& joint, const UnionOptions& options = {});

}  // namespace pidkit
