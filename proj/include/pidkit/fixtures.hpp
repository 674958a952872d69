#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pidkit/io.hpp"
#include "pidkit/rational.hpp"

namespace pidkit {

/// Names accepted by generate_fixture.
const std::vector<std::string>& fixture_names();

/// Logic-gate and overlap examples over independent uniform bits:
///   and, or, xor, sum, copy   two sources, Y = f(X1, X2)
///   unq                       Y = X1, X2 = X1 flipped with probability `flip`
///   and3, sum3                three sources
///   overlap                   X1=(A,B), X2=(A,C), X3=(A,D), Y=(X1,X2,X3)
///   lemma1                    X3 = X1 xor X2, Y=(X1,X2,X3)
/// Throws InputError for an unknown name.
DistributionFile generate_fixture(std::string_view name, const Rational& flip = Rational(1, 10));

JointDistribution fixture_joint(std::string_view name, const Rational& flip = Rational(1, 10));

}  // namespace pidkit
