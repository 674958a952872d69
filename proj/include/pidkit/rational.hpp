#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace pidkit {

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// num/den in lowest terms. mpq_class's two-argument constructor does not
/// canonicalise, and GMP arithmetic assumes canonical operands.
inline Rational make_rational(const mpz_class& num, const mpz_class& den) {
  Rational out(num, den);
  out.canonicalize();
  return out;
}

/// Parses "3", "-2/6", "0.25", "1e-3" or "2.5E+1" exactly. Throws InputError.
Rational parse_rational(std::string_view text);

/// Lowest-terms "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

/// Exact binary value of a finite double.
Rational rational_from_double(double value);

/// Closest rational with denominator at most max_denominator
/// (continued-fraction best approximation).
Rational limit_denominator(const Rational& value, const mpz_class& max_denominator);

inline double to_double(const Rational& value) { return value.get_d(); }

std::vector<double> to_doubles(const RationalVector& values);

}  // namespace pidkit
