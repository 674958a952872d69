#include "pidkit/rational.hpp"

#include <cctype>
#include <cmath>

#include "pidkit/errors.hpp"

namespace pidkit {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class pow10(unsigned long exponent) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, exponent);
  return out;
}

Rational parse_decimal(std::string_view text, std::string_view original) {
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = text.substr(e + 1);
    text = text.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) {
      throw InputError("invalid number '" + std::string(original) + "'");
    }
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }
  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw InputError("invalid number '" + std::string(original) + "'");
  }
  std::string digits = std::string(int_part) + std::string(frac_part);
  mpz_class numerator(digits.empty() ? std::string("0") : digits, 10);
  long scale = exponent - static_cast<long>(frac_part.size());
  Rational value;
  if (scale >= 0) {
    value = Rational(numerator * pow10(static_cast<unsigned long>(scale)));
  } else {
    value = Rational(numerator, pow10(static_cast<unsigned long>(-scale)));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view original = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InputError("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) {
      throw InputError("invalid fraction '" + std::string(original) + "'");
    }
    mpz_class d(std::string(den), 10);
    if (d == 0) throw InputError("zero denominator in '" + std::string(original) + "'");
    Rational value(mpz_class(std::string(num), 10), d);
    value.canonicalize();
    return negative ? Rational(-value) : value;
  }
  return parse_decimal(text, original);
}

std::string to_string(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_str();
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw InputError("cannot convert non-finite value to a rational");
  return Rational(value);
}

Rational limit_denominator(const Rational& value, const mpz_class& max_denominator) {
  if (value.get_den() <= max_denominator) return value;
  // Stern-Brocot / continued fraction walk, as in Python's Fraction.limit_denominator.
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  mpz_class n = value.get_num(), d = value.get_den();
  while (true) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    mpz_class q2 = q0 + a * q1;
    if (q2 > max_denominator) break;
    mpz_class p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    mpz_class r = n - a * d;
    n = d;
    d = r;
  }
  mpz_class k = (max_denominator - q0) / q1;
  Rational bound1(p0 + k * p1, q0 + k * q1);
  Rational bound2(p1, q1);
  bound1.canonicalize();
  bound2.canonicalize();
  return abs(bound2 - value) <= abs(bound1 - value) ? bound2 : bound1;
}

std::vector<double> to_doubles(const RationalVector& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.get_d());
  return out;
}

}  // namespace pidkit
