#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sublevel {

using Rational = mpq_class;
using Integer = mpz_class;
using RationalPoint = std::vector<Rational>;

/// Parses "3", "-0.25", "1/3", "2.5e-3" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form ("p" when q == 1).
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Every finite double is a dyadic rational; the conversion is exact.
Rational exact_rational(double x);

Rational pow(const Rational& base, unsigned exponent);
Integer factorial(unsigned k);
Integer binomial(unsigned n, unsigned k);

/// 17 significant digits, round-trips through strtod.
std::string format_double(double x);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

RationalPoint to_rational_point(const std::vector<double>& x);
std::vector<double> to_double_point(const RationalPoint& x);

}  // namespace sublevel
