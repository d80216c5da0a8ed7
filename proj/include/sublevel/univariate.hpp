#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sublevel/polynomial.hpp"

namespace sublevel {

/// Dense univariate polynomial with exact coefficients; coeffs()[k] multiplies s^k.
/// Trailing zeros are permitted in storage and ignored by degree().
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);
  UPoly(std::initializer_list<Rational> coeffs) : UPoly(std::vector<Rational>(coeffs)) {}

  static UPoly constant(const Rational& c) { return UPoly({c}); }
  /// s^k
  static UPoly monomial(unsigned k, const Rational& c = Rational(1));

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Degree degree() const;
  bool is_zero() const { return !degree().is_finite(); }
  bool is_constant() const;
  Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }
  Rational leading() const;

  Rational operator()(const Rational& s) const;
  double operator()(double s) const;

  UPoly derivative(unsigned order = 1) const;
  /// p(a + b s)
  UPoly compose_affine(const Rational& a, const Rational& b) const;
  UPoly trimmed() const;
  UPoly monic() const;

  UPoly& operator+=(const UPoly& o);
  UPoly& operator-=(const UPoly& o);
  UPoly& operator*=(const Rational& c);
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(UPoly a, const Rational& c) { return a *= c; }
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  UPoly operator-() const;

  /// Equality ignores trailing zeros.
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.trimmed().coeffs_ == b.trimmed().coeffs_; }

 private:
  std::vector<Rational> coeffs_;
};

/// Euclidean division over Q: returns (quotient, remainder).
std::pair<UPoly, UPoly> divmod(const UPoly& num, const UPoly& den);
/// Monic greatest common divisor (zero if both inputs are zero).
UPoly gcd(const UPoly& a, const UPoly& b);
/// Yun's square-free decomposition: factors[i] holds the product of the
/// irreducible factors of multiplicity i + 1 (monic; constant factors are 1).
std::vector<UPoly> square_free_decomposition(const UPoly& p);

/// Coefficients of s -> p(base + s * direction) in the line parameter s.
using UnivariateSlice = UPoly;

/// Exact restriction of p to the line base + s * direction. The slice has
/// deg(p) + 1 stored coefficients. Throws for a zero direction.
UnivariateSlice line_restriction(const Polynomial& p, std::span<const Rational> base,
                                 std::span<const Rational> direction);

}  // namespace sublevel
