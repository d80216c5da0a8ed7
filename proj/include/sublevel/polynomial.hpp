#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublevel/rational.hpp"

namespace sublevel {

using Exponent = std::vector<unsigned>;

unsigned total_degree(const Exponent& e);

/// Graded lexicographic order: lower total degree first, ties broken
/// lexicographically with x1 > x2 > ... (so x^2 precedes x*y precedes y^2
/// when read from the largest end).
struct GrlexLess {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

/// Total degree with a distinguished value for the zero polynomial. The
/// sentinel never converts to an ordinary integer silently.
class Degree {
 public:
  static Degree minus_infinity() { return Degree(); }
  static Degree of(unsigned d) { return Degree(d); }

  bool is_finite() const { return value_.has_value(); }
  /// Throws std::logic_error for the zero-polynomial sentinel.
  unsigned value() const;

  friend bool operator==(const Degree&, const Degree&) = default;
  friend std::strong_ordering operator<=>(const Degree& a, const Degree& b) {
    if (!a.is_finite() || !b.is_finite()) return a.is_finite() <=> b.is_finite();
    return *a.value_ <=> *b.value_;
  }

 private:
  Degree() = default;
  explicit Degree(unsigned d) : value_(d) {}
  std::optional<unsigned> value_;
};

/// Order of vanishing at a point; infinite only for the zero polynomial.
struct VanishingOrder {
  bool infinite = false;
  unsigned value = 0;

  static VanishingOrder infinity() { return {true, 0}; }
  static VanishingOrder finite(unsigned v) { return {false, v}; }
  friend bool operator==(const VanishingOrder&, const VanishingOrder&) = default;
};

/// Exact sparse multivariate polynomial over the rationals. Terms are kept in
/// graded lexicographic order; no stored coefficient is zero.
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Rational, GrlexLess>;

  explicit Polynomial(std::size_t n_vars);
  Polynomial(std::size_t n_vars, TermMap terms);

  static Polynomial constant(std::size_t n_vars, const Rational& c);
  static Polynomial variable(std::size_t n_vars, std::size_t index);

  std::size_t n_vars() const { return n_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Degree degree() const;
  /// Lowest total degree present; minus-infinity sentinel for zero.
  Degree min_degree() const;
  bool is_homogeneous() const;
  unsigned max_exponent(std::size_t var) const;

  Rational coefficient(const Exponent& e) const;
  void add_term(const Exponent& e, const Rational& c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  Polynomial pow(unsigned k) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const Polynomial& other) const;

  std::size_t n_vars_;
  TermMap terms_;
};

/// Exact evaluation at a rational point.
Rational evaluate(const Polynomial& p, std::span<const Rational> x);
/// Floating evaluation; see CompiledPolynomial for hot loops.
double evaluate(const Polynomial& p, std::span<const double> x);

/// Floating-point evaluator for sampling loops. Terms are grouped by their
/// exponents in all but the last variable and each group is evaluated by
/// Horner's rule in the last variable.
class CompiledPolynomial {
 public:
  explicit CompiledPolynomial(const Polynomial& p);

  std::size_t n_vars() const { return n_vars_; }
  double operator()(const double* x) const;
  double operator()(std::span<const double> x) const { return (*this)(x.data()); }

 private:
  struct Group {
    Exponent prefix;
    std::vector<double> horner;  // dense coefficients in the last variable
  };
  std::size_t n_vars_;
  std::vector<unsigned> max_prefix_exponent_;
  std::vector<Group> groups_;
};

Polynomial derivative(const Polynomial& p, std::size_t var);
std::vector<Polynomial> gradient(const Polynomial& p);
/// <grad p(x), x> = sum_i x_i dp/dx_i, computed termwise as deg(term)*term.
Polynomial radial_derivative(const Polynomial& p);
/// ||grad p||^2 as an exact polynomial.
Polynomial gradient_norm_squared(const Polynomial& p);
std::map<unsigned, Polynomial> homogeneous_components(const Polynomial& p);
Polynomial top_homogeneous_component(const Polynomial& p);
/// Same polynomial viewed in n >= p.n_vars() variables.
Polynomial extend_variables(const Polynomial& p, std::size_t n);

/// p(a + y) as a polynomial in y.
Polynomial taylor_shift(const Polynomial& p, std::span<const Rational> a);
VanishingOrder order_at(const Polynomial& p, std::span<const Rational> a);

/// Substitutes x_i -> sum_j m[i][j] y_j + c[i]; used by the line and
/// coordinate-change helpers.
Polynomial affine_substitute(const Polynomial& p, const std::vector<RationalPoint>& linear,
                             const RationalPoint& offset, std::size_t new_vars);

/// Default variable names: x, y, z for up to three variables, x1..xn beyond.
std::vector<std::string> default_var_names(std::size_t n_vars);

/// Canonical printer: terms in descending graded lexicographic order with
/// explicit '*' and '^'.
std::string to_string(const Polynomial& p, const std::vector<std::string>& var_names = {});

}  // namespace sublevel
