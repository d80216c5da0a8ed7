#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sublevel/interval.hpp"
#include "sublevel/univariate.hpp"

namespace sublevel {

/// A stated hypothesis of a bound does not hold for the given input.
class HypothesisViolation : public std::runtime_error {
 public:
  HypothesisViolation(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

struct RootEnclosure {
  Interval enclosure;
  unsigned multiplicity = 1;

  double approx() const { return to_double(enclosure.midpoint()); }
};

/// Sorted, pairwise-disjoint enclosures, one distinct real root each.
struct RootList {
  std::vector<RootEnclosure> roots;

  std::size_t size() const { return roots.size(); }
  unsigned total_multiplicity() const;
};

/// Number of sign variations in the coefficient sequence (zeros skipped).
unsigned sign_variations(const std::vector<Rational>& coeffs);

/// Descartes bound on the number of roots of p in the open interval (a, b),
/// counted with multiplicity; exact when the result is 0 or 1.
unsigned descartes_bound(const UPoly& p, const Rational& a, const Rational& b);

/// Isolates every real root of p in the closed interval I, refining each
/// enclosure to width <= tol. Multiplicities come from a square-free
/// decomposition. Throws std::invalid_argument for the zero polynomial or tol <= 0.
RootList isolate_real_roots(const UPoly& p, const Interval& I, const Rational& tol);

/// True when p >= 0 everywhere on I (exact).
bool nonnegative_on(const UPoly& p, const Interval& I);
/// True when |p| >= bound on all of I (exact).
bool abs_bounded_below_on(const UPoly& p, const Interval& I, const Rational& bound);
/// True when |p| <= bound on all of I (exact).
bool abs_bounded_above_on(const UPoly& p, const Interval& I, const Rational& bound);
/// sup_I |p|, evaluated at the endpoints and at critical points refined to tol.
double sup_abs_on(const UPoly& p, const Interval& I, const Rational& tol);

/// Lebesgue measure of {s in I : |P(s)| <= t}. Breakpoints are the roots of
/// P - t and P + t; the absolute error is at most (number of breakpoints) * tol.
double sublevel_measure_1d(const UPoly& P, const Interval& I, const Rational& t, const Rational& tol);

/// measure(t) / (t / lambda)^(1/p) for each t, after certifying |P^(p)| >= lambda on I.
/// Throws HypothesisViolation("derivative-bound") otherwise.
std::vector<double> derivative_bound_ratio_sweep(const UPoly& P, const Interval& I, const Rational& lambda, unsigned p,
                                       const std::vector<Rational>& t_grid, const Rational& tol);

struct ConstantCaseResult {
  double measure = 0;
  double bound = 0;  // |I| * (t / lambda)^(1/d)
  bool below_lambda = false;  // t < lambda, where the measure must vanish
  bool bound_holds = false;
  double gap = 0;  // |a0| - sup_I |P - a0|
};

/// Sub-level measure when the constant term dominates:
/// |a0| - sup_I |P - a0| >= lambda. Throws HypothesisViolation("constant-dominance").
ConstantCaseResult constant_dominance_case(const UPoly& P, const Interval& I, const Rational& t, const Rational& lambda,
                                        const Rational& tol);

}  // namespace sublevel
