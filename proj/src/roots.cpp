#include "sublevel/roots.hpp"

#include <algorithm>
#include <cmath>

namespace sublevel {

namespace {

int sign_of(const Rational& v) { return sgn(v); }

/// Bisects an isolating interval of a square-free polynomial until it is no
/// wider than tol and neither endpoint is a root. Returns a point interval
/// if a bisection midpoint hits the root exactly.
Interval refine(const UPoly& S, Rational a, Rational b, const Rational& tol) {
  for (;;) {
    int fa = sign_of(S(a));
    int fb = sign_of(S(b));
    if (b - a <= tol && fa != 0 && fb != 0) return Interval(a, b);
    Rational m = (a + b) / 2;
    int fm = sign_of(S(m));
    if (fm == 0) return Interval(m, m);
    bool left;
    if (fa != 0 && fa != fm)
      left = true;
    else if (fb != 0 && fb != fm)
      left = false;
    else
      left = descartes_bound(S, a, m) == 1;
    if (left)
      b = m;
    else
      a = m;
  }
}

}  // namespace

unsigned RootList::total_multiplicity() const {
  unsigned s = 0;
  for (const auto& r : roots) s += r.multiplicity;
  return s;
}

unsigned sign_variations(const std::vector<Rational>& coeffs) {
  unsigned v = 0;
  int last = 0;
  for (const auto& c : coeffs) {
    int s = sign_of(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

unsigned descartes_bound(const UPoly& p, const Rational& a, const Rational& b) {
  // Map (a, b) to (0, 1), then (0, 1) to (0, inf) via y = 1 / (1 + x).
  UPoly g = p.compose_affine(a, b - a).trimmed();
  std::vector<Rational> rev(g.coeffs().rbegin(), g.coeffs().rend());
  UPoly r = UPoly(std::move(rev)).compose_affine(Rational(1), Rational(1));
  return sign_variations(r.coeffs());
}

RootList isolate_real_roots(const UPoly& p, const Interval& I, const Rational& tol) {
  if (p.is_zero()) throw std::invalid_argument("isolate_real_roots: zero polynomial");
  if (tol <= 0) throw std::invalid_argument("isolate_real_roots: tolerance must be positive");
  RootList out;
  auto factors = square_free_decomposition(p);
  if (factors.empty()) return out;

  UPoly S = UPoly::constant(Rational(1));
  for (const auto& f : factors) S = S * f;

  std::vector<Interval> found;
  if (S(I.lo) == 0) found.emplace_back(I.lo, I.lo);
  if (!I.is_point() && S(I.hi) == 0) found.emplace_back(I.hi, I.hi);
  if (!I.is_point()) {
    std::vector<std::pair<Rational, Rational>> stack{{I.lo, I.hi}};
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      unsigned v = descartes_bound(S, a, b);
      if (v == 0) continue;
      if (v == 1) {
        found.push_back(refine(S, a, b, tol));
        continue;
      }
      Rational m = (a + b) / 2;
      if (S(m) == 0) found.emplace_back(m, m);
      stack.emplace_back(a, m);
      stack.emplace_back(m, b);
    }
  }
  std::sort(found.begin(), found.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });

  for (auto& enc : found) {
    unsigned mult = 0;
    for (std::size_t i = 0; i < factors.size() && mult == 0; ++i) {
      const auto& f = factors[i];
      if (f.is_constant()) continue;
      bool hit = enc.is_point() ? f(enc.lo) == 0 : sign_of(f(enc.lo)) * sign_of(f(enc.hi)) < 0;
      if (hit) mult = static_cast<unsigned>(i + 1);
    }
    if (mult == 0) throw std::logic_error("isolate_real_roots: root not attributed to any square-free factor");
    out.roots.push_back({enc, mult});
  }
  return out;
}

bool nonnegative_on(const UPoly& p, const Interval& I) {
  if (p.is_zero()) return true;
  if (I.is_point() || p.is_constant()) return p(I.lo) >= 0;
  auto roots = isolate_real_roots(p, I, I.width());
  std::vector<Rational> probes{I.lo, I.hi};
  Rational prev_end = I.lo;
  for (const auto& r : roots.roots) {
    const auto& e = r.enclosure;
    if (prev_end < e.lo) probes.push_back((prev_end + e.lo) / 2);
    if (!e.is_point()) {
      probes.push_back(e.lo);
      probes.push_back(e.hi);
    }
    prev_end = e.hi;
  }
  if (prev_end < I.hi) probes.push_back((prev_end + I.hi) / 2);
  return std::all_of(probes.begin(), probes.end(), [&](const Rational& x) { return p(x) >= 0; });
}

bool abs_bounded_below_on(const UPoly& p, const Interval& I, const Rational& bound) {
  UPoly c = UPoly::constant(bound);
  return nonnegative_on(p - c, I) || nonnegative_on(-p - c, I);
}

bool abs_bounded_above_on(const UPoly& p, const Interval& I, const Rational& bound) {
  UPoly c = UPoly::constant(bound);
  return nonnegative_on(c - p, I) && nonnegative_on(c + p, I);
}

double sup_abs_on(const UPoly& p, const Interval& I, const Rational& tol) {
  double best = std::max(std::fabs(to_double(p(I.lo))), std::fabs(to_double(p(I.hi))));
  UPoly dp = p.derivative();
  if (dp.is_zero() || I.is_point()) return best;
  for (const auto& r : isolate_real_roots(dp, I, tol).roots)
    best = std::max(best, std::fabs(to_double(p(r.enclosure.midpoint()))));
  return best;
}

double sublevel_measure_1d(const UPoly& P, const Interval& I, const Rational& t, const Rational& tol) {
  if (t < 0) throw std::invalid_argument("sublevel_measure_1d: t must be non-negative");
  if (P.is_constant()) return abs(P.coeff(0)) <= t ? I.length() : 0.0;
  if (I.is_point()) return 0.0;

  std::vector<Interval> breaks;
  auto collect = [&](const UPoly& q) {
    for (const auto& r : isolate_real_roots(q, I, tol).roots) breaks.push_back(r.enclosure);
  };
  UPoly shift = UPoly::constant(t);
  collect(P - shift);
  if (t != 0) collect(P + shift);
  breaks.emplace_back(I.lo, I.lo);
  breaks.emplace_back(I.hi, I.hi);
  std::sort(breaks.begin(), breaks.end(), [](const Interval& a, const Interval& b) {
    return a.midpoint() < b.midpoint();
  });
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double measure = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const auto& left = breaks[i];
    const auto& right = breaks[i + 1];
    if (!(left.hi < right.lo)) continue;  // overlapping enclosures: gap shorter than 2 * tol
    Rational probe = (left.hi + right.lo) / 2;
    if (abs(P(probe)) <= t) measure += to_double(right.midpoint()) - to_double(left.midpoint());
  }
  return std::clamp(measure, 0.0, I.length());
}

std::vector<double> derivative_bound_ratio_sweep(const UPoly& P, const Interval& I, const Rational& lambda, unsigned p,
                                       const std::vector<Rational>& t_grid, const Rational& tol) {
  if (p < 1) throw std::invalid_argument("derivative_bound_ratio_sweep: derivative order must be >= 1");
  if (lambda <= 0) throw std::invalid_argument("derivative_bound_ratio_sweep: lambda must be positive");
  if (!abs_bounded_below_on(P.derivative(p), I, lambda))
    throw HypothesisViolation("derivative-bound", "|P^(" + std::to_string(p) + ")| < lambda somewhere on the interval");
  std::vector<double> ratios;
  ratios.reserve(t_grid.size());
  for (const auto& t : t_grid) {
    if (t <= 0) throw std::invalid_argument("derivative_bound_ratio_sweep: t values must be positive");
    double m = sublevel_measure_1d(P, I, t, tol);
    ratios.push_back(m / std::pow(to_double(t / lambda), 1.0 / p));
  }
  return ratios;
}

ConstantCaseResult constant_dominance_case(const UPoly& P, const Interval& I, const Rational& t, const Rational& lambda,
                                        const Rational& tol) {
  if (lambda <= 0) throw std::invalid_argument("constant_dominance_case: lambda must be positive");
  const Rational a0 = P.coeff(0);
  const UPoly rest = P - UPoly::constant(a0);
  const Rational slack = abs(a0) - lambda;
  if (slack < 0 || !abs_bounded_above_on(rest, I, slack))
    throw HypothesisViolation("constant-dominance", "|a0| - sup|P - a0| < lambda on the interval");

  ConstantCaseResult r;
  const unsigned d = std::max(1U, P.is_zero() ? 1U : P.degree().value());
  r.measure = sublevel_measure_1d(P, I, t, tol);
  r.below_lambda = t < lambda;
  r.bound = I.length() * std::pow(to_double(t / lambda), 1.0 / d);
  r.gap = std::fabs(to_double(a0)) - sup_abs_on(rest, I, tol);
  r.bound_holds = r.below_lambda ? r.measure == 0.0 : r.measure <= r.bound + 1e-12;
  return r;
}

}  // namespace sublevel
