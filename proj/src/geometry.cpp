#include "sublevel/geometry.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sublevel {

namespace {

std::vector<double> normalized(const RationalPoint& v) {
  std::vector<double> u = to_double_point(v);
  double n = 0;
  for (double x : u) n += x * x;
  n = std::sqrt(n);
  for (double& x : u) x /= n;
  return u;
}

Polynomial with_abs_coefficients(const Polynomial& p) {
  Polynomial out(p.n_vars());
  for (const auto& [e, c] : p.terms()) out.add_term(e, abs(c));
  return out;
}

}  // namespace

GoodDirection find_good_direction(const Polynomial& p, std::uint64_t seed, unsigned max_candidates) {
  if (p.is_zero() || p.degree().value() < 1)
    throw std::invalid_argument("find_good_direction: polynomial must have degree >= 1");
  const std::size_t n = p.n_vars();
  const Polynomial top = top_homogeneous_component(p);

  std::vector<RationalPoint> fixed;
  for (std::size_t i = 0; i < n; ++i) {
    RationalPoint e(n, Rational(0));
    e[i] = 1;
    fixed.push_back(e);
  }
  if (n > 1) fixed.emplace_back(n, Rational(1));

  std::mt19937_64 gen(derive_seed(seed, 0x600D));
  std::uniform_int_distribution<int> coord(-7, 7);
  for (unsigned k = 0; k < max_candidates; ++k) {
    RationalPoint dir;
    if (k < fixed.size()) {
      dir = fixed[k];
    } else {
      bool nonzero = false;
      for (std::size_t i = 0; i < n; ++i) {
        int c = coord(gen);
        nonzero |= c != 0;
        dir.emplace_back(c);
      }
      if (!nonzero) continue;
    }
    Rational value = evaluate(top, dir);
    if (value != 0) return {dir, normalized(dir), value, k + 1};
  }
  throw std::runtime_error("find_good_direction: no direction with nonzero top form found");
}

std::string to_string(StarVerdictKind k) {
  switch (k) {
    case StarVerdictKind::PassesSampled: return "PassesSampled";
    case StarVerdictKind::FailsAt: return "FailsAt";
    case StarVerdictKind::ZeroNotIsolatedAt: return "ZeroNotIsolatedAt";
  }
  return "?";
}

StarVerdict star_shape_check(const Polynomial& p, const Rational& eps0, std::uint64_t seed, std::size_t n_samples) {
  if (eps0 <= 0) throw std::invalid_argument("star_shape_check: eps0 must be positive");
  if (n_samples < 10000) throw std::invalid_argument("star_shape_check: n_samples must be >= 10^4");
  const std::size_t n = p.n_vars();
  const RationalPoint origin(n, Rational(0));

  StarVerdict v;
  v.vacuous = evaluate(p, origin) != 0;

  const Polynomial radial = radial_derivative(p);
  const CompiledPolynomial f(p);
  const CompiledPolynomial rd(radial);
  const CompiledPolynomial f_scale(with_abs_coefficients(p));
  const CompiledPolynomial rd_scale(with_abs_coefficients(radial));
  constexpr double kCore = 1e-9;
  constexpr double kRelTol = 1e-12;

  const Domain ball = Domain::ball(origin, eps0);
  PointSet pts = sample(ball, seed, n_samples);

  std::vector<double> abs_x(n);
  std::vector<double> ref_point;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto x = pts.point(i);
    double norm2 = 0;
    for (std::size_t j = 0; j < n; ++j) {
      norm2 += x[j] * x[j];
      abs_x[j] = std::fabs(x[j]);
    }
    if (norm2 < kCore * kCore) continue;
    ++v.samples_checked;

    if (std::fabs(f(x)) <= kRelTol * f_scale(abs_x.data())) {
      v.kind = StarVerdictKind::ZeroNotIsolatedAt;
      v.witness.assign(x.begin(), x.end());
      v.radial_value = rd(x);
      return v;
    }
    const double r = rd(x);
    if (std::fabs(r) <= kRelTol * rd_scale(abs_x.data())) {
      v.kind = StarVerdictKind::FailsAt;
      v.witness.assign(x.begin(), x.end());
      v.radial_value = r;
      return v;
    }
    const int s = r > 0 ? 1 : -1;
    if (v.sign == 0) {
      v.sign = s;
      ref_point.assign(x.begin(), x.end());
      continue;
    }
    if (s != v.sign) {
      // Bisect on the segment ref_point -> x for a zero of the radial derivative.
      std::vector<double> a = ref_point, b(x.begin(), x.end()), m(n);
      for (int it = 0; it < 200; ++it) {
        for (std::size_t j = 0; j < n; ++j) m[j] = 0.5 * (a[j] + b[j]);
        double rm = rd(m.data());
        if (rm == 0) break;
        if ((rm > 0 ? 1 : -1) == v.sign)
          a = m;
        else
          b = m;
      }
      v.kind = StarVerdictKind::FailsAt;
      v.witness = m;
      v.radial_value = rd(m.data());
      v.sign = 0;
      return v;
    }
  }
  return v;
}

bool euler_identity_check(const Polynomial& p) {
  if (!p.is_homogeneous()) throw std::invalid_argument("euler_identity_check: polynomial is not homogeneous");
  const unsigned d = p.degree().value();
  return radial_derivative(p) == p * Rational(d);
}

}  // namespace sublevel
