#include "sublevel/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sublevel/roots.hpp"

namespace sublevel {

const GaussRule& gauss_legendre(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, GaussRule> cache;
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2 / ((1 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

AmplitudeSpec AmplitudeSpec::smooth_bump(std::vector<double> center, double inner_radius, double outer_radius) {
  if (center.empty()) throw std::invalid_argument("smooth bump needs a center");
  if (!(inner_radius >= 0) || !(outer_radius > inner_radius))
    throw std::invalid_argument("smooth bump needs 0 <= inner_radius < outer_radius");
  AmplitudeSpec g;
  g.kind_ = Kind::SmoothBump;
  g.center_ = std::move(center);
  g.inner_ = inner_radius;
  g.outer_ = outer_radius;
  return g;
}

double AmplitudeSpec::operator()(const double* x) const {
  if (kind_ == Kind::Indicator) return 1.0;
  double r2 = 0;
  for (std::size_t j = 0; j < center_.size(); ++j) r2 += (x[j] - center_[j]) * (x[j] - center_[j]);
  const double r = std::sqrt(r2);
  if (r <= inner_) return 1.0;
  if (r >= outer_) return 0.0;
  const double s = (r - inner_) / (outer_ - inner_);
  return 1 - s * s * (3 - 2 * s);
}

double AmplitudeSpec::grad_l1_norm(const Domain& dom) const {
  if (kind_ == Kind::Indicator) return 0.0;
  const auto bb = dom.bounding_box();
  const std::size_t n = bb.size();
  constexpr std::size_t res = 512;
  std::size_t cells = 1;
  for (std::size_t j = 0; j < n; ++j) cells *= res;
  double cell_volume = 1;
  for (const auto& iv : bb) cell_volume *= iv.length() / res;
  double sum = 0;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < cells; ++k) {
    std::size_t rem = k;
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = to_double(bb[j].lo) + bb[j].length() * (static_cast<double>(rem % res) + 0.5) / res;
      rem /= res;
    }
    if (!dom.contains(x.data())) continue;
    double r2 = 0;
    for (std::size_t j = 0; j < n; ++j) r2 += (x[j] - center_[j]) * (x[j] - center_[j]);
    const double r = std::sqrt(r2);
    if (r <= inner_ || r >= outer_) continue;
    const double s = (r - inner_) / (outer_ - inner_);
    sum += 6 * s * (1 - s) / (outer_ - inner_);
  }
  return sum * cell_volume;
}

std::string AmplitudeSpec::describe() const {
  if (kind_ == Kind::Indicator) return "indicator";
  std::ostringstream os;
  os << "smooth_bump(center=(";
  for (std::size_t j = 0; j < center_.size(); ++j) os << (j ? "," : "") << format_double(center_[j]);
  os << "),inner=" << format_double(inner_) << ",outer=" << format_double(outer_) << ")";
  return os.str();
}

void validate_amplitude(const AmplitudeSpec& g, const Domain& dom) {
  if (g.kind() == AmplitudeSpec::Kind::Indicator) return;
  const auto& c = g.center();
  if (c.size() != dom.dim()) throw std::invalid_argument("bump center dimension does not match the domain");
  const double R = g.outer_radius();
  if (dom.is_box()) {
    const auto& iv = dom.as_box().intervals;
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j] - R < to_double(iv[j].lo) || c[j] + R > to_double(iv[j].hi))
        throw std::invalid_argument("bump support is not contained in the domain");
  } else {
    const auto& b = dom.as_ball();
    double d2 = 0;
    for (std::size_t j = 0; j < c.size(); ++j) d2 += (c[j] - to_double(b.center[j])) * (c[j] - to_double(b.center[j]));
    if (std::sqrt(d2) + R > to_double(b.radius)) throw std::invalid_argument("bump support is not contained in the domain");
  }
}

namespace {

struct Rule1D {
  std::vector<double> x, w;
};

// Panel Gauss-Legendre over consecutive segments [breaks[i], breaks[i+1]];
// panels are shared out in proportion to segment length.
Rule1D panel_rule(std::span<const double> breaks, std::size_t panels, std::size_t nodes) {
  const GaussRule& gl = gauss_legendre(nodes);
  const double total = breaks.back() - breaks.front();
  Rule1D r;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double a = breaks[s], b = breaks[s + 1];
    if (!(b > a)) continue;
    const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(static_cast<double>(panels) * (b - a) / total)));
    const double h = (b - a) / static_cast<double>(k);
    for (std::size_t p = 0; p < k; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * h;
      for (std::size_t i = 0; i < nodes; ++i) {
        r.x.push_back(mid + 0.5 * h * gl.nodes[i]);
        r.w.push_back(0.5 * h * gl.weights[i]);
      }
    }
  }
  return r;
}

std::size_t panel_count(const QuadratureBudget& b, double scale, double lambda, double wavelengths_per_unit) {
  const double want = std::ceil(b.panels_per_wavelength * scale * lambda * wavelengths_per_unit);
  if (!(want < 1e9)) throw std::invalid_argument("oscillatory quadrature: panel count out of range");
  return std::max(b.min_panels, static_cast<std::size_t>(want));
}

struct Complex {
  double re = 0, im = 0;
};

// How the integration region is parametrized.
struct Layout {
  bool polar = false;
  std::vector<std::vector<double>> breaks;  // per axis (tensor) or {radial} (polar)
  std::vector<double> center;               // polar centre
  std::vector<double> axis_wavelengths;     // wavelengths per unit lambda along each parametrized axis
};

Layout make_layout(const Polynomial& p, const AmplitudeSpec& g, const Domain& dom) {
  const std::size_t n = dom.dim();
  Layout L;
  const Polynomial f = extend_variables(p, n);
  const auto grads = gradient(f);
  std::vector<CompiledPolynomial> dfs;
  for (const auto& d : grads) dfs.emplace_back(d);

  const bool bump = g.kind() == AmplitudeSpec::Kind::SmoothBump;
  L.polar = bump || dom.is_ball();

  // Region over which derivative maxima are taken.
  std::vector<double> lo(n), hi(n), c(n);
  double R = 0;
  if (bump) {
    c = g.center();
    R = g.outer_radius();
  } else if (dom.is_ball()) {
    c = to_double_point(dom.as_ball().center);
    R = to_double(dom.as_ball().radius);
  }
  const auto bb = dom.bounding_box();
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = L.polar ? c[j] - R : to_double(bb[j].lo);
    hi[j] = L.polar ? c[j] + R : to_double(bb[j].hi);
  }
  constexpr std::size_t res = 64;
  std::vector<double> max_partial(n, 0.0);
  double max_grad = 0;
  std::size_t nodes = 1;
  for (std::size_t j = 0; j < n; ++j) nodes *= res + 1;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < nodes; ++k) {
    std::size_t rem = k;
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = lo[j] + (hi[j] - lo[j]) * static_cast<double>(rem % (res + 1)) / res;
      rem /= res + 1;
    }
    double g2 = 0;
    for (std::size_t j = 0; j < n; ++j) {
      double d = std::fabs(dfs[j](x.data()));
      max_partial[j] = std::max(max_partial[j], d);
      g2 += d * d;
    }
    max_grad = std::max(max_grad, std::sqrt(g2));
  }
  constexpr double kSafety = 1.05;
  const double two_pi = 2 * std::numbers::pi;

  if (!L.polar) {
    for (std::size_t j = 0; j < n; ++j) {
      L.breaks.push_back({to_double(bb[j].lo), to_double(bb[j].hi)});
      L.axis_wavelengths.push_back(kSafety * max_partial[j] * bb[j].length() / two_pi);
    }
    return L;
  }
  L.center = c;
  if (n == 1) {
    // A one-dimensional "ball" is an interval; bumps split at their kinks.
    std::vector<double> br{c[0] - R};
    if (bump) {
      if (g.inner_radius() > 0) br.push_back(c[0] - g.inner_radius());
      br.push_back(c[0]);
      if (g.inner_radius() > 0) br.push_back(c[0] + g.inner_radius());
    }
    br.push_back(c[0] + R);
    L.polar = false;
    L.breaks.push_back(br);
    L.axis_wavelengths.push_back(kSafety * max_grad * 2 * R / two_pi);
    return L;
  }
  std::vector<double> radial{0.0};
  if (bump && g.inner_radius() > 0) radial.push_back(g.inner_radius());
  radial.push_back(R);
  L.breaks.push_back(radial);
  L.axis_wavelengths.push_back(kSafety * max_grad * R / two_pi);  // radial
  L.axis_wavelengths.push_back(kSafety * max_grad * R);           // angular: circumference 2 pi R
  return L;
}

Complex integrate(const CompiledPolynomial& f, const AmplitudeSpec& g, const Layout& L, double lambda,
                  const QuadratureBudget& b, double scale, std::size_t* nodes_per_axis) {
  const std::size_t n = L.polar ? 2 : L.breaks.size();
  if (n == 1) {
    const Rule1D r = panel_rule(L.breaks[0], panel_count(b, scale, lambda, L.axis_wavelengths[0]), b.nodes_per_panel);
    *nodes_per_axis = r.x.size();
    Complex acc;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double x = r.x[i];
      const double v = lambda * f(&x);
      const double a = r.w[i] * g(&x);
      acc.re += a * std::cos(v);
      acc.im += a * std::sin(v);
    }
    return acc;
  }
  Complex acc;
  if (!L.polar) {
    const Rule1D rx = panel_rule(L.breaks[0], panel_count(b, scale, lambda, L.axis_wavelengths[0]), b.nodes_per_panel);
    const Rule1D ry = panel_rule(L.breaks[1], panel_count(b, scale, lambda, L.axis_wavelengths[1]), b.nodes_per_panel);
    *nodes_per_axis = std::max(rx.x.size(), ry.x.size());
    double pt[2];
    for (std::size_t i = 0; i < rx.x.size(); ++i) {
      pt[0] = rx.x[i];
      Complex row;
      for (std::size_t j = 0; j < ry.x.size(); ++j) {
        pt[1] = ry.x[j];
        const double v = lambda * f(pt);
        const double a = ry.w[j] * g(pt);
        row.re += a * std::cos(v);
        row.im += a * std::sin(v);
      }
      acc.re += rx.w[i] * row.re;
      acc.im += rx.w[i] * row.im;
    }
    return acc;
  }
  const Rule1D rr = panel_rule(L.breaks[0], panel_count(b, scale, lambda, L.axis_wavelengths[0]), b.nodes_per_panel);
  const double th[2] = {0.0, 2 * std::numbers::pi};
  const Rule1D rt = panel_rule(th, panel_count(b, scale, lambda, L.axis_wavelengths[1]), b.nodes_per_panel);
  *nodes_per_axis = std::max(rr.x.size(), rt.x.size());
  std::vector<double> ct(rt.x.size()), st(rt.x.size());
  for (std::size_t j = 0; j < rt.x.size(); ++j) {
    ct[j] = std::cos(rt.x[j]);
    st[j] = std::sin(rt.x[j]);
  }
  double pt[2];
  for (std::size_t i = 0; i < rr.x.size(); ++i) {
    const double r = rr.x[i];
    Complex row;
    for (std::size_t j = 0; j < rt.x.size(); ++j) {
      pt[0] = L.center[0] + r * ct[j];
      pt[1] = L.center[1] + r * st[j];
      const double v = lambda * f(pt);
      const double a = rt.w[j] * g(pt);
      row.re += a * std::cos(v);
      row.im += a * std::sin(v);
    }
    acc.re += rr.w[i] * r * row.re;
    acc.im += rr.w[i] * r * row.im;
  }
  return acc;
}

}  // namespace

OscillatoryResult oscillatory_integral(const Polynomial& p, const AmplitudeSpec& g, const Domain& dom, double lambda,
                                       const QuadratureBudget& budget) {
  if (dom.dim() > 2) throw std::invalid_argument("oscillatory_integral supports n <= 2");
  if (p.n_vars() > dom.dim()) throw std::invalid_argument("polynomial has more variables than the domain dimension");
  if (!(lambda > 0)) throw std::invalid_argument("oscillatory_integral: lambda must be positive");
  if (!(budget.panels_per_wavelength > 0) || budget.min_panels < 1 || budget.nodes_per_panel < 2)
    throw std::invalid_argument("oscillatory_integral: invalid quadrature budget");
  validate_amplitude(g, dom);

  const Layout L = make_layout(p, g, dom);
  const CompiledPolynomial f(extend_variables(p, dom.dim()));
  std::size_t nodes = 0, half_nodes = 0;
  const Complex full = integrate(f, g, L, lambda, budget, 1.0, &nodes);
  const Complex half = integrate(f, g, L, lambda, budget, 0.5, &half_nodes);

  OscillatoryResult r;
  r.real = full.re;
  r.imag = full.im;
  r.magnitude = std::hypot(full.re, full.im);
  r.error_estimate = std::hypot(full.re - half.re, full.im - half.im);
  r.converged = r.error_estimate <= 1e-4 * r.magnitude + 1e-10 * domain_volume(dom);
  r.nodes_per_axis = nodes;
  return r;
}

std::vector<double> sliding_envelope(std::span<const double> lambdas, std::span<const double> magnitudes,
                                     double half_width_decades) {
  if (lambdas.size() != magnitudes.size()) throw std::invalid_argument("sliding_envelope: size mismatch");
  std::vector<double> env(lambdas.size(), 0.0);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double li = std::log10(lambdas[i]);
    for (std::size_t j = 0; j < lambdas.size(); ++j)
      if (std::fabs(std::log10(lambdas[j]) - li) <= half_width_decades + 1e-12) env[i] = std::max(env[i], magnitudes[j]);
  }
  return env;
}

DecayCurve decay_sweep(const Polynomial& p, const AmplitudeSpec& g, const Domain& dom, double lambda_min,
                       double lambda_max, std::size_t n_points, const QuadratureBudget& budget, unsigned workers) {
  if (!(lambda_min > 0) || !(lambda_max > lambda_min)) throw std::invalid_argument("decay_sweep: need 0 < lambda_min < lambda_max");
  DecayCurve c;
  c.lambda_values = log_grid(lambda_min, lambda_max, n_points);
  c.amplitude = g;
  c.budget = budget;
  std::vector<OscillatoryResult> res(n_points);
  parallel_for(n_points, workers, [&](std::size_t i) { res[i] = oscillatory_integral(p, g, dom, c.lambda_values[i], budget); });
  for (const auto& r : res) {
    c.magnitudes.push_back(r.magnitude);
    c.converged.push_back(r.converged);
    c.error_estimates.push_back(r.error_estimate);
  }
  c.envelope = sliding_envelope(c.lambda_values, c.magnitudes);
  return c;
}

DecayFit fit_decay(const DecayCurve& curve, std::optional<std::pair<double, double>> window) {
  if (curve.lambda_values.empty()) throw std::invalid_argument("fit_decay: empty curve");
  const auto w = window.value_or(std::pair{curve.lambda_values.back() / 100, curve.lambda_values.back()});
  const double lo = w.first * (1 - 1e-12), hi = w.second * (1 + 1e-12);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < curve.lambda_values.size(); ++i) {
    const double l = curve.lambda_values[i];
    if (l < lo || l > hi || !(curve.envelope[i] > 0)) continue;
    xs.push_back(l);
    ys.push_back(curve.envelope[i]);
  }
  if (xs.size() < 5) throw std::invalid_argument("fit_decay: fewer than 5 envelope points in the window");
  DecayFit f;
  f.loglog = fit_log_log(xs, ys);
  f.loglog.window = w;
  f.beta_hat = -f.loglog.alpha_hat;
  return f;
}

DecayBoundReport decay_bound_check(const DecayCurve& curve, unsigned degree, const Domain& dom) {
  if (degree < 1) throw std::invalid_argument("decay_bound_check: degree must be >= 1");
  DecayBoundReport r;
  r.min_scaled = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.lambda_values.size(); ++i) {
    const double s = curve.envelope[i] * std::pow(curve.lambda_values[i], 1.0 / degree);
    r.max_scaled = std::max(r.max_scaled, s);
    r.min_scaled = std::min(r.min_scaled, s);
  }
  r.spread = r.max_scaled / r.min_scaled;
  r.norm_sum = curve.amplitude.sup_norm() + curve.amplitude.grad_l1_norm(dom);
  r.normalized_constant = r.max_scaled / r.norm_sum;
  return r;
}

namespace {

std::string describe_point(const RootEnclosure& e) {
  return e.enclosure.is_point() ? to_string(e.enclosure.lo) : format_double(to_double(e.enclosure.midpoint()));
}

void certify_vdc(const UPoly& P, const Interval& I, const Rational& t) {
  const UPoly d1 = P.derivative();
  const UPoly d2 = d1.derivative();
  const Rational tol(1, 1 << 20);
  if (!abs_bounded_below_on(d1, I, t)) {
    // Smallest |P'| among endpoints, zeros of P' and critical points of P'.
    Rational best_x = I.lo, best = abs(d1(I.lo));
    auto consider = [&](const Rational& x) {
      Rational v = abs(d1(x));
      if (v < best) {
        best = v;
        best_x = x;
      }
    };
    consider(I.hi);
    std::string where;
    for (const UPoly* q : {&d1, &d2}) {
      if (q->is_zero()) continue;
      for (const auto& e : isolate_real_roots(*q, I, tol).roots) {
        Rational before = best;
        consider(e.enclosure.midpoint());
        if (best < before) where = describe_point(e);
      }
    }
    if (where.empty()) where = to_string(best_x);
    throw HypothesisViolation("derivative-bound",
                              "|P'| >= " + to_string(t) + " fails on the interval; |P'| = " +
                                  format_double(to_double(best)) + " at " + where);
  }
  if (d2.is_zero() || nonnegative_on(d2, I) || nonnegative_on(-d2, I)) return;
  std::string where = "an interior point";
  for (const auto& e : isolate_real_roots(d2, I, tol).roots)
    if (e.multiplicity % 2 == 1) {
      where = describe_point(e);
      break;
    }
  throw HypothesisViolation("monotonicity", "P' is not monotone on the interval; P'' changes sign at " + where);
}

}  // namespace

VdcReport van_der_corput_check(const UPoly& P, const Interval& I, const Rational& t,
                               std::span<const double> lambda_grid, const QuadratureBudget& budget) {
  if (t <= 0) throw std::invalid_argument("van_der_corput_check: t must be positive");
  if (I.is_point()) throw std::invalid_argument("van_der_corput_check: interval must have positive length");
  certify_vdc(P, I, t);

  // P as a polynomial in one variable so the generic quadrature applies.
  Polynomial phase(1);
  for (std::size_t k = 0; k < P.coeffs().size(); ++k)
    if (P.coeffs()[k] != 0) phase.add_term(Exponent{static_cast<unsigned>(k)}, P.coeffs()[k]);
  const Domain dom = Domain::box({I});
  const double td = to_double(t);

  VdcReport rep;
  rep.all_hold = true;
  for (double lambda : lambda_grid) {
    const OscillatoryResult r = oscillatory_integral(phase, AmplitudeSpec::indicator(), dom, lambda, budget);
    VdcPoint pt;
    pt.lambda = lambda;
    pt.magnitude = r.magnitude;
    pt.error_estimate = r.error_estimate;
    pt.bound = 3 / (lambda * td);
    pt.holds = r.magnitude - r.error_estimate <= pt.bound;
    rep.max_ratio = std::max(rep.max_ratio, r.magnitude / pt.bound);
    rep.all_hold = rep.all_hold && pt.holds;
    rep.points.push_back(pt);
  }
  return rep;
}

GradientSplit gradient_sublevel_split(const Polynomial& p, const Domain& dom, double t, std::uint64_t seed,
                                      std::size_t n_samples, unsigned workers) {
  if (!(t > 0)) throw std::invalid_argument("gradient_sublevel_split: t must be positive");
  const Polynomial q = gradient_norm_squared(p);
  const VolumeEstimate e = estimate_volume(q, dom, t * t, MonteCarloMethod{seed, n_samples}, workers);
  GradientSplit s;
  s.domain_volume = domain_volume(dom);
  s.total = e.total;
  s.hits_At = e.hits;
  s.hits_Bt = e.total - e.hits;
  s.vol_At = e.estimate;
  s.vol_Bt = s.domain_volume - s.vol_At;
  s.ci_half_width = e.ci_half_width;
  if (!p.is_zero() && p.degree().value() >= 2)
    s.bound_ratio = s.vol_At / std::pow(t, 1.0 / (p.degree().value() - 1));
  return s;
}

}  // namespace sublevel
