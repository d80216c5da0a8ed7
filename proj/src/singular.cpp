#include "sublevel/singular.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sublevel {

std::string to_string(TheoremVerdict v) {
  switch (v) {
    case TheoremVerdict::GuaranteedConvergent: return "GuaranteedConvergent";
    case TheoremVerdict::GuaranteedDivergent: return "GuaranteedDivergent";
    case TheoremVerdict::TheoremSilent: return "TheoremSilent";
  }
  return "?";
}

std::string to_string(SingularVerdict v) {
  switch (v) {
    case SingularVerdict::Convergent: return "Convergent";
    case SingularVerdict::Divergent: return "Divergent";
    case SingularVerdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

TheoremVerdict classify_convergence(const Rational& gamma, const ExponentBracket& bracket) {
  if (gamma < bracket.alpha) return TheoremVerdict::GuaranteedConvergent;
  if (gamma >= bracket.alpha_prime) return TheoremVerdict::GuaranteedDivergent;
  return TheoremVerdict::TheoremSilent;
}

TheoremVerdict classify_convergence(double gamma, const ExponentBracket& bracket) {
  return classify_convergence(exact_rational(gamma), bracket);
}

namespace {

// Sum of t^-gamma dV over the grid with geometric midpoints.
double stieltjes_body(const VolumeCurve& c, double gamma) {
  double s = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const double dv = c.estimates[i + 1] - c.estimates[i];
    if (dv > 0) s += std::pow(std::sqrt(c.t_values[i] * c.t_values[i + 1]), -gamma) * dv;
  }
  return s;
}

// Compares each pair of adjacent cells against the single merged cell and
// sums the absolute differences. Unlike a signed Richardson estimate this
// stays honest when the mass sits in one cell (near-constant |p|), where the
// midpoint error is first order. A trailing unpaired cell contributes half
// the spread of t^-gamma across it.
double discretization_error(const VolumeCurve& c, double gamma) {
  auto mid = [&](std::size_t i, std::size_t j) { return std::pow(std::sqrt(c.t_values[i] * c.t_values[j]), -gamma); };
  double err = 0;
  std::size_t i = 0;
  for (; i + 2 < c.size(); i += 2) {
    const double dv1 = c.estimates[i + 1] - c.estimates[i], dv2 = c.estimates[i + 2] - c.estimates[i + 1];
    err += std::fabs(mid(i, i + 1) * dv1 + mid(i + 1, i + 2) * dv2 - mid(i, i + 2) * (dv1 + dv2));
  }
  if (i + 1 < c.size()) {
    const double dv = c.estimates[i + 1] - c.estimates[i];
    err += 0.5 * (std::pow(c.t_values[i], -gamma) - std::pow(c.t_values[i + 1], -gamma)) * dv;
  }
  return err;
}

}  // namespace

SingularReport singular_integral(const Polynomial& p, const Domain& dom, double gamma, const VolumeCurve& curve,
                                 const std::optional<PowerLawFit>& fit, const std::optional<ExponentBracket>& bracket,
                                 const SingularOptions& options) {
  if (!(gamma >= 0)) throw std::invalid_argument("singular_integral: gamma must be >= 0");
  if (curve.size() < 2) throw std::invalid_argument("singular_integral: volume curve missing or too short");
  if (p.n_vars() > dom.dim()) throw std::invalid_argument("polynomial has more variables than the domain dimension");

  SingularReport r;
  r.gamma = gamma;
  const std::size_t m = curve.size();
  const double t0 = curve.t_values.front();
  const double T = curve.t_values.back();
  const double v0 = curve.estimates.front();
  const double vol = curve.domain_volume;
  r.t_min = t0;
  r.t_max = T;
  if (fit) {
    r.alpha_hat = fit->alpha_hat;
    r.stderr_alpha = fit->stderr_alpha;
  }
  if (bracket) r.theorem = classify_convergence(gamma, *bracket);

  r.body = stieltjes_body(curve, gamma);
  r.discretization_error = discretization_error(curve, gamma);
  const double top_mass = std::max(0.0, vol - curve.estimates.back());
  r.top_mass_term = top_mass * std::pow(T, -gamma);

  // Tail over (0, t0] from the fitted power law.
  bool tail_known = false;
  double tail_weight = 0;  // tail / V(t0)
  if (v0 == 0) {
    tail_known = true;
  } else if (gamma == 0) {
    r.tail = v0;
    tail_weight = 1;
    tail_known = true;
  } else if (!fit) {
    throw std::invalid_argument("singular_integral: the curve has mass at t_min, so a power-law fit is required");
  }

  std::ostringstream why;
  if (!tail_known) {
    const double a = fit->alpha_hat, margin = 2 * fit->stderr_alpha;
    bool decided = false;
    // Empirical call: +1 convergent, -1 divergent, 0 undecided.
    const int empirical = gamma < a - margin ? 1 : (gamma >= a + margin ? -1 : 0);
    if (r.theorem == TheoremVerdict::GuaranteedDivergent) {
      r.verdict = SingularVerdict::Divergent;
      why << "bracket decides: gamma >= alpha'";
      if (empirical == 1) why << " (fit alone would say convergent)";
      decided = true;
    } else if (r.theorem == TheoremVerdict::GuaranteedConvergent) {
      if (a > gamma) {
        tail_known = true;
        why << "bracket decides: gamma < alpha";
      } else {
        r.verdict = SingularVerdict::Indeterminate;
        why << "bracket says convergent but alpha_hat <= gamma, tail cannot be extrapolated";
        decided = true;
      }
    } else if (empirical == 1) {
      tail_known = true;
      why << "gamma < alpha_hat - 2 stderr";
    } else if (empirical == -1) {
      r.verdict = SingularVerdict::Divergent;
      why << "gamma >= alpha_hat + 2 stderr";
      decided = true;
    } else {
      r.verdict = SingularVerdict::Indeterminate;
      why << "gamma within 2 stderr of alpha_hat";
      decided = true;
    }
    if (tail_known) {
      // c a/(a - gamma) t0^(a - gamma) with c from the regression, so the
      // tail does not hinge on the single noisy count at t0.
      const double c = std::exp(fit->log_c_hat);
      const double v_fit = c * std::pow(t0, a);
      const double scale = std::pow(t0, -gamma) * a / (a - gamma);
      r.tail = v_fit * scale;
      tail_weight = r.tail / v0;
      const double slope_err = v_fit * std::pow(t0, -gamma) * gamma / ((a - gamma) * (a - gamma)) * fit->stderr_alpha;
      const double anchor_err = std::fabs(v_fit - v0) * scale;
      r.tail_error = std::hypot(slope_err, anchor_err);
    }
    if (decided && !tail_known) {
      r.reason = why.str();
      return r;
    }
  } else if (v0 == 0) {
    why << "no mass at or below t_min";
  } else {
    why << "gamma = 0";
  }

  // Multinomial variance of the weighted bin counts.
  const auto* mc = std::get_if<MonteCarloMethod>(&curve.method);
  if (mc && curve.total > 0) {
    const double N = static_cast<double>(curve.total);
    double s1 = 0, s2 = 0;
    auto add = [&](double w, double mass) {
      const double pk = mass / vol;
      s1 += w * pk;
      s2 += w * w * pk;
    };
    add(tail_weight, v0);
    for (std::size_t i = 0; i + 1 < m; ++i)
      add(std::pow(std::sqrt(curve.t_values[i] * curve.t_values[i + 1]), -gamma),
          curve.estimates[i + 1] - curve.estimates[i]);
    add(std::pow(T, -gamma), top_mass);
    r.mc_error = vol * std::sqrt(std::max(0.0, s2 - s1 * s1) / N);
  }

  r.value = r.body + r.top_mass_term + r.tail;
  r.error = std::sqrt(r.mc_error * r.mc_error + r.discretization_error * r.discretization_error +
                      r.tail_error * r.tail_error);
  r.verdict = SingularVerdict::Convergent;

  // t^-gamma V | + gamma int t^-gamma-1 V dt, trapezoid in log t.
  double integral = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double f0 = std::pow(curve.t_values[i], -gamma) * curve.estimates[i];
    const double f1 = std::pow(curve.t_values[i + 1], -gamma) * curve.estimates[i + 1];
    integral += 0.5 * (f0 + f1) * std::log(curve.t_values[i + 1] / curve.t_values[i]);
  }
  r.by_parts_value = std::pow(T, -gamma) * curve.estimates.back() - std::pow(t0, -gamma) * v0 + gamma * integral +
                     r.tail + r.top_mass_term;

  if (options.direct_samples > 0) {
    const CompiledPolynomial f(extend_variables(p, dom.dim()));
    const std::size_t dim = dom.dim();
    const std::size_t n_blocks = (options.direct_samples + kSampleBlockSize - 1) / kSampleBlockSize;
    std::vector<std::pair<double, double>> sums(n_blocks);
    for_each_sample_block(dom, derive_seed(options.seed, 0xD12EC7), options.direct_samples, options.workers,
                          [&](std::size_t b, const double* pts, std::size_t count) {
                            double s = 0, s2 = 0;
                            for (std::size_t i = 0; i < count; ++i) {
                              const double v = std::fabs(f(pts + i * dim));
                              if (v <= t0) continue;
                              const double w = std::pow(v, -gamma);
                              s += w;
                              s2 += w * w;
                            }
                            sums[b] = {s, s2};
                          });
    double s = 0, s2 = 0;
    for (const auto& [a, b] : sums) {
      s += a;
      s2 += b;
    }
    const double N = static_cast<double>(options.direct_samples);
    const double mean = s / N;
    const double var = std::max(0.0, s2 / N - mean * mean);
    r.direct_value = vol * mean;
    r.direct_error = vol * std::sqrt(var / N);
    const double combined = std::sqrt(*r.direct_error * *r.direct_error + r.mc_error * r.mc_error +
                                      r.discretization_error * r.discretization_error);
    r.direct_agrees = std::fabs(*r.direct_value - (r.body + r.top_mass_term)) <= 3 * combined + 1e-12 * vol;
    if (!*r.direct_agrees) {
      r.verdict = SingularVerdict::Indeterminate;
      why << "; direct Monte Carlo cross-check disagrees";
    }
  }
  r.reason = why.str();
  return r;
}

IndexBracket integration_index(const ExponentBracket& bracket, const std::optional<PowerLawFit>& fit) {
  IndexBracket ib{bracket.alpha, bracket.alpha_prime, std::nullopt, std::nullopt};
  if (fit) {
    ib.fitted = fit->alpha_hat;
    ib.fitted_stderr = fit->stderr_alpha;
  }
  return ib;
}

}  // namespace sublevel
