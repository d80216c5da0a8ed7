#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sublevel/domain.hpp"
#include "sublevel/polynomial.hpp"
#include "sublevel/univariate.hpp"
#include "sublevel/volume.hpp"

namespace sublevel {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(std::size_t n);

/// g = 1 on the domain, or a C^1 radial bump: 1 inside inner_radius, 0
/// outside outer_radius, cubic smoothstep in between.
class AmplitudeSpec {
 public:
  enum class Kind { Indicator, SmoothBump };

  static AmplitudeSpec indicator() { return AmplitudeSpec(); }
  static AmplitudeSpec smooth_bump(std::vector<double> center, double inner_radius, double outer_radius);

  Kind kind() const { return kind_; }
  const std::vector<double>& center() const { return center_; }
  double inner_radius() const { return inner_; }
  double outer_radius() const { return outer_; }

  double operator()(const double* x) const;
  double sup_norm() const { return 1.0; }
  /// Integral of |grad g| over the domain by the midpoint rule, 512 cells per axis.
  double grad_l1_norm(const Domain& dom) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Indicator;
  std::vector<double> center_;
  double inner_ = 0, outer_ = 0;
};

/// Throws std::invalid_argument unless the bump matches the domain's
/// dimension and its support lies in the domain.
void validate_amplitude(const AmplitudeSpec& g, const Domain& dom);

struct QuadratureBudget {
  double panels_per_wavelength = 1.0;
  std::size_t min_panels = 4;
  std::size_t nodes_per_panel = 10;
};

struct OscillatoryResult {
  double magnitude = 0;
  double real = 0;
  double imag = 0;
  double error_estimate = 0;  // |I_b - I_{b/2}|
  bool converged = false;
  std::size_t nodes_per_axis = 0;
};

/// |int_A e^{i lambda p} g dx| for n <= 2 by panel Gauss-Legendre. Boxes with
/// the indicator use a tensor rule; balls and bumps use polar coordinates
/// with a radial breakpoint at the bump's inner radius. Panels per axis are
/// max(min_panels, ceil(panels_per_wavelength * lambda * osc_scale)) with
/// osc_scale the number of phase wavelengths across that axis per unit
/// lambda. The result is computed at the full and the halved budget;
/// converged when they agree to 1e-4 relative (plus a 1e-10 absolute floor
/// scaled by the amplitude's integral).
OscillatoryResult oscillatory_integral(const Polynomial& p, const AmplitudeSpec& g, const Domain& dom, double lambda,
                                       const QuadratureBudget& budget = {});

struct DecayCurve {
  std::vector<double> lambda_values;
  std::vector<double> magnitudes;
  std::vector<double> envelope;  // max over a half-decade window centred in log-lambda
  std::vector<bool> converged;
  std::vector<double> error_estimates;
  AmplitudeSpec amplitude;
  QuadratureBudget budget;
};

/// Running maximum over |log10(l_j) - log10(l_i)| <= half_width_decades.
std::vector<double> sliding_envelope(std::span<const double> lambdas, std::span<const double> magnitudes,
                                     double half_width_decades = 0.25);

DecayCurve decay_sweep(const Polynomial& p, const AmplitudeSpec& g, const Domain& dom, double lambda_min,
                       double lambda_max, std::size_t n_points, const QuadratureBudget& budget = {},
                       unsigned workers = 1);

struct DecayFit {
  double beta_hat = 0;  // negated log-log slope of the envelope
  PowerLawFit loglog;
};

/// OLS of log(envelope) on log(lambda). The default window is the upper two
/// decades of the grid. Needs at least 5 points.
DecayFit fit_decay(const DecayCurve& curve, std::optional<std::pair<double, double>> window = std::nullopt);

/// Envelope * lambda^(1/d) over the sweep.
struct DecayBoundReport {
  double max_scaled = 0;
  double min_scaled = 0;
  double spread = 0;          // max_scaled / min_scaled
  double norm_sum = 0;        // sup_norm + grad_l1_norm
  double normalized_constant = 0;  // max_scaled / norm_sum
};

DecayBoundReport decay_bound_check(const DecayCurve& curve, unsigned degree, const Domain& dom);

struct VdcPoint {
  double lambda = 0;
  double magnitude = 0;
  double error_estimate = 0;
  double bound = 0;  // 3 / (lambda t)
  bool holds = false;
};

struct VdcReport {
  std::vector<VdcPoint> points;
  double max_ratio = 0;  // max magnitude / bound
  bool all_hold = false;
};

/// Certifies |P'| >= t and monotone P' on I exactly, then checks
/// |int_I e^{i lambda P}| <= 3/(lambda t) at every lambda with the quadrature
/// error estimate subtracted. Throws HypothesisViolation named
/// "derivative-bound" or "monotonicity".
VdcReport van_der_corput_check(const UPoly& P, const Interval& I, const Rational& t,
                               std::span<const double> lambda_grid, const QuadratureBudget& budget = {});

struct GradientSplit {
  double vol_At = 0;  // {x : |grad p| <= t}
  double vol_Bt = 0;  // complement in the domain
  double ci_half_width = 0;
  std::uint64_t hits_At = 0;
  std::uint64_t hits_Bt = 0;
  std::uint64_t total = 0;
  double domain_volume = 0;
  std::optional<double> bound_ratio;  // vol_At / t^(1/(d-1)) for d >= 2
};

GradientSplit gradient_sublevel_split(const Polynomial& p, const Domain& dom, double t, std::uint64_t seed,
                                      std::size_t n_samples, unsigned workers = 1);

}  // namespace sublevel
