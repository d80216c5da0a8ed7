#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sublevel/domain.hpp"
#include "sublevel/polynomial.hpp"

namespace sublevel {

struct MonteCarloMethod {
  std::uint64_t seed = 0;
  std::size_t n_samples = 1'000'000;
};

/// Midpoint rule on a uniform grid over the bounding box.
struct GridMethod {
  std::size_t resolution = 256;
};

using VolumeMethod = std::variant<MonteCarloMethod, GridMethod>;

std::string method_name(const VolumeMethod& m);
std::uint64_t method_seed(const VolumeMethod& m);

/// Volume of {x in A : |p(x)| <= t} on a t-grid. Every grid point is
/// evaluated against the same sample, so estimates are non-decreasing in t.
struct VolumeCurve {
  std::vector<double> t_values;
  std::vector<double> estimates;
  std::vector<double> ci_half_widths;  // 99%; zero for the grid method
  std::vector<std::uint64_t> hits;
  std::uint64_t total = 0;  // samples (or grid cells) inside the domain
  VolumeMethod method;
  double domain_volume = 0;

  std::size_t size() const { return t_values.size(); }
};

struct VolumeEstimate {
  double estimate = 0;
  double ci_half_width = 0;
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
};

inline constexpr double kZ99 = 2.576;

/// 99% half-width on the volume scale: normal approximation, or the Wilson
/// interval (its larger one-sided distance from the point estimate) when
/// fewer than 30 hits or misses.
double ci_half_width(std::uint64_t hits, std::uint64_t total, double volume);

std::vector<double> log_grid(double lo, double hi, std::size_t n);

VolumeEstimate estimate_volume(const Polynomial& p, const Domain& dom, double t, const VolumeMethod& method,
                               unsigned workers = 1);

/// Log-spaced sweep over [t_min, t_max] with n_points >= 8.
VolumeCurve volume_sweep(const Polynomial& p, const Domain& dom, double t_min, double t_max, std::size_t n_points,
                         const VolumeMethod& method, unsigned workers = 1);

/// Sweep over an explicit increasing grid of positive thresholds.
VolumeCurve volume_curve(const Polynomial& p, const Domain& dom, std::span<const double> t_grid,
                         const VolumeMethod& method, unsigned workers = 1);

struct PowerLawFit {
  double alpha_hat = 0;
  double log_c_hat = 0;
  double r_squared = 0;
  double stderr_alpha = 0;
  std::pair<double, double> window{0, 0};
  std::size_t n_points = 0;
  std::size_t n_excluded_zero = 0;
};

/// Ordinary least squares of log(y) on log(x). Needs at least two distinct x.
PowerLawFit fit_log_log(std::span<const double> x, std::span<const double> y);

/// Fits log V = log c + alpha log t on the window. The default window is the
/// lowest two decades starting at the first t with a positive estimate whose
/// CI half-width is at most 20% of the estimate. Throws std::invalid_argument
/// for fewer than 5 usable points.
PowerLawFit fit_power_law(const VolumeCurve& curve, std::optional<std::pair<double, double>> window = std::nullopt);

/// V <= C t^alpha (upper bound exponent) and V >= C' t^alpha' (lower bound exponent).
struct ExponentBracket {
  Rational alpha;        // upper-bound exponent
  Rational alpha_prime;  // lower-bound exponent
  std::string alpha_source;
  std::string alpha_prime_source;
};

/// alpha = n/d when the star-shape condition is certified, else 1/d;
/// alpha' = (n - k')/d' for a k'-dimensional set of zeros of order d'.
/// d' and k' are caller-supplied facts. Throws std::invalid_argument when
/// 1 <= d' <= d or 0 <= k' <= n - 1 fails, or alpha > alpha'.
ExponentBracket exponent_bracket(const Polynomial& p, const Domain& dom, unsigned d_prime, unsigned k_prime,
                                 bool star_certified);

struct BracketReport {
  double alpha_hat = 0;
  double lower_limit = 0;  // alpha - margin
  double upper_limit = 0;  // alpha' + margin
  bool exponent_in_range = false;
  double max_upper_ratio = 0;  // max over the window of V / t^alpha
  double min_lower_ratio = 0;  // min over the window of V / t^alpha'
  double upper_ratio_slope = 0;  // d log(V / t^alpha) / d log t; negative means unbounded as t -> 0
  double lower_ratio_slope = 0;  // d log(V / t^alpha') / d log t; positive means it vanishes as t -> 0
  bool passes = false;
  std::string message;
};

BracketReport verify_bracket(const VolumeCurve& curve, const PowerLawFit& fit, const ExponentBracket& bracket,
                             double margin = 0.02);

/// Maximum of |p| over a grid with `resolution` cells per axis (nodes
/// included) restricted to the domain.
double sup_abs_on_domain(const Polynomial& p, const Domain& dom, std::size_t resolution = 256);
/// Minimum counterpart of sup_abs_on_domain.
double inf_abs_on_domain(const Polynomial& p, const Domain& dom, std::size_t resolution = 256);

struct WitnessCheck {
  RationalPoint point;
  bool in_domain = false;  // closed domain
  bool is_zero = false;
  VanishingOrder order;
};

WitnessCheck check_witness(const Polynomial& p, const Domain& dom, const RationalPoint& point);

}  // namespace sublevel
