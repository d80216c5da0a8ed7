#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sublevel/domain.hpp"
#include "sublevel/polynomial.hpp"
#include "sublevel/volume.hpp"

namespace sublevel {

enum class TheoremVerdict { GuaranteedConvergent, GuaranteedDivergent, TheoremSilent };
std::string to_string(TheoremVerdict v);

/// gamma < alpha: convergent; gamma >= alpha': divergent; otherwise silent.
TheoremVerdict classify_convergence(const Rational& gamma, const ExponentBracket& bracket);
TheoremVerdict classify_convergence(double gamma, const ExponentBracket& bracket);

enum class SingularVerdict { Convergent, Divergent, Indeterminate };
std::string to_string(SingularVerdict v);

struct SingularOptions {
  /// Samples for the direct Monte Carlo cross-check; 0 disables it.
  std::size_t direct_samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct SingularReport {
  double gamma = 0;
  SingularVerdict verdict = SingularVerdict::Indeterminate;
  double value = 0;  // meaningful only when Convergent
  double error = 0;
  std::string reason;

  // Stieltjes decomposition over (0, t_min] + (t_min, T] + (T, inf).
  double t_min = 0;
  double t_max = 0;
  double body = 0;            // sum of geometric-midpoint terms over the curve
  double top_mass_term = 0;   // mass above the last grid point, weighted at t_max^-gamma
  double tail = 0;            // power-law extrapolation over (0, t_min]
  double mc_error = 0;
  double discretization_error = 0;
  double tail_error = 0;
  std::optional<double> alpha_hat;
  std::optional<double> stderr_alpha;

  // Integration-by-parts form of the same quantity.
  std::optional<double> by_parts_value;

  // Direct Monte Carlo mean of |p|^-gamma restricted to |p| > t_min,
  // compared with body + top_mass_term.
  std::optional<double> direct_value;
  std::optional<double> direct_error;
  std::optional<bool> direct_agrees;

  std::optional<TheoremVerdict> theorem;
};

/// Estimates int_A |p|^-gamma by the Stieltjes sum against the volume curve
/// plus a power-law tail. The fit is needed only when the curve has mass at
/// t_min and gamma > 0. A decisive bracket fixes the verdict; otherwise
/// |gamma - alpha_hat| <= 2 stderr is Indeterminate.
SingularReport singular_integral(const Polynomial& p, const Domain& dom, double gamma, const VolumeCurve& curve,
                                 const std::optional<PowerLawFit>& fit,
                                 const std::optional<ExponentBracket>& bracket = std::nullopt,
                                 const SingularOptions& options = {});

struct IndexBracket {
  Rational lower;
  Rational upper;
  std::optional<double> fitted;
  std::optional<double> fitted_stderr;

  bool determined() const { return lower == upper; }
};

IndexBracket integration_index(const ExponentBracket& bracket, const std::optional<PowerLawFit>& fit);

}  // namespace sublevel
