#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sublevel/domain.hpp"
#include "sublevel/polynomial.hpp"

namespace sublevel {

/// Direction along which every line meets the zero set in finitely many
/// points, certified by a nonzero value of the top homogeneous form.
struct GoodDirection {
  RationalPoint rational_direction;  // the certified (unnormalized) direction
  std::vector<double> unit;          // normalized copy
  Rational top_form_value;           // f_d(rational_direction), nonzero
  unsigned candidates_tried = 0;
};

/// Tries the coordinate axes, then the all-ones vector, then seeded random
/// small-integer directions. Throws std::runtime_error after max_candidates.
GoodDirection find_good_direction(const Polynomial& p, std::uint64_t seed, unsigned max_candidates = 256);

enum class StarVerdictKind { PassesSampled, FailsAt, ZeroNotIsolatedAt };

struct StarVerdict {
  StarVerdictKind kind = StarVerdictKind::PassesSampled;
  std::vector<double> witness;  // empty for PassesSampled
  double radial_value = 0;      // <grad p, x> at the witness
  bool vacuous = false;         // p(0) != 0
  std::size_t samples_checked = 0;
  int sign = 0;                 // common sign of <grad p, x> when passing
};

std::string to_string(StarVerdictKind k);

/// Sampled falsifier for the non-vanishing radial derivative condition on
/// B(0, eps0) \ {0}. Samples avoid a core of radius 1e-9. A sign change is
/// reported with a witness located by bisection on the segment between two
/// samples of opposite sign.
StarVerdict star_shape_check(const Polynomial& p, const Rational& eps0, std::uint64_t seed,
                             std::size_t n_samples = 10000);

/// Exact check of <grad p, x> == deg(p) * p for homogeneous p.
/// Throws std::invalid_argument for non-homogeneous (or zero) input.
bool euler_identity_check(const Polynomial& p);

}  // namespace sublevel
