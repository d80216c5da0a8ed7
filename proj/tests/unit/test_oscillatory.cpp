#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "sublevel/domain.hpp"
#include "sublevel/oscillatory.hpp"
#include "sublevel/roots.hpp"

using namespace sublevel;
using namespace testing_helpers;

namespace {

const Domain kUnit = Domain::unit_cube(1);
const Domain kSym = Domain::box({Interval(-1, 1)});

AmplitudeSpec centered_bump() { return AmplitudeSpec::smooth_bump({0.0}, 0.25, 0.75); }

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  const GaussRule& g = gauss_legendre(10);
  double s0 = 0, s18 = 0, s19 = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    s0 += g.weights[i];
    s18 += g.weights[i] * std::pow(g.nodes[i], 18);
    s19 += g.weights[i] * std::pow(g.nodes[i], 19);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s18 == doctest::Approx(2.0 / 19).epsilon(1e-13));
  CHECK(std::fabs(s19) < 1e-14);
}

TEST_CASE("amplitudes") {
  const AmplitudeSpec b = AmplitudeSpec::smooth_bump({0.5, 0.5}, 0.1, 0.3);
  const double inside[] = {0.55, 0.5}, edge[] = {0.5, 0.81}, mid[] = {0.7, 0.5};
  CHECK(b(inside) == 1.0);
  CHECK(b(edge) == 0.0);
  CHECK(b(mid) > 0.0);
  CHECK(b(mid) < 1.0);
  CHECK(b.sup_norm() == 1.0);
  // Radial profile drops by 1 over the annulus: the gradient integral is the
  // mean circumference, 2 pi (r0 + r1) / 2 times a smoothstep factor of 1.
  CHECK(b.grad_l1_norm(Domain::unit_cube(2)) == doctest::Approx(std::numbers::pi * 0.4).epsilon(0.01));
  CHECK_NOTHROW(validate_amplitude(b, Domain::unit_cube(2)));
  CHECK_THROWS(validate_amplitude(AmplitudeSpec::smooth_bump({0.9, 0.5}, 0.1, 0.3), Domain::unit_cube(2)));
  CHECK_THROWS(validate_amplitude(b, kUnit));
  CHECK_THROWS(AmplitudeSpec::smooth_bump({0.0}, 0.5, 0.25));
}

TEST_CASE("oscillatory_integral: linear phase closed form") {
  for (double lam : {10.0, 100.0, 1000.0}) {
    const OscillatoryResult r = oscillatory_integral(P("x"), AmplitudeSpec::indicator(), kUnit, lam);
    CHECK(r.converged);
    CHECK(std::fabs(r.magnitude - 2 * std::fabs(std::sin(lam / 2)) / lam) < 1e-8);
    CHECK(r.real == doctest::Approx(std::sin(lam) / lam).epsilon(1e-8).scale(1));
  }
}

TEST_CASE("oscillatory_integral: constant phase and small lambda") {
  const OscillatoryResult c = oscillatory_integral(parse_poly("3+0*x+0*y"), AmplitudeSpec::indicator(),
                                                   Domain::ball(point({"0", "0"}), 2), 57.0);
  CHECK(c.magnitude == doctest::Approx(4 * std::numbers::pi).epsilon(1e-10));
  // Mean of the bump times the domain volume: its integral over the line.
  const OscillatoryResult b = oscillatory_integral(P("x^0*7"), centered_bump(), kSym, 250.0);
  CHECK(b.magnitude == doctest::Approx(0.25 * 2 + 0.5).epsilon(1e-9));
  const OscillatoryResult z = oscillatory_integral(P("x^3-x*y+y^2"), AmplitudeSpec::indicator(),
                                                   Domain::unit_cube(2), 1e-6);
  CHECK(std::fabs(z.magnitude - 1.0) < 1e-4);
}

TEST_CASE("oscillatory_integral: self-convergence and conjugate symmetry") {
  const OscillatoryResult base = oscillatory_integral(P("x^2"), AmplitudeSpec::indicator(), kSym, 100.0);
  const OscillatoryResult fine =
      oscillatory_integral(P("x^2"), AmplitudeSpec::indicator(), kSym, 100.0, QuadratureBudget{10, 40, 10});
  CHECK(base.converged);
  CHECK(std::fabs(base.magnitude - fine.magnitude) <= 1e-6 * fine.magnitude);

  const Polynomial f = P("x^2*y+y^3-x");
  const Domain disk = Domain::ball(point({"0", "0"}), 1);
  for (double lam : {3.0, 40.0}) {
    const double a = oscillatory_integral(f, AmplitudeSpec::indicator(), disk, lam).magnitude;
    const double b = oscillatory_integral(-f, AmplitudeSpec::indicator(), disk, lam).magnitude;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
  CHECK_THROWS(oscillatory_integral(P("x*y*z"), AmplitudeSpec::indicator(), Domain::unit_cube(3), 1.0));
  CHECK_THROWS(oscillatory_integral(P("x"), AmplitudeSpec::indicator(), kUnit, 0.0));
}

TEST_CASE("oscillatory_integral: disk against its radial closed form") {
  // int_{|x|<=1} e^{i lam |x|^2} = pi (e^{i lam} - 1) / (i lam), modulus 2 pi |sin(lam/2)| / lam.
  const Domain disk = Domain::ball(point({"0", "0"}), 1);
  for (double lam : {5.0, 50.0, 500.0}) {
    const double m = oscillatory_integral(P("x^2+y^2"), AmplitudeSpec::indicator(), disk, lam).magnitude;
    CHECK(m == doctest::Approx(2 * std::numbers::pi * std::fabs(std::sin(lam / 2)) / lam).epsilon(1e-7));
  }
}

TEST_CASE("decay sweeps and envelope fits") {
  const DecayCurve lin = decay_sweep(P("x"), AmplitudeSpec::indicator(), kUnit, 1, 1e4, 65);
  for (std::size_t i = 0; i < lin.magnitudes.size(); ++i) {
    CHECK(lin.magnitudes[i] >= 0);
    CHECK(lin.envelope[i] >= lin.magnitudes[i]);
  }
  const DecayFit fl = fit_decay(lin);
  CHECK(fl.beta_hat >= 0.95);
  CHECK(fl.beta_hat <= 1.05);

  const DecayCurve fres = decay_sweep(P("x^2"), centered_bump(), kSym, 1, 1e3, 49);
  const DecayFit ff = fit_decay(fres);
  CHECK(ff.beta_hat >= 0.45);
  CHECK(ff.beta_hat <= 0.55);
  // Stationary phase: |I| -> sqrt(pi / lambda) since the bump is 1 near 0.
  CHECK(fres.magnitudes.back() * std::sqrt(1e3 / std::numbers::pi) == doctest::Approx(1.0).epsilon(0.05));

  const DecayBoundReport rep = decay_bound_check(fres, 2, kSym);
  CHECK(rep.normalized_constant <= 1e3);
  CHECK(rep.spread < 10);
}

TEST_CASE("fit_decay on a synthetic envelope") {
  DecayCurve c;
  for (int i = 0; i <= 40; ++i) {
    const double lam = std::pow(10.0, i / 10.0);
    c.lambda_values.push_back(lam);
    c.magnitudes.push_back(2.5 / std::sqrt(lam));
    c.converged.push_back(true);
    c.error_estimates.push_back(0);
  }
  c.envelope = sliding_envelope(c.lambda_values, c.magnitudes);
  CHECK(c.envelope == sliding_envelope(c.lambda_values, c.magnitudes));
  // Decreasing data: the envelope is the value a quarter decade to the left.
  CHECK(c.envelope[20] == doctest::Approx(c.magnitudes[18]));
  c.envelope = c.magnitudes;
  CHECK(fit_decay(c).beta_hat == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS(fit_decay(c, std::pair{1.0, 1.5}));
}

TEST_CASE("van der Corput: closed form and certified fixtures") {
  const std::vector<double> lams = log_grid(1, 1e4, 129);
  const VdcReport lin = van_der_corput_check(UPoly({0, 1}), Interval(0, 1), 1, lams);
  CHECK(lin.all_hold);
  CHECK(lin.max_ratio <= 2.0 / 3 + 1e-9);
  CHECK(lin.max_ratio >= 0.6);

  const VdcReport sq = van_der_corput_check(UPoly({0, 0, 1}), Interval(1, 2), 2, lams);
  CHECK(sq.all_hold);
  CHECK(sq.points.size() == lams.size());

  try {
    van_der_corput_check(UPoly({0, 0, 1}), Interval(-1, 1), 1, lams);
    FAIL("expected derivative-bound");
  } catch (const HypothesisViolation& e) {
    CHECK(e.name() == "derivative-bound");
  }
  try {
    van_der_corput_check(UPoly({0, 1, 0, 1}), Interval(-1, 1), 1, lams);
    FAIL("expected monotonicity");
  } catch (const HypothesisViolation& e) {
    CHECK(e.name() == "monotonicity");
  }
}

TEST_CASE("gradient split") {
  const GradientSplit lin = gradient_sublevel_split(P("x+0*y"), Domain::unit_cube(2), 0.5, 1, 100000);
  CHECK(lin.vol_At == 0.0);
  CHECK(lin.vol_Bt == 1.0);

  const Domain disk = Domain::ball(point({"0", "0"}), 1);
  const GradientSplit g = gradient_sublevel_split(P("x^2+y^2"), disk, 0.8, 2, 1'000'000);
  CHECK(std::fabs(g.vol_At - std::numbers::pi * 0.16) <= g.ci_half_width);
  CHECK(g.vol_At + g.vol_Bt == g.domain_volume);
  CHECK(g.hits_At + g.hits_Bt == g.total);
  REQUIRE(g.bound_ratio.has_value());
}
