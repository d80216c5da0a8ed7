#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "sublevel/domain.hpp"
#include "sublevel/singular.hpp"

using namespace sublevel;
using namespace testing_helpers;

namespace {

const Domain kDisk = Domain::ball(point({"0", "0"}), 1);

struct Fixture {
  VolumeCurve curve;
  PowerLawFit fit;
};

Fixture disk_fixture(std::size_t samples, std::uint64_t seed) {
  const Polynomial g = P("x^2+y^2");
  const MonteCarloMethod mc{seed, samples};
  const VolumeCurve sweep = volume_sweep(g, kDisk, 1e-3, 1e-1, 20, mc);
  const double T = sup_abs_on_domain(g, kDisk);
  return {volume_curve(g, kDisk, log_grid(1e-3, T * (1 + 1e-6), 40), mc), fit_power_law(sweep)};
}

}  // namespace

TEST_CASE("classify_convergence") {
  const ExponentBracket sixth = exponent_bracket(P("x^6"), Domain::box({Interval(-1, 1)}), 6, 0, false);
  CHECK(sixth.alpha == Q("1/6"));
  CHECK(sixth.alpha_prime == Q("1/6"));
  CHECK(classify_convergence(Q("1/10"), sixth) == TheoremVerdict::GuaranteedConvergent);
  CHECK(classify_convergence(Q("1/6"), sixth) == TheoremVerdict::GuaranteedDivergent);

  const ExponentBracket one = exponent_bracket(P("x^2+y^2"), kDisk, 2, 0, true);
  CHECK(classify_convergence(0.5, one) == TheoremVerdict::GuaranteedConvergent);
  CHECK(classify_convergence(1.0, one) == TheoremVerdict::GuaranteedDivergent);

  const ExponentBracket gap = exponent_bracket(P("x^4*y^2+x^2*y^4"), Domain::unit_cube(2), 2, 1, false);
  CHECK(classify_convergence(0.3, gap) == TheoremVerdict::TheoremSilent);
  CHECK(classify_convergence(0.1, gap) == TheoremVerdict::GuaranteedConvergent);
  CHECK(classify_convergence(0.5, gap) == TheoremVerdict::GuaranteedDivergent);
}

TEST_CASE("integration_index") {
  const IndexBracket a = integration_index(exponent_bracket(P("x^2+y^2"), kDisk, 2, 0, true), std::nullopt);
  CHECK(a.determined());
  CHECK(a.lower == 1);
  const IndexBracket b =
      integration_index(exponent_bracket(P("x^4*y^2+x^2*y^4"), Domain::unit_cube(2), 2, 1, false), std::nullopt);
  CHECK(!b.determined());
  CHECK(b.lower == Q("1/6"));
  CHECK(b.upper == Q("1/2"));

  const Polynomial x = P("x");
  const VolumeCurve c = volume_sweep(x, Domain::unit_cube(1), 1e-4, 1e-1, 20, MonteCarloMethod{1, 1'000'000});
  const IndexBracket i = integration_index(exponent_bracket(x, Domain::unit_cube(1), 1, 0, false), fit_power_law(c));
  CHECK(i.determined());
  REQUIRE(i.fitted.has_value());
  CHECK(*i.fitted == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("singular_integral: disk below and at the critical exponent") {
  const Fixture f = disk_fixture(2'000'000, 11);
  const ExponentBracket one = exponent_bracket(P("x^2+y^2"), kDisk, 2, 0, true);
  SingularOptions opts;
  opts.seed = 11;
  const SingularReport half = singular_integral(P("x^2+y^2"), kDisk, 0.5, f.curve, f.fit, one, opts);
  CHECK(half.verdict == SingularVerdict::Convergent);
  CHECK(half.value == doctest::Approx(2 * std::numbers::pi).epsilon(0.01));
  REQUIRE(half.by_parts_value.has_value());
  CHECK(*half.by_parts_value == doctest::Approx(half.value).epsilon(0.01));
  CHECK(half.direct_agrees.value_or(false));

  const SingularReport nine = singular_integral(P("x^2+y^2"), kDisk, 0.9, f.curve, f.fit, one, opts);
  CHECK(nine.verdict == SingularVerdict::Convergent);
  CHECK(nine.value == doctest::Approx(10 * std::numbers::pi).epsilon(0.05));

  const SingularReport crit = singular_integral(P("x^2+y^2"), kDisk, 1.0, f.curve, f.fit, one, opts);
  CHECK(crit.verdict == SingularVerdict::Divergent);
  CHECK(singular_integral(P("x^2+y^2"), kDisk, 1.3, f.curve, f.fit, std::nullopt, opts).verdict ==
        SingularVerdict::Divergent);
}

TEST_CASE("singular_integral: gamma = 0 is the domain volume") {
  const Fixture f = disk_fixture(200'000, 3);
  const SingularReport r = singular_integral(P("x^2+y^2"), kDisk, 0.0, f.curve, f.fit, std::nullopt, {});
  CHECK(r.verdict == SingularVerdict::Convergent);
  CHECK(std::fabs(r.value - std::numbers::pi) <= 1e-9 + r.error);
}

TEST_CASE("singular_integral: monotone in gamma when T <= 1") {
  const Fixture f = disk_fixture(500'000, 5);
  double prev = 0;
  for (double g : {0.1, 0.3, 0.5, 0.7}) {
    const SingularReport r = singular_integral(P("x^2+y^2"), kDisk, g, f.curve, f.fit, std::nullopt, {0});
    REQUIRE(r.verdict == SingularVerdict::Convergent);
    CHECK(r.value >= prev);
    prev = r.value;
  }
}

TEST_CASE("singular_integral: bounded integrands against quadrature") {
  // int over the disk of (1 + r^2)^-gamma = pi (2^(1-gamma) - 1) / (1 - gamma).
  const Polynomial p = P("x^2+y^2+1");
  const MonteCarloMethod mc{17, 1'000'000};
  const double T = sup_abs_on_domain(p, kDisk);
  const VolumeCurve c = volume_curve(p, kDisk, log_grid(0.5, T * (1 + 1e-6), 200), mc);
  for (double g : {0.5, 2.0, 3.0}) {
    const SingularReport r = singular_integral(p, kDisk, g, c, std::nullopt, std::nullopt, {0, 0, 1});
    REQUIRE(r.verdict == SingularVerdict::Convergent);
    const double exact = std::numbers::pi * (std::pow(2.0, 1 - g) - 1) / (1 - g);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("singular_integral: Stieltjes sum agrees with direct Monte Carlo on random fixtures") {
  std::mt19937_64 gen(79);
  int checked = 0;
  while (checked < 10) {
    const Polynomial q = random_poly(gen, 2, 3, 3);
    const Polynomial p = q * q + P("1/2+0*x+0*y");
    const Domain d = Domain::unit_cube(2);
    const MonteCarloMethod mc{static_cast<std::uint64_t>(checked), 200'000};
    const double T = sup_abs_on_domain(p, d);
    const VolumeCurve c = volume_curve(p, d, log_grid(0.25, T * (1 + 1e-6), 60), mc);
    SingularOptions opts;
    opts.seed = static_cast<std::uint64_t>(checked);
    opts.direct_samples = 200'000;
    const SingularReport r = singular_integral(p, d, 1.5, c, std::nullopt, std::nullopt, opts);
    REQUIRE(r.direct_agrees.has_value());
    CHECK(*r.direct_agrees);
    CHECK(r.verdict == SingularVerdict::Convergent);
    ++checked;
  }
}

TEST_CASE("singular_integral: theorem and empirical verdicts never contradict") {
  const Fixture f = disk_fixture(500'000, 9);
  const ExponentBracket one = exponent_bracket(P("x^2+y^2"), kDisk, 2, 0, true);
  for (double g : {0.2, 0.6, 0.95, 1.0, 1.05, 1.5}) {
    const SingularReport r = singular_integral(P("x^2+y^2"), kDisk, g, f.curve, f.fit, one, {0});
    REQUIRE(r.theorem.has_value());
    if (*r.theorem == TheoremVerdict::GuaranteedConvergent) CHECK(r.verdict != SingularVerdict::Divergent);
    if (*r.theorem == TheoremVerdict::GuaranteedDivergent) CHECK(r.verdict != SingularVerdict::Convergent);
  }
}

TEST_CASE("singular_integral: argument checks") {
  const Fixture f = disk_fixture(20'000, 1);
  CHECK_THROWS(singular_integral(P("x^2+y^2"), kDisk, -0.5, f.curve, f.fit, std::nullopt, {}));
  CHECK_THROWS(singular_integral(P("x^2+y^2"), kDisk, 0.5, VolumeCurve{}, f.fit, std::nullopt, {}));
  // Mass at t_min and no fit.
  CHECK_THROWS(singular_integral(P("x^2+y^2"), kDisk, 0.5, f.curve, std::nullopt, std::nullopt, {}));
}
