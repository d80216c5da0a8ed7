// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "sublevel/commands.hpp"
#include "sublevel/domain.hpp"
#include "sublevel/epsilon.hpp"
#include "sublevel/geometry.hpp"
#include "sublevel/oscillatory.hpp"
#include "sublevel/roots.hpp"
#include "sublevel/singular.hpp"
#include "sublevel/volume.hpp"

using namespace sublevel;
using namespace testing_helpers;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

const Domain kSquare = Domain::unit_cube(2);
const Domain kDisk = Domain::ball(point({"0", "0"}), 1);

// Product example: x^2 y^2 (x^2 + y^2) on the unit square.
void product_example(Outcome& o) {
  const Polynomial f = P("x^2*y^2*(x^2+y^2)");
  const VolumeCurve curve = volume_sweep(f, kSquare, 1e-8, 1e-2, 40, MonteCarloMethod{42, 10'000'000});
  const PowerLawFit fit = fit_power_law(curve);
  const ExponentBracket b = exponent_bracket(f, kSquare, 2, 1, false);
  const BracketReport rep = verify_bracket(curve, fit, b);
  o.detail << "alpha_hat=" << fit.alpha_hat << " (+-" << fit.stderr_alpha << ") bracket=[" << to_string(b.alpha)
           << "," << to_string(b.alpha_prime) << "] verify=" << (rep.passes ? "pass" : "fail") << ' ';
  o.require(fit.alpha_hat >= 0.30 && fit.alpha_hat <= 0.36, "alpha_hat in [0.30, 0.36]");
  o.require(b.alpha == frac(1, 6) && b.alpha_prime == frac(1, 2), "bracket [1/6, 1/2]");
  o.require(rep.passes, "verify_bracket passes");
}

// Disk example: x^2 + y^2 on the unit disk, V(t) = pi t for t <= 1.
void disk_example(Outcome& o) {
  const Polynomial g = P("x^2+y^2");
  const VolumeCurve sweep = volume_sweep(g, kDisk, 1e-4, 1e-1, 40, MonteCarloMethod{42, 10'000'000});
  std::size_t outside = 0;
  for (std::size_t i = 0; i < sweep.size(); ++i)
    if (std::fabs(sweep.estimates[i] - kPi * sweep.t_values[i]) > sweep.ci_half_widths[i]) ++outside;
  const PowerLawFit fit = fit_power_law(sweep);
  const ExponentBracket b = exponent_bracket(g, kDisk, 2, 0, true);

  // The singular integral needs the curve up to sup |g| = 1; the sweep fit
  // supplies the exponent for the tail below t_min.
  const std::vector<double> grid = log_grid(1e-4, 1 + 1e-6, 60);
  const VolumeCurve curve = volume_curve(g, kDisk, grid, MonteCarloMethod{42, 10'000'000});
  const SingularOptions opts{1'000'000, 42, 1};
  const SingularReport s09 = singular_integral(g, kDisk, 0.9, curve, fit, b, opts);
  const SingularReport s10 = singular_integral(g, kDisk, 1.0, curve, fit, b, opts);

  o.detail << "points_outside_ci=" << outside << " alpha_hat=" << fit.alpha_hat << " gamma0.9=" << s09.value
           << " (" << to_string(s09.verdict) << ", 10pi=" << 10 * kPi << ") gamma1.0=" << to_string(s10.verdict)
           << ' ';
  o.require(outside == 0, "every estimate within its CI of pi t");
  o.require(fit.alpha_hat >= 0.98 && fit.alpha_hat <= 1.02, "alpha_hat in [0.98, 1.02]");
  o.require(b.alpha == 1 && b.alpha_prime == 1, "bracket [1, 1]");
  o.require(s09.verdict == SingularVerdict::Convergent, "gamma 0.9 convergent");
  o.require(std::fabs(s09.value - 10 * kPi) <= 0.05 * 10 * kPi, "gamma 0.9 within 5% of 10 pi");
  o.require(s10.verdict == SingularVerdict::Divergent, "gamma 1.0 divergent");
}

double riemann_measure(const UPoly& p, const Interval& I, double t, std::size_t n) {
  const double lo = to_double(I.lo), hi = to_double(I.hi), h = (hi - lo) / static_cast<double>(n);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (std::fabs(p(lo + (static_cast<double>(i) + 0.5) * h)) <= t) ++hits;
  return static_cast<double>(hits) * h;
}

void exact_1d(Outcome& o) {
  const Rational tol = Q("1e-12");
  const Interval sym(-1, 1);
  double worst = 0;
  for (unsigned d = 1; d <= 8; ++d) {
    std::vector<Rational> c(d + 1, Rational(0));
    c[d] = 1;
    const UPoly s_d(c);
    for (unsigned k = 0; k < 20; ++k) {
      const Rational t = frac(1, 1L << k);
      const double expect = 2 * std::pow(to_double(t), 1.0 / d);
      worst = std::max(worst, std::fabs(sublevel_measure_1d(s_d, sym, t, tol) - expect));
    }
  }
  o.detail << "max |measure - 2 t^(1/d)|=" << worst << ' ';
  o.require(worst <= 1e-9, "s^d closed forms to 1e-9");

  // A midpoint sum with n cells misclassifies at most one cell per
  // breakpoint, and there are at most 2 deg breakpoints.
  std::mt19937_64 gen(derive_seed(7, 3));
  std::uniform_int_distribution<unsigned> deg(1, 6);
  std::uniform_int_distribution<int> coef(-50, 50), tt(1, 400);
  const std::size_t n = 1'000'000;
  const Interval I(-1, 2);
  std::size_t disagree = 0;
  double worst_oracle = 0;
  for (int i = 0; i < 50; ++i) {
    const unsigned dd = deg(gen);
    std::vector<Rational> c(dd + 1);
    for (auto& q : c) q = frac(coef(gen), 10);
    if (c.back() == 0) c.back() = 1;
    const UPoly p(c);
    const Rational t = frac(tt(gen), 100);
    const double diff = std::fabs(sublevel_measure_1d(p, I, t, tol) - riemann_measure(p, I, to_double(t), n));
    worst_oracle = std::max(worst_oracle, diff);
    if (diff > 2.0 * dd * 3.0 / static_cast<double>(n)) ++disagree;
  }
  o.detail << "riemann max diff=" << worst_oracle << " disagreements=" << disagree << "/50 ";
  o.require(disagree == 0, "Riemann oracle agreement on 50 polynomials");
}

void epsilon_families(Outcome& o) {
  const char* ms[] = {"1/2", "1", "2"};
  std::size_t families = 0, conditions_ok = 0, index = 0;
  DichotomyTally total;
  for (unsigned d = 1; d <= 8; ++d)
    for (const char* m : ms)
      for (const char* R : ms) {
        const EpsilonFamily fam = build_epsilon_family(d, Q(m), Q(R));
        ++families;
        if (satisfies_smallness(fam) && satisfies_dominance(fam)) ++conditions_ok;
        // 10,000 trials over 72 families: 139 for the first 64, 138 after.
        const std::size_t trials = index < 64 ? 139 : 138;
        const DichotomyTally t = run_dichotomy_trials(fam, trials, derive_seed(2024, index), 1);
        total.trials += t.trials;
        total.derivative_case += t.derivative_case;
        total.constant_case += t.constant_case;
        total.violations += t.violations;
        ++index;
      }
  o.detail << "families=" << families << " conditions_exact=" << conditions_ok << " trials=" << total.trials
           << " derivative=" << total.derivative_case << " constant=" << total.constant_case
           << " violations=" << total.violations << ' ';
  o.require(families == 72 && conditions_ok == 72, "smallness and dominance for all 72 families");
  o.require(total.trials == 10'000, "10,000 trials");
  o.require(total.violations == 0, "zero violations");
}

void euler_and_star(Outcome& o) {
  std::mt19937_64 gen(derive_seed(11, 5));
  std::uniform_int_distribution<std::size_t> nv(1, 4);
  std::uniform_int_distribution<unsigned> deg(1, 8), terms(1, 6);
  std::size_t ok = 0;
  for (int i = 0; i < 200; ++i)
    if (euler_identity_check(random_homogeneous(gen, nv(gen), deg(gen), terms(gen)))) ++ok;
  const StarVerdict good = star_shape_check(P("x^2+y^2"), 1, 0x57A2);
  const StarVerdict bad = star_shape_check(P("x^2-y^2"), 1, 0x57A2);
  o.detail << "euler=" << ok << "/200 star(x^2+y^2)=" << to_string(good.kind) << " star(x^2-y^2)="
           << to_string(bad.kind);
  if (!bad.witness.empty()) o.detail << " at (" << bad.witness[0] << "," << bad.witness[1] << ")";
  o.detail << ' ';
  o.require(ok == 200, "Euler identity on 200 homogeneous polynomials");
  o.require(good.kind == StarVerdictKind::PassesSampled, "x^2+y^2 passes");
  o.require(bad.kind == StarVerdictKind::FailsAt && bad.witness.size() == 2, "x^2-y^2 fails with a witness");
}

void van_der_corput(Outcome& o) {
  // 32 points per decade over [1, 1e4].
  const std::vector<double> lams = log_grid(1, 1e4, 129);
  struct Fixture {
    const char* poly;
    const char* lo;
    const char* hi;
    const char* t;
  };
  // Each has |P'| >= t and P' monotone on [lo, hi].
  const Fixture fixtures[] = {
      {"s", "0", "1", "1"},           {"s^2", "1", "2", "2"},         {"s^3", "1", "2", "3"},
      {"s^2+s", "0", "1", "1"},       {"-s^2", "1/2", "3/2", "1"},    {"s^3+s", "0", "1", "1"},
      {"2*s", "-1", "1", "2"},        {"s^4", "1", "3/2", "4"},       {"s^2-3*s", "2", "3", "1"},
      {"1/3*s^3+2*s", "0", "2", "2"},
  };
  std::size_t held = 0;
  double worst_ratio = 0;
  for (const Fixture& f : fixtures) {
    const Polynomial p = parse_poly(f.poly, std::vector<std::string>{"s"});
    std::vector<Rational> c(p.degree().value() + 1, Rational(0));
    for (const auto& [e, v] : p.terms()) c[e.empty() ? 0 : e[0]] = v;
    const VdcReport r = van_der_corput_check(UPoly(c), Interval(Q(f.lo), Q(f.hi)), Q(f.t), lams);
    if (r.all_hold && r.points.size() == lams.size()) ++held;
    worst_ratio = std::max(worst_ratio, r.max_ratio);
  }
  // P = s on [0, 1]: |int e^{i lambda s}| = 2 |sin(lambda / 2)| / lambda.
  const VdcReport lin = van_der_corput_check(UPoly({0, 1}), Interval(0, 1), 1, lams);
  double worst_closed = 0;
  for (const VdcPoint& pt : lin.points)
    worst_closed = std::max(worst_closed, std::fabs(pt.magnitude - 2 * std::fabs(std::sin(pt.lambda / 2)) / pt.lambda));
  o.detail << "fixtures_holding=" << held << "/10 max |I|/bound=" << worst_ratio << " closed_form_err=" << worst_closed
           << ' ';
  o.require(held == 10, "bound holds at every lambda for 10 fixtures");
  o.require(worst_closed <= 1e-8, "P = s matches the closed form to 1e-8");
}

void decay(Outcome& o) {
  const Domain sym = Domain::box({Interval(-1, 1)});
  const DecayCurve fres = decay_sweep(P("x^2"), AmplitudeSpec::smooth_bump({0.0}, 0.25, 0.75), sym, 1, 1e3, 49);
  const DecayFit fit = fit_decay(fres);

  // Indicator amplitude on the square: the bump's support must lie inside
  // the domain, which would cut away the zero set at the corner.
  const DecayCurve sq = decay_sweep(P("x^4*y^2+x^2*y^4"), AmplitudeSpec::indicator(), kSquare, 1, 1e3, 49);
  const DecayBoundReport rep = decay_bound_check(sq, 6, kSquare);
  std::size_t unconverged = 0;
  for (bool c : fres.converged) unconverged += !c;
  for (bool c : sq.converged) unconverged += !c;
  o.detail << "beta_hat(x^2)=" << fit.beta_hat << " envelope*lambda^(1/6) max/min=" << rep.spread
           << " unconverged=" << unconverged << ' ';
  o.require(fit.beta_hat >= 0.45 && fit.beta_hat <= 0.55, "beta_hat in [0.45, 0.55]");
  o.require(rep.spread <= 20, "max/min of envelope * lambda^(1/6) <= 20");
}

void determinism(Outcome& o) {
  auto base = [] {
    AnalysisConfig c;
    c.seed = 42;
    return c;
  };
  std::vector<std::pair<std::string, AnalysisConfig>> runs;
  {
    AnalysisConfig c = base();
    c.poly = "x^4*y^2+x^2*y^4";
    c.domain = domain_to_json(kSquare);
    c.witnesses = {{"1/2", "0"}};
    c.d_prime = 2;
    c.k_prime = 1;
    runs.emplace_back("analyze", c);
    c.samples = 500'000;
    c.t_min = 1e-8;
    c.t_max = 1e-2;
    runs.emplace_back("volume", c);
    c.format = "csv";
    runs.emplace_back("volume", c);
  }
  {
    AnalysisConfig c = base();
    c.poly = "x^2+y^2";
    c.domain = domain_to_json(kDisk);
    c.samples = 500'000;
    c.direct_samples = 200'000;
    c.singular_t_min = 1e-3;
    c.gammas = {0.5, 0.9, 1.0};
    runs.emplace_back("singular", c);
    runs.emplace_back("star-check", c);
  }
  {
    AnalysisConfig c = base();
    c.poly = "x^2";
    c.domain = Json::parse(R"({"kind":"box","intervals":[[-1,1]]})");
    c.amplitude = Json::parse(R"({"kind":"smooth_bump","center":[0],"inner":"1/4","outer":"3/4"})");
    c.lambda_max = 100;
    c.lambda_points = 17;
    runs.emplace_back("oscillatory", c);
  }
  {
    AnalysisConfig c = base();
    c.lemma_d = 4;
    c.lemma_m = "1/2";
    c.lemma_R = "2";
    c.trials = 2000;
    runs.emplace_back("lemma2", c);
  }
  {
    AnalysisConfig c = base();
    c.poly = "s^2";
    c.vdc_lo = "1";
    c.vdc_hi = "2";
    c.vdc_t = "2";
    runs.emplace_back("vdc-check", c);
  }
  std::size_t identical = 0;
  for (auto& [name, cfg] : runs) {
    cfg.workers = 1;
    const std::string a = run_command(name, cfg).text;
    const std::string b = run_command(name, cfg).text;
    cfg.workers = 8;
    const std::string c = run_command(name, cfg).text;
    if (a == b && a == c && !a.empty()) {
      ++identical;
    } else {
      o.detail << name << " differs; ";
    }
  }
  o.detail << "identical=" << identical << "/" << runs.size() << ' ';
  o.require(identical == runs.size(), "byte-identical across repeats and 1 vs 8 workers");
}

void negative_control(Outcome& o) {
  VolumeCurve v;
  v.t_values = log_grid(1e-4, 1e-1, 30);
  for (double t : v.t_values) {
    v.estimates.push_back(t * t);
    v.ci_half_widths.push_back(0);
    v.hits.push_back(0);
  }
  v.method = GridMethod{};
  v.domain_volume = 1;
  ExponentBracket one{1, 1, "synthetic", "synthetic"};
  const BracketReport rep = verify_bracket(v, fit_power_law(v), one);
  o.detail << "alpha_hat=" << rep.alpha_hat << " verdict=" << (rep.passes ? "pass" : "violation") << " ("
           << rep.message << ") ";
  o.require(!rep.passes, "V = t^2 is reported as a violation of [1, 1]");
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0: none
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "product example volume exponent", 120, product_example},
      {2, "disk volume and singular integrals", 60, disk_example},
      {3, "exact 1-D sub-level measures", 0, exact_1d},
      {4, "epsilon families and dichotomy", 60, epsilon_families},
      {5, "Euler identity and star shape", 0, euler_and_star},
      {6, "van der Corput bound", 0, van_der_corput},
      {7, "oscillatory decay rates", 300, decay},
      {8, "determinism", 0, determinism},
      {9, "negative control", 0, negative_control},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "] ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      o.pass = false;
      o.detail << "[failed: runtime over " << c.time_limit_s << " s] ";
    }
    if (!o.pass) ++failed;
    std::printf("%s %d %s: %s(%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
