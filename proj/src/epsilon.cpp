#include "sublevel/epsilon.hpp"

#include <algorithm>
#include <cmath>

#include "sublevel/domain.hpp"

namespace sublevel {

Rational derivative_tail(const std::vector<Rational>& eps, const Rational& R, unsigned p) {
  Rational sum(0);
  const unsigned d = static_cast<unsigned>(eps.size()) - 1;
  for (unsigned j = p + 1; j <= d; ++j)
    sum += Rational(factorial(j) / factorial(j - p)) * eps[j] * pow(R, j - p);
  return sum;
}

bool satisfies_smallness(const EpsilonFamily& fam) {
  const Rational cap = fam.m / (fam.d + 1);
  return std::all_of(fam.eps.begin(), fam.eps.end(), [&](const Rational& e) { return e > 0 && e < cap; });
}

bool satisfies_dominance(const EpsilonFamily& fam) {
  for (unsigned p = 0; p < fam.d; ++p)
    if (!(Rational(factorial(p)) * fam.eps[p] > derivative_tail(fam.eps, fam.R, p))) return false;
  return true;
}

EpsilonFamily build_epsilon_family(unsigned d, const Rational& m, const Rational& R) {
  if (d < 1) throw std::invalid_argument("build_epsilon_family: d must be >= 1");
  if (m <= 0 || R <= 0) throw std::invalid_argument("build_epsilon_family: m and R must be positive");
  std::vector<Rational> raw(d + 1, Rational(0));
  raw[d] = 1;
  for (unsigned p = d; p-- > 0;) raw[p] = 2 * derivative_tail(raw, R, p) / Rational(factorial(p));

  const Rational top = *std::max_element(raw.begin(), raw.end());
  const Rational rho = m / (2 * Rational(d + 1) * top);

  EpsilonFamily fam;
  fam.d = d;
  fam.m = m;
  fam.R = R;
  fam.eps.reserve(d + 1);
  for (const auto& e : raw) fam.eps.push_back(e * rho);
  fam.lambdas.resize(d + 1);
  for (unsigned p = 0; p < d; ++p)
    fam.lambdas[p] = Rational(factorial(p)) * fam.eps[p] - derivative_tail(fam.eps, R, p);
  fam.lambdas[d] = Rational(factorial(d)) * fam.eps[d];
  fam.lambda = *std::min_element(fam.lambdas.begin(), fam.lambdas.end());
  return fam;
}

std::string to_string(DichotomyBranch b) {
  switch (b) {
    case DichotomyBranch::DerivativeCase: return "DerivativeCase";
    case DichotomyBranch::ConstantCase: return "ConstantCase";
    case DichotomyBranch::Violation: return "Violation";
  }
  return "?";
}

DichotomyVerdict dichotomy_check(const std::vector<Rational>& a, const EpsilonFamily& fam, unsigned n_grid) {
  if (a.size() != fam.d + 1) throw std::invalid_argument("dichotomy_check: need d + 1 coefficients");
  if (n_grid < 1000) throw std::invalid_argument("dichotomy_check: n_grid must be >= 1000");
  Rational l1(0);
  for (const auto& v : a) l1 += abs(v);
  if (l1 < fam.m) throw std::invalid_argument("dichotomy_check: coefficient vector not in K (l1 norm < m)");

  const UPoly g(a);
  const Interval I = fam.interval();
  DichotomyVerdict v;

  int chosen = -1;
  for (int p = static_cast<int>(fam.d); p >= 0; --p) {
    if (abs(a[static_cast<std::size_t>(p)]) > fam.eps[static_cast<std::size_t>(p)]) {
      chosen = p;
      break;
    }
  }
  if (chosen < 0) {
    v.detail = "no coefficient exceeds its threshold";
    return v;
  }

  const double lambda = to_double(fam.lambda);
  const double R = to_double(fam.R);
  if (chosen >= 1) {
    const unsigned p = static_cast<unsigned>(chosen);
    UPoly dg = g.derivative(p);
    if (!abs_bounded_below_on(dg, I, fam.lambda)) {
      v.detail = "derivative bound fails for p = " + std::to_string(p);
      return v;
    }
    // Floating spot check on a uniform grid; the exact certificate above is authoritative.
    for (unsigned k = 0; k <= n_grid; ++k) {
      double s = -R + 2 * R * k / n_grid;
      if (std::fabs(dg(s)) < lambda * (1 - 1e-12)) {
        v.detail = "grid spot check disagrees with certificate";
        return v;
      }
    }
    v.branch = DichotomyBranch::DerivativeCase;
    v.p = p;
    return v;
  }

  const Rational slack = abs(a[0]) - fam.lambda;
  const UPoly rest = g - UPoly::constant(a[0]);
  if (slack < 0 || !abs_bounded_above_on(rest, I, slack)) {
    v.detail = "constant-term dominance fails";
    return v;
  }
  v.branch = DichotomyBranch::ConstantCase;
  return v;
}

namespace {

// Rational in [-1, 1] with denominator up to 64; the endpoints come up often.
Rational unit_rational(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> den(1, 64);
  const int q = den(gen);
  std::uniform_int_distribution<int> num(-q, q);
  Rational r(num(gen), q);
  r.canonicalize();
  return r;
}

Rational random_sign(std::mt19937_64& gen) { return (gen() & 1) ? Rational(1) : Rational(-1); }

Rational l1_norm(const std::vector<Rational>& a) {
  Rational s(0);
  for (const auto& v : a) s += abs(v);
  return s;
}

// Bumps |a[p]| until the vector reaches l1 = m.
void push_into_k(std::vector<Rational>& a, const Rational& m, std::size_t p) {
  const Rational l1 = l1_norm(a);
  if (l1 >= m) return;
  const Rational s = a[p] < 0 ? Rational(-1) : Rational(1);
  a[p] = s * (abs(a[p]) + (m - l1));
}

}  // namespace

std::vector<Rational> random_coefficients_in_k(const EpsilonFamily& fam, std::mt19937_64& gen, unsigned strategy) {
  const std::size_t n = fam.d + 1;
  std::vector<Rational> a(n);
  std::uniform_int_distribution<std::size_t> pick(0, fam.d);
  std::uniform_int_distribution<int> tiny(1, 24);
  auto just_above = [&](std::size_t p) -> Rational {
    return random_sign(gen) * fam.eps[p] * (Rational(1) + Rational(1, Integer(1) << tiny(gen)));
  };
  switch (strategy % 4) {
    case 0: {
      for (auto& v : a) v = 2 * fam.m * unit_rational(gen);
      push_into_k(a, fam.m, pick(gen));
      break;
    }
    case 1:
    case 3: {
      const std::size_t p = strategy % 4 == 3 ? fam.d : pick(gen);
      for (std::size_t j = p + 1; j < n; ++j) a[j] = fam.eps[j] * unit_rational(gen);
      a[p] = just_above(p);
      for (std::size_t j = 0; j < p; ++j) a[j] = 2 * fam.m * unit_rational(gen);
      push_into_k(a, fam.m, p);
      break;
    }
    case 2: {
      Rational rest(0);
      for (std::size_t j = 1; j < n; ++j) {
        a[j] = fam.eps[j] * unit_rational(gen);
        rest += abs(a[j]);
      }
      a[0] = random_sign(gen) * (fam.m - rest + fam.m * abs(unit_rational(gen)) / 8);
      break;
    }
  }
  return a;
}

DichotomyTally run_dichotomy_trials(const EpsilonFamily& fam, std::size_t trials, std::uint64_t seed,
                                    unsigned workers) {
  std::vector<DichotomyVerdict> verdicts(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    std::mt19937_64 gen(derive_seed(seed, i));
    verdicts[i] = dichotomy_check(random_coefficients_in_k(fam, gen, static_cast<unsigned>(i % 4)), fam);
  });
  DichotomyTally t;
  t.trials = trials;
  t.by_order.assign(fam.d + 1, 0);
  for (const auto& v : verdicts) {
    switch (v.branch) {
      case DichotomyBranch::DerivativeCase:
        ++t.derivative_case;
        ++t.by_order[v.p];
        break;
      case DichotomyBranch::ConstantCase: ++t.constant_case; break;
      case DichotomyBranch::Violation:
        ++t.violations;
        if (t.violation_details.size() < 5) t.violation_details.push_back(v.detail);
        break;
    }
  }
  return t;
}

}  // namespace sublevel
