#include "helpers.hpp"
#include "sublevel/domain.hpp"
#include "sublevel/epsilon.hpp"

using namespace sublevel;
using namespace testing_helpers;

namespace {

const char* kScales[] = {"1/2", "1", "2"};

// Independent check of the two conditions straight from their definitions.
bool conditions_hold(const EpsilonFamily& f) {
  const unsigned d = f.d;
  for (unsigned p = 0; p <= d; ++p) {
    if (!(f.eps[p] > 0)) return false;
    if (!(f.eps[p] < f.m / Rational(d + 1))) return false;
  }
  for (unsigned p = 0; p < d; ++p) {
    Rational tail = 0;
    for (unsigned j = p + 1; j <= d; ++j) tail += Rational(factorial(j) / factorial(j - p)) * f.eps[j] * pow(f.R, j - p);
    if (!(Rational(factorial(p)) * f.eps[p] > tail)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("build_epsilon_family: hand-executed d = 1") {
  const EpsilonFamily f = build_epsilon_family(1, 1, 1);
  REQUIRE(f.eps.size() == 2);
  CHECK(f.eps[0] == Q("1/4"));
  CHECK(f.eps[1] == Q("1/8"));
  CHECK(f.lambdas[0] == Q("1/8"));
  CHECK(f.lambdas[1] == Q("1/8"));
  CHECK(f.lambda == Q("1/8"));
}

TEST_CASE("build_epsilon_family: both conditions exactly, d <= 8") {
  for (unsigned d = 1; d <= 8; ++d)
    for (const char* m : kScales)
      for (const char* R : kScales) {
        const EpsilonFamily f = build_epsilon_family(d, Q(m), Q(R));
        CHECK(conditions_hold(f));
        CHECK(satisfies_smallness(f));
        CHECK(satisfies_dominance(f));
        CHECK(f.lambda > 0);
        Rational mn = f.lambdas[0];
        for (const auto& l : f.lambdas) mn = l < mn ? l : mn;
        CHECK(f.lambda == mn);
        CHECK(f.lambdas[d] == Rational(factorial(d)) * f.eps[d]);
        for (unsigned p = 0; p < d; ++p) CHECK(f.lambdas[p] == Rational(factorial(p)) * f.eps[p] / 2);
      }
}

TEST_CASE("build_epsilon_family: homogeneous in m") {
  for (unsigned d = 1; d <= 6; ++d) {
    const EpsilonFamily a = build_epsilon_family(d, 1, Q("3/2"));
    const EpsilonFamily b = build_epsilon_family(d, Q("7/3"), Q("3/2"));
    for (unsigned p = 0; p <= d; ++p) {
      CHECK(b.eps[p] == a.eps[p] * Q("7/3"));
      CHECK(b.lambdas[p] == a.lambdas[p] * Q("7/3"));
    }
  }
}

TEST_CASE("build_epsilon_family: argument checks") {
  CHECK_THROWS(build_epsilon_family(0, 1, 1));
  CHECK_THROWS(build_epsilon_family(2, 0, 1));
  CHECK_THROWS(build_epsilon_family(2, 1, -1));
}

TEST_CASE("dichotomy_check: worked cases") {
  const EpsilonFamily f = build_epsilon_family(1, 1, 1);
  const DichotomyVerdict a = dichotomy_check({Rational(0), Rational(1)}, f);
  CHECK(a.branch == DichotomyBranch::DerivativeCase);
  CHECK(a.p == 1);
  const DichotomyVerdict b = dichotomy_check({Rational(1), Q("1/10")}, f);
  CHECK(b.branch == DichotomyBranch::ConstantCase);
  CHECK_THROWS_AS(dichotomy_check({Q("1/100"), Q("1/100")}, f), std::invalid_argument);
  CHECK_THROWS(dichotomy_check({Rational(1)}, f));
}

TEST_CASE("dichotomy_check: rejection-sampled coefficients never violate") {
  // Coefficients uniform on a 1/100 lattice in [-10, 10], kept when in K.
  std::mt19937_64 gen(53);
  std::uniform_int_distribution<int> coef(-1000, 1000);
  std::size_t checked = 0;
  for (unsigned d = 1; d <= 5; ++d)
    for (const char* m : kScales)
      for (const char* R : kScales) {
        const EpsilonFamily f = build_epsilon_family(d, Q(m), Q(R));
        for (int trial = 0; trial < 40; ++trial) {
          std::vector<Rational> a(d + 1);
          Rational l1;
          do {
            l1 = 0;
            for (auto& q : a) {
              q = Rational(coef(gen), 100);
              q.canonicalize();
              l1 += abs(q);
            }
          } while (l1 < f.m);
          const DichotomyVerdict v = dichotomy_check(a, f);
          CHECK_MESSAGE(v.branch != DichotomyBranch::Violation, v.detail);
          ++checked;
        }
      }
  CHECK(checked == 5 * 9 * 40);
}

TEST_CASE("random_coefficients_in_k: membership and branch coverage") {
  const EpsilonFamily f = build_epsilon_family(4, 1, 2);
  std::mt19937_64 gen(59);
  for (unsigned s = 0; s < 4; ++s)
    for (int i = 0; i < 50; ++i) {
      const auto a = random_coefficients_in_k(f, gen, s);
      REQUIRE(a.size() == 5);
      Rational l1 = 0;
      for (const auto& q : a) l1 += abs(q);
      CHECK(l1 >= f.m);
    }
  const DichotomyTally t = run_dichotomy_trials(f, 400, 7);
  CHECK(t.trials == 400);
  CHECK(t.violations == 0);
  CHECK(t.derivative_case + t.constant_case == 400);
  CHECK(t.constant_case > 0);
  for (unsigned p = 1; p <= 4; ++p) CHECK(t.by_order[p] > 0);
}

TEST_CASE("run_dichotomy_trials: independent of worker count") {
  const EpsilonFamily f = build_epsilon_family(3, Q("1/2"), 2);
  const DichotomyTally a = run_dichotomy_trials(f, 300, 99, 1);
  const DichotomyTally b = run_dichotomy_trials(f, 300, 99, 4);
  CHECK(a.derivative_case == b.derivative_case);
  CHECK(a.constant_case == b.constant_case);
  CHECK(a.by_order == b.by_order);
}
