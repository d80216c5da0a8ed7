#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sublevel/roots.hpp"

namespace sublevel {

/// Thresholds eps_0..eps_d and the uniform lower bound lambda for
/// g(a, s) = a_0 + a_1 s + ... + a_d s^d on I = [-R, R] over
/// K = {a : |a_0| + ... + |a_d| >= m}.
struct EpsilonFamily {
  unsigned d = 0;
  Rational m;
  Rational R;
  std::vector<Rational> eps;      // index p -> eps_p
  std::vector<Rational> lambdas;  // index p -> lambda_p
  Rational lambda;                // min over lambdas

  Interval interval() const { return Interval(-R, R); }
};

/// Tail sum sum_{j>p} j!/(j-p)! * eps_j * R^(j-p).
Rational derivative_tail(const std::vector<Rational>& eps, const Rational& R, unsigned p);

/// eps_p < m / (d + 1) for every p.
bool satisfies_smallness(const EpsilonFamily& fam);
/// p! eps_p > derivative_tail(p) for every p < d.
bool satisfies_dominance(const EpsilonFamily& fam);

/// Canonical family: start from eps_d = 1, set eps_p = 2 * tail(p) / p! going
/// down, then rescale everything by m / (2 (d + 1) max eps). Dominance is
/// scale-invariant, so both conditions hold exactly; lambda_p = p! eps_p / 2
/// for p < d and lambda_d = d! eps_d.
EpsilonFamily build_epsilon_family(unsigned d, const Rational& m, const Rational& R);

enum class DichotomyBranch { DerivativeCase, ConstantCase, Violation };

struct DichotomyVerdict {
  DichotomyBranch branch = DichotomyBranch::Violation;
  unsigned p = 0;  // derivative order for DerivativeCase
  std::string detail;
};

std::string to_string(DichotomyBranch b);

/// Replays the case analysis for one coefficient vector: the largest p with
/// |a_p| > eps_p selects the branch, which is then certified exactly by root
/// isolation on [-R, R]. Violation means the certificate failed, which the
/// construction rules out. Throws std::invalid_argument if a is not in K.
/// n_grid (>= 1000) sets the size of an additional floating spot-check grid.
DichotomyVerdict dichotomy_check(const std::vector<Rational>& a, const EpsilonFamily& fam,
                                        unsigned n_grid = 1000);

/// Random coefficient vector in K. Strategies (strategy % 4): broad random
/// coefficients; one coefficient just above its threshold with all higher
/// ones at or below theirs; constant-dominated vectors; the top coefficient
/// just above its threshold. Vectors are pushed onto the l1 = m boundary
/// when they would fall outside K.
std::vector<Rational> random_coefficients_in_k(const EpsilonFamily& fam, std::mt19937_64& gen, unsigned strategy);

struct DichotomyTally {
  std::size_t trials = 0;
  std::size_t derivative_case = 0;
  std::size_t constant_case = 0;
  std::size_t violations = 0;
  std::vector<std::size_t> by_order;  // derivative-case count per p
  std::vector<std::string> violation_details;  // first few
};

/// Trial i draws from derive_seed(seed, i) with strategy i % 4, so the
/// tally does not depend on the worker count.
DichotomyTally run_dichotomy_trials(const EpsilonFamily& fam, std::size_t trials, std::uint64_t seed,
                                    unsigned workers = 1);

}  // namespace sublevel
