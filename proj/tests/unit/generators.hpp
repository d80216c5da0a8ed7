#pragma once

#include <random>
#include <string>
#include <vector>

#include "sublevel/parser.hpp"
#include "sublevel/polynomial.hpp"

namespace testing_helpers {

using namespace sublevel;

inline Polynomial P(const std::string& text) { return parse_poly(text); }
inline Rational Q(const std::string& text) { return parse_rational(text); }

// gmpxx does not reduce p/q on construction.
inline Rational frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline RationalPoint point(std::initializer_list<const char*> xs) {
  RationalPoint p;
  for (const char* x : xs) p.push_back(parse_rational(x));
  return p;
}

// Small integer-over-small-integer coefficient, never zero.
inline Rational small_rational(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  int a = 0;
  while (a == 0) a = num(gen);
  Rational q(a, den(gen));
  q.canonicalize();
  return q;
}

inline Polynomial random_poly(std::mt19937_64& gen, std::size_t n, unsigned max_deg, unsigned terms) {
  Polynomial p(n);
  std::uniform_int_distribution<unsigned> e(0, max_deg);
  for (unsigned t = 0; t < terms; ++t) {
    Exponent ex(n, 0);
    unsigned budget = e(gen);
    for (std::size_t i = 0; i < n && budget > 0; ++i) {
      std::uniform_int_distribution<unsigned> take(0, budget);
      ex[i] = i + 1 == n ? budget : take(gen);
      budget -= ex[i];
    }
    p.add_term(ex, small_rational(gen));
  }
  return p;
}

// Random homogeneous polynomial of exact degree d (nonzero).
inline Polynomial random_homogeneous(std::mt19937_64& gen, std::size_t n, unsigned d, unsigned terms) {
  for (;;) {
    Polynomial p(n);
    for (unsigned t = 0; t < terms; ++t) {
      Exponent ex(n, 0);
      unsigned budget = d;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        std::uniform_int_distribution<unsigned> take(0, budget);
        ex[i] = take(gen);
        budget -= ex[i];
      }
      ex[n - 1] = budget;
      p.add_term(ex, small_rational(gen));
    }
    if (!p.is_zero()) return p;
  }
}

inline RationalPoint random_point(std::mt19937_64& gen, std::size_t n) {
  RationalPoint x;
  for (std::size_t i = 0; i < n; ++i) x.push_back(small_rational(gen));
  return x;
}

}  // namespace testing_helpers
