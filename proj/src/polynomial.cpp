#include "sublevel/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sublevel {

unsigned total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0U); }

bool GrlexLess::operator()(const Exponent& a, const Exponent& b) const {
  unsigned da = total_degree(a);
  unsigned db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

unsigned Degree::value() const {
  if (!value_) throw std::logic_error("degree of the zero polynomial has no integer value");
  return *value_;
}

Polynomial::Polynomial(std::size_t n_vars) : n_vars_(n_vars) {
  if (n_vars == 0) throw std::invalid_argument("polynomial needs at least one variable");
}

Polynomial::Polynomial(std::size_t n_vars, TermMap terms) : Polynomial(n_vars) {
  for (auto& [e, c] : terms) add_term(e, c);
}

Polynomial Polynomial::constant(std::size_t n_vars, const Rational& c) {
  Polynomial p(n_vars);
  p.add_term(Exponent(n_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t n_vars, std::size_t index) {
  if (index >= n_vars) throw std::out_of_range("variable index out of range");
  Polynomial p(n_vars);
  Exponent e(n_vars, 0);
  e[index] = 1;
  p.add_term(e, Rational(1));
  return p;
}

Degree Polynomial::degree() const {
  if (terms_.empty()) return Degree::minus_infinity();
  return Degree::of(total_degree(terms_.rbegin()->first));
}

Degree Polynomial::min_degree() const {
  if (terms_.empty()) return Degree::minus_infinity();
  return Degree::of(total_degree(terms_.begin()->first));
}

bool Polynomial::is_homogeneous() const {
  return !terms_.empty() && total_degree(terms_.begin()->first) == total_degree(terms_.rbegin()->first);
}

unsigned Polynomial::max_exponent(std::size_t var) const {
  unsigned m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, e.at(var));
  return m;
}

Rational Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != n_vars_) throw std::invalid_argument("exponent length does not match n_vars");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_compatible(const Polynomial& other) const {
  if (other.n_vars_ != n_vars_) throw std::invalid_argument("polynomials have different numbers of variables");
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_compatible(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_compatible(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_compatible(b);
  Polynomial r(a.n_vars_);
  Exponent e(a.n_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result = constant(n_vars_, Rational(1));
  Polynomial base = *this;
  while (k) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k) base = base * base;
  }
  return result;
}

Rational evaluate(const Polynomial& p, std::span<const Rational> x) {
  if (x.size() != p.n_vars()) throw std::invalid_argument("evaluate: dimension mismatch");
  Rational sum(0);
  for (const auto& [e, c] : p.terms()) {
    Rational term = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term *= pow(x[i], e[i]);
    sum += term;
  }
  return sum;
}

double evaluate(const Polynomial& p, std::span<const double> x) {
  if (x.size() != p.n_vars()) throw std::invalid_argument("evaluate: dimension mismatch");
  return CompiledPolynomial(p)(x);
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p)
    : n_vars_(p.n_vars()), max_prefix_exponent_(p.n_vars(), 0) {
  const std::size_t last = n_vars_ - 1;
  std::map<Exponent, std::vector<double>> by_prefix;
  for (const auto& [e, c] : p.terms()) {
    Exponent prefix(e.begin(), e.end() - 1);
    auto& dense = by_prefix[prefix];
    if (dense.size() <= e[last]) dense.resize(e[last] + 1, 0.0);
    dense[e[last]] += to_double(c);
    for (std::size_t i = 0; i < last; ++i) max_prefix_exponent_[i] = std::max(max_prefix_exponent_[i], e[i]);
  }
  for (auto& [prefix, dense] : by_prefix) groups_.push_back({prefix, std::move(dense)});
  if (n_vars_ > 9) throw std::invalid_argument("CompiledPolynomial supports at most 9 variables");
  for (unsigned m : max_prefix_exponent_)
    if (m >= 64) throw std::invalid_argument("CompiledPolynomial supports exponents below 64");
}

double CompiledPolynomial::operator()(const double* x) const {
  const std::size_t last = n_vars_ - 1;
  // Powers of the leading variables; n is small so a fixed buffer suffices.
  constexpr std::size_t kMaxPow = 64;
  double powers[8][kMaxPow];
  for (std::size_t i = 0; i < last; ++i) {
    powers[i][0] = 1.0;
    for (unsigned k = 1; k <= max_prefix_exponent_[i]; ++k) powers[i][k] = powers[i][k - 1] * x[i];
  }
  const double s = x[last];
  double sum = 0.0;
  for (const auto& g : groups_) {
    double h = 0.0;
    for (auto it = g.horner.rbegin(); it != g.horner.rend(); ++it) h = h * s + *it;
    for (std::size_t i = 0; i < last; ++i) h *= powers[i][g.prefix[i]];
    sum += h;
  }
  return sum;
}

Polynomial derivative(const Polynomial& p, std::size_t var) {
  if (var >= p.n_vars()) throw std::out_of_range("derivative: variable index out of range");
  Polynomial r(p.n_vars());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exponent d = e;
    d[var] -= 1;
    r.add_term(d, c * e[var]);
  }
  return r;
}

std::vector<Polynomial> gradient(const Polynomial& p) {
  std::vector<Polynomial> g;
  g.reserve(p.n_vars());
  for (std::size_t i = 0; i < p.n_vars(); ++i) g.push_back(derivative(p, i));
  return g;
}

Polynomial radial_derivative(const Polynomial& p) {
  Polynomial r(p.n_vars());
  for (const auto& [e, c] : p.terms()) r.add_term(e, c * total_degree(e));
  return r;
}

Polynomial gradient_norm_squared(const Polynomial& p) {
  Polynomial r(p.n_vars());
  for (const auto& g : gradient(p)) r += g * g;
  return r;
}

std::map<unsigned, Polynomial> homogeneous_components(const Polynomial& p) {
  std::map<unsigned, Polynomial> out;
  for (const auto& [e, c] : p.terms()) {
    auto [it, _] = out.try_emplace(total_degree(e), p.n_vars());
    it->second.add_term(e, c);
  }
  return out;
}

Polynomial extend_variables(const Polynomial& p, std::size_t n) {
  if (n < p.n_vars()) throw std::invalid_argument("extend_variables: cannot drop variables");
  Polynomial out(n);
  for (const auto& [e, c] : p.terms()) {
    Exponent full(n, 0);
    std::copy(e.begin(), e.end(), full.begin());
    out.add_term(full, c);
  }
  return out;
}

Polynomial top_homogeneous_component(const Polynomial& p) {
  if (p.is_zero()) return p;
  return homogeneous_components(p).rbegin()->second;
}

Polynomial taylor_shift(const Polynomial& p, std::span<const Rational> a) {
  if (a.size() != p.n_vars()) throw std::invalid_argument("taylor_shift: dimension mismatch");
  Polynomial current = p;
  // One variable at a time: x_i -> a_i + x_i, expanded with binomial coefficients.
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    Polynomial next(p.n_vars());
    for (const auto& [e, c] : current.terms()) {
      const unsigned k = e[i];
      Exponent f = e;
      Rational apow(1);  // a_i^(k - j) built from j = k downward
      for (unsigned j = k + 1; j-- > 0;) {
        f[i] = j;
        next.add_term(f, c * Rational(binomial(k, j)) * apow);
        apow *= a[i];
      }
    }
    current = std::move(next);
  }
  return current;
}

VanishingOrder order_at(const Polynomial& p, std::span<const Rational> a) {
  if (p.is_zero()) return VanishingOrder::infinity();
  return VanishingOrder::finite(taylor_shift(p, a).min_degree().value());
}

Polynomial affine_substitute(const Polynomial& p, const std::vector<RationalPoint>& linear,
                             const RationalPoint& offset, std::size_t new_vars) {
  if (linear.size() != p.n_vars() || offset.size() != p.n_vars())
    throw std::invalid_argument("affine_substitute: dimension mismatch");
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < p.n_vars(); ++i) {
    if (linear[i].size() != new_vars) throw std::invalid_argument("affine_substitute: row length mismatch");
    Polynomial img = Polynomial::constant(new_vars, offset[i]);
    for (std::size_t j = 0; j < new_vars; ++j)
      if (linear[i][j] != 0) img += Polynomial::variable(new_vars, j) * linear[i][j];
    images.push_back(std::move(img));
  }
  Polynomial result(new_vars);
  for (const auto& [e, c] : p.terms()) {
    Polynomial term = Polynomial::constant(new_vars, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term = term * images[i].pow(e[i]);
    result += term;
  }
  return result;
}

std::vector<std::string> default_var_names(std::size_t n_vars) {
  if (n_vars <= 3) {
    static const char* names[] = {"x", "y", "z"};
    return {names, names + n_vars};
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n_vars; ++i) out.push_back("x" + std::to_string(i + 1));
  return out;
}

std::string to_string(const Polynomial& p, const std::vector<std::string>& var_names) {
  const auto names = var_names.empty() ? default_var_names(p.n_vars()) : var_names;
  if (names.size() != p.n_vars()) throw std::invalid_argument("to_string: wrong number of variable names");
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool constant_term = total_degree(e) == 0;
    bool wrote = false;
    if (mag != 1 || constant_term) {
      os << to_string(mag);
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (wrote) os << '*';
      os << names[i];
      if (e[i] > 1) os << '^' << e[i];
      wrote = true;
    }
  }
  return os.str();
}

}  // namespace sublevel
