#include "sublevel/univariate.hpp"

#include <algorithm>
#include <stdexcept>

namespace sublevel {

UPoly::UPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
}

UPoly UPoly::monomial(unsigned k, const Rational& c) {
  std::vector<Rational> v(k + 1, Rational(0));
  v[k] = c;
  return UPoly(std::move(v));
}

Degree UPoly::degree() const {
  for (std::size_t k = coeffs_.size(); k-- > 0;)
    if (coeffs_[k] != 0) return Degree::of(static_cast<unsigned>(k));
  return Degree::minus_infinity();
}

bool UPoly::is_constant() const {
  auto d = degree();
  return !d.is_finite() || d.value() == 0;
}

Rational UPoly::leading() const {
  auto d = degree();
  return d.is_finite() ? coeffs_[d.value()] : Rational(0);
}

Rational UPoly::operator()(const Rational& s) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= s;
    acc += *it;
  }
  return acc;
}

double UPoly::operator()(double s) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + to_double(*it);
  return acc;
}

UPoly UPoly::derivative(unsigned order) const {
  if (order == 0) return *this;
  if (coeffs_.size() <= order) return UPoly();
  std::vector<Rational> out(coeffs_.size() - order);
  for (std::size_t k = order; k < coeffs_.size(); ++k) {
    // k! / (k - order)!
    Rational falling(1);
    for (unsigned j = 0; j < order; ++j) falling *= static_cast<unsigned long>(k - j);
    out[k - order] = coeffs_[k] * falling;
  }
  return UPoly(std::move(out));
}

UPoly UPoly::compose_affine(const Rational& a, const Rational& b) const {
  // Horner on polynomials: acc = acc * (a + b s) + c_k.
  std::vector<Rational> acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    std::vector<Rational> next(acc.size() + 1, Rational(0));
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k] += acc[k] * a;
      next[k + 1] += acc[k] * b;
    }
    next[0] += *it;
    acc = std::move(next);
  }
  return UPoly(std::move(acc));
}

UPoly UPoly::trimmed() const {
  auto d = degree();
  if (!d.is_finite()) return UPoly();
  return UPoly(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + d.value() + 1));
}

UPoly UPoly::monic() const {
  UPoly t = trimmed();
  if (t.is_zero()) return t;
  Rational lc = t.leading();
  for (auto& c : t.coeffs_) c /= lc;
  return t;
}

UPoly& UPoly::operator+=(const UPoly& o) {
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

UPoly& UPoly::operator*=(const Rational& c) {
  for (auto& v : coeffs_) v *= c;
  return *this;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.coeffs_.empty() || b.coeffs_.empty()) return UPoly();
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return UPoly(std::move(out));
}

UPoly UPoly::operator-() const {
  UPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

std::pair<UPoly, UPoly> divmod(const UPoly& num, const UPoly& den) {
  UPoly d = den.trimmed();
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> r = num.trimmed().coeffs();
  const std::size_t dd = d.degree().value();
  if (r.size() <= dd) return {UPoly(), UPoly(std::move(r))};
  std::vector<Rational> q(r.size() - dd, Rational(0));
  const Rational& lc = d.coeffs()[dd];
  for (std::size_t k = r.size(); k-- > dd;) {
    if (r[k] == 0) continue;
    Rational factor = r[k] / lc;
    q[k - dd] = factor;
    for (std::size_t j = 0; j <= dd; ++j) r[k - dd + j] -= factor * d.coeffs()[j];
  }
  r.resize(dd);
  return {UPoly(std::move(q)), UPoly(std::move(r)).trimmed()};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a.trimmed();
  UPoly y = b.trimmed();
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).second.monic();
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

std::vector<UPoly> square_free_decomposition(const UPoly& p) {
  UPoly f = p.monic();
  if (f.is_zero()) throw std::invalid_argument("square-free decomposition of the zero polynomial");
  std::vector<UPoly> factors;
  if (f.is_constant()) return factors;
  UPoly fp = f.derivative();
  UPoly a = gcd(f, fp);
  UPoly b = divmod(f, a).first;
  UPoly c = divmod(fp, a).first;
  UPoly d = c - b.derivative();
  while (!b.is_constant()) {
    UPoly g = gcd(b, d);
    factors.push_back(g);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - b.derivative();
  }
  while (!factors.empty() && factors.back().is_constant()) factors.pop_back();
  return factors;
}

UnivariateSlice line_restriction(const Polynomial& p, std::span<const Rational> base,
                                 std::span<const Rational> direction) {
  const std::size_t n = p.n_vars();
  if (base.size() != n || direction.size() != n) throw std::invalid_argument("line_restriction: dimension mismatch");
  if (std::all_of(direction.begin(), direction.end(), [](const Rational& v) { return v == 0; }))
    throw std::invalid_argument("line_restriction: zero direction");
  std::vector<UPoly> lines;
  for (std::size_t i = 0; i < n; ++i) lines.push_back(UPoly({base[i], direction[i]}));
  const unsigned deg = p.is_zero() ? 0 : p.degree().value();
  UPoly out(std::vector<Rational>(deg + 1, Rational(0)));
  for (const auto& [e, c] : p.terms()) {
    UPoly term = UPoly::constant(c);
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned k = 0; k < e[i]; ++k) term = term * lines[i];
    out += term;
  }
  std::vector<Rational> coeffs = out.coeffs();
  coeffs.resize(deg + 1, Rational(0));
  return UPoly(std::move(coeffs));
}

}  // namespace sublevel
