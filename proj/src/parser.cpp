#include "sublevel/parser.hpp"

#include <cctype>
#include <algorithm>

namespace sublevel {

namespace {

constexpr unsigned kMaxExponent = 1024;

/// Polynomials are assembled over a wide variable set and trimmed at the end.
class Parser {
 public:
  Parser(std::string_view text, std::vector<std::string> names) : text_(text), names_(std::move(names)) {}

  Polynomial run() {
    skip_space();
    if (at_end()) throw ParseError("empty expression", pos_);
    Polynomial p = expr();
    skip_space();
    if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return p;
  }

  const std::vector<bool>& used() const { return used_; }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      skip_space();
      char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      Polynomial rhs = term();
      if (c == '+')
        acc += rhs;
      else
        acc -= rhs;
    }
  }

  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      skip_space();
      if (peek() == '*') {
        ++pos_;
        acc = acc * factor();
        continue;
      }
      // Reject juxtaposition such as "2x" or "x y" explicitly.
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '.' || c == '_')
        throw ParseError("implicit multiplication is not allowed", pos_);
      return acc;
    }
  }

  Polynomial factor() {
    skip_space();
    char c = peek();
    if (c == '-' || c == '+') {
      ++pos_;
      Polynomial inner = factor();
      return c == '-' ? -inner : inner;
    }
    Polynomial base = atom();
    skip_space();
    if (peek() != '^') return base;
    ++pos_;
    skip_space();
    const std::size_t exp_pos = pos_;
    if (peek() == '-') throw ParseError("negative exponent", exp_pos);
    if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected non-negative integer exponent", exp_pos);
    unsigned long e = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      e = e * 10 + static_cast<unsigned long>(peek() - '0');
      if (e > kMaxExponent) throw ParseError("exponent too large", exp_pos);
      ++pos_;
    }
    if (peek() == '.' || peek() == '/') throw ParseError("non-integer exponent", exp_pos);
    return base.pow(static_cast<unsigned>(e));
  }

  Polynomial atom() {
    skip_space();
    const std::size_t start = pos_;
    char c = peek();
    if (at_end()) throw ParseError("unexpected end of input", pos_);
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      skip_space();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
          used_[i] = true;
          return Polynomial::variable(names_.size(), i);
        }
      }
      throw ParseError("unknown variable '" + name + "'", start);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Polynomial number(std::size_t start) {
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    } else if (peek() == '/' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    std::string_view lit = text_.substr(start, pos_ - start);
    Rational value;
    try {
      value = parse_rational(lit);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), start);
    }
    return Polynomial::constant(names_.size(), value);
  }

  std::string_view text_;
  std::vector<std::string> names_;
  std::size_t pos_ = 0;
  std::vector<bool> used_ = std::vector<bool>(names_.size(), false);
};

/// Default names: x, y, z plus x1..x9. Mixing the two families is rejected
/// after parsing.
std::vector<std::string> wide_default_names() {
  std::vector<std::string> names{"x", "y", "z"};
  for (int i = 1; i <= 9; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

Polynomial restrict_vars(const Polynomial& wide, std::size_t first, std::size_t count) {
  Polynomial out(count);
  for (const auto& [e, c] : wide.terms()) {
    Exponent f(e.begin() + static_cast<std::ptrdiff_t>(first), e.begin() + static_cast<std::ptrdiff_t>(first + count));
    out.add_term(f, c);
  }
  return out;
}

}  // namespace

Polynomial parse_poly(std::string_view text, const std::optional<std::vector<std::string>>& var_names) {
  if (var_names) {
    if (var_names->empty()) throw std::invalid_argument("parse_poly: empty variable list");
    Parser parser(text, *var_names);
    return parser.run();
  }
  auto names = wide_default_names();
  Parser parser(text, names);
  Polynomial wide = parser.run();

  // Occurrence, not surviving terms, decides n_vars ("y - y" has two variables).
  const auto& used = parser.used();
  std::size_t highest_xyz = 0;
  std::size_t highest_indexed = 0;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) continue;
    if (i < 3)
      highest_xyz = i + 1;
    else
      highest_indexed = i - 2;
  }
  if (highest_xyz && highest_indexed) throw ParseError("cannot mix x,y,z with indexed variables x1..xn", 0);
  if (highest_indexed) return restrict_vars(wide, 3, highest_indexed);
  std::size_t n = std::max<std::size_t>(1, highest_xyz);
  return restrict_vars(wide, 0, n);
}

}  // namespace sublevel
