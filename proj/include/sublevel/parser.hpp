#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sublevel/polynomial.hpp"

namespace sublevel {

/// Raised for malformed polynomial text; offset is a 0-based byte position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Parses and fully expands a polynomial.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := ('+'|'-') factor | atom ('^' uint)?
///   atom   := number | var | '(' expr ')'
/// Numbers may be integers, decimals ("0.25" is exactly 1/4) or rationals
/// ("3/4"). Implicit multiplication is rejected.
///
/// Without var_names the variables are x, y, z or x1..xn; n_vars is the
/// highest index used (at least 1).
Polynomial parse_poly(std::string_view text, const std::optional<std::vector<std::string>>& var_names = std::nullopt);

}  // namespace sublevel
