#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "liesym/symexpr/expr.hpp"

namespace liesym {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses the expression grammar documented in the README. Identifiers that
/// are not declared functions become symbols; functions must be declared
/// before use.
Expr parse(std::string_view text);

}  // namespace liesym
