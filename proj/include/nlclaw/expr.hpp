#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "nlclaw/errors.hpp"

namespace nlclaw {

/// Parse failure; column is 1-based within the expression text.
class ExprError : public Error {
public:
  ExprError(const std::string& message, std::size_t column);
  std::size_t column() const { return column_; }

private:
  std::size_t column_;
};

/// Compiled arithmetic expression in the variables x and (optionally) y.
///
/// Grammar, whitespace ignored:
///   expr    := term { ("+" | "-") term }
///   term    := unary { ("*" | "/") unary }
///   unary   := ("+" | "-") unary | power
///   power   := primary [ "^" unary ]          (right associative)
///   primary := number | "x" | "y" | func "(" expr ")" | "(" expr ")"
///   func    := exp | tanh | sin | abs | sgn
///   number  := digits [ "." digits ] [ ("e" | "E") [sign] digits ]
/// sgn(0) = 0. So -x^2 is -(x^2) and 2^-1 is 0.5.
class Expression {
public:
  /// Throws ExprError. With allow_y false, "y" is rejected.
  static Expression parse(const std::string& text, bool allow_y = false);

  double operator()(double x, double y = 0.0) const;
  const std::string& text() const { return text_; }
  bool uses_y() const { return uses_y_; }

  struct Node;

private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  bool uses_y_ = false;
};

} // namespace nlclaw
