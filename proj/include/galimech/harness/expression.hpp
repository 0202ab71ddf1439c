#pragma once

// Arithmetic expressions over the event coordinates t, q1, q2, q3, used for
// custom potentials. Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' unary)?
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
// Names: t q1 q2 q3 pi e; functions: sin cos exp.

#include <memory>
#include <stdexcept>
#include <string>

#include "galimech/galilean.hpp"

namespace galimech::harness {

class ExpressionError : public std::runtime_error {
 public:
  ExpressionError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class Expression {
 public:
  /// Throws ExpressionError on malformed input.
  static Expression parse(const std::string& source);

  double operator()(const Eventd& x) const;
  const std::string& source() const { return source_; }
  bool depends_on_time() const { return uses_time_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
  bool uses_time_ = false;
};

}  // namespace galimech::harness
