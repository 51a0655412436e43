#pragma once

// Scalar expressions in s and t over the complex numbers.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := ['-'] atom
//   atom   := number | number 'i' | 'pi' | 's' | 't'
//           | func '(' expr ')' | '(' expr ')'
//   func   := 'sin' | 'cos' | 'exp' | 'sqrt'

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "maslovflow/types.hpp"

namespace maslovflow::cli {

struct Node;

enum class Function { Sin, Cos, Exp, Sqrt };

struct Node {
  enum class Kind { Constant, S, T, Add, Sub, Mul, Div, Neg, Call };

  Kind kind = Kind::Constant;
  Complex value;  // Constant
  bool pi = false;  // Constant spelled 'pi'
  Function function = Function::Sin;
  std::shared_ptr<const Node> lhs;  // operand of Neg / Call, left of binary ops
  std::shared_ptr<const Node> rhs;
};

class Expression {
 public:
  Expression() = default;
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  Complex evaluate(double s, double t) const;
  /// Fully parenthesized source that parses back to the same tree.
  std::string to_string() const;
  const Node& root() const { return *root_; }

 private:
  std::shared_ptr<const Node> root_;
};

/// Error with the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t offset, const std::string& what);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Throws ParseError (SyntaxError / UnknownIdentifier).
Expression parse_expression(std::string_view src);

/// Rectangular array of expressions.
class ExpressionMatrix {
 public:
  ExpressionMatrix(Index rows, Index cols, std::vector<Expression> entries);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const Expression& at(Index i, Index j) const { return entries_[static_cast<std::size_t>(i * cols_ + j)]; }
  CMatrix evaluate(double s, double t) const;

 private:
  Index rows_;
  Index cols_;
  std::vector<Expression> entries_;
};

}  // namespace maslovflow::cli
