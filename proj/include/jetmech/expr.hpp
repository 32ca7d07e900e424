#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jetmech/linalg.hpp"

namespace jetmech {

/// Variable values used to evaluate an expression.
using Bindings = std::map<std::string, double, std::less<>>;

enum class UnaryOp { kNeg, kSin, kCos, kTan, kExp, kLog, kSqrt };
enum class BinaryOp { kAdd, kSub, kMul, kDiv, kPow };

/// Immutable node of an expression tree.
struct ExprNode {
  enum class Kind { kConstant, kVariable, kUnary, kBinary };

  Kind kind = Kind::kConstant;
  double value = 0.0;  // kConstant
  std::string name;    // kVariable
  UnaryOp unary_op = UnaryOp::kNeg;
  BinaryOp binary_op = BinaryOp::kAdd;
  std::shared_ptr<const ExprNode> lhs;  // operand of a unary node
  std::shared_ptr<const ExprNode> rhs;
};

/// Value, gradient and Hessian of an expression at one point.
struct SecondOrder {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

namespace detail {
struct Program;
}

/// A parsed scalar function of named coordinates.
///
/// Grammar, loosest binding first:
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' unary)?          (right associative)
///     primary := number | ident | ident '(' expr ')' | '(' expr ')'
///
/// Functions: sin cos tan exp log sqrt. Identifiers match
/// [a-zA-Z_][a-zA-Z0-9_]*. A power whose exponent is a constant integer is
/// evaluated by repeated multiplication and accepts any base; any other power
/// requires a positive base.
///
/// Derivatives are exact up to order two (forward-mode automatic
/// differentiation). Expressions are immutable and safe to share across
/// threads.
class Expression {
 public:
  /// The constant 0.
  Expression();

  static Expression parse(std::string_view source);
  static Expression constant(double value);
  static Expression variable(std::string name);
  static Expression unary(UnaryOp op, const Expression& operand);
  static Expression binary(BinaryOp op, const Expression& lhs, const Expression& rhs);

  const ExprNode& root() const { return *root_; }

  /// Names of the variables occurring in the tree, sorted.
  const std::vector<std::string>& free_vars() const { return free_vars_; }
  bool depends_on(std::string_view name) const;
  bool is_constant() const { return free_vars_.empty(); }

  /// Text that parses back to a structurally identical tree.
  std::string to_string() const;

  /// Simultaneous replacement of variables by expressions.
  Expression substitute(const std::map<std::string, Expression, std::less<>>& replacements) const;
  Expression rename(const std::map<std::string, std::string, std::less<>>& names) const;

  double evaluate(const Bindings& bindings) const;

  /// Partial derivatives with respect to `vars`; variables absent from the
  /// expression get 0.
  Vector gradient(std::span<const std::string> vars, const Bindings& bindings) const;

  /// Second partials with respect to `vars`, exactly symmetric.
  Matrix hessian(std::span<const std::string> vars, const Bindings& bindings) const;

  /// Value, gradient and Hessian in one pass.
  SecondOrder derivatives(std::span<const std::string> vars, const Bindings& bindings) const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  explicit Expression(std::shared_ptr<const ExprNode> root);

  std::shared_ptr<const ExprNode> root_;
  std::vector<std::string> free_vars_;
  std::shared_ptr<const detail::Program> program_;
};

bool structurally_equal(const ExprNode& a, const ExprNode& b);

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression operator+(const Expression& a, double b);
Expression operator*(double a, const Expression& b);
Expression pow(const Expression& base, const Expression& exponent);

/// Parses each entry of `sources`.
std::vector<Expression> parse_all(std::span<const std::string> sources);

}  // namespace jetmech
