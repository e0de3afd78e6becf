#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "invlag/rational.hpp"

namespace invlag {

enum class ExprKind {
  Constant,  // rational
  Var,       // coordinate w^i, 1-based index
  Param,     // named rational parameter
  Sum,
  Product,
  Quotient,  // kids[0] / kids[1]
  Power,     // kids[0] ^ exponent (integer)
  Exp,
  LnAbs,     // natural log of |argument|
  Abs,
};

class Expr;
using ParamMap = std::map<std::string, Rational>;

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Division by zero, ln|0|, 0^negative.
struct DomainError : EvalError {
  using EvalError::EvalError;
};
struct UnassignedParameter : EvalError {
  using EvalError::EvalError;
};

/// Immutable symbolic expression; cheap to copy (shared subtrees).
class Expr {
public:
  Expr() : Expr(constant(Rational(0))) {}

  static Expr constant(Rational c);
  static Expr constant(long c) { return constant(Rational(c)); }
  static Expr variable(int index);  // 1-based
  static Expr parameter(const std::string& name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr quotient(Expr num, Expr den);
  static Expr pow(Expr base, int exponent);
  static Expr exp(Expr arg);
  static Expr ln_abs(Expr arg);  // ln(e) and ln(abs(e)) both build this
  static Expr abs(Expr arg);

  static Expr difference(Expr a, Expr b) { return sum({std::move(a), product({constant(-1), std::move(b)})}); }
  static Expr negate(Expr a) { return product({constant(-1), std::move(a)}); }

  ExprKind kind() const;
  const Rational& constant_value() const;
  int var_index() const;
  const std::string& param_name() const;
  int exponent() const;
  const std::vector<Expr>& children() const;

  bool is_constant() const { return kind() == ExprKind::Constant; }
  bool is_zero_constant() const;

  /// Exact partial derivative with respect to coordinate `index` (1-based).
  Expr differentiate(int index) const;

  double eval(const std::vector<double>& point, const ParamMap& params = {}) const;
  /// Magnitude estimate at a point: every leaf and subtraction contributes
  /// positively; used for relative-tolerance identity tests.
  double eval_magnitude(const std::vector<double>& point, const ParamMap& params = {}) const;
  /// Exact rational evaluation; throws EvalError on exp/ln nodes.
  Rational eval_exact(const std::vector<Rational>& point, const ParamMap& params = {}) const;

  /// Replaces assigned parameters by rational constants.
  Expr substitute_params(const ParamMap& params) const;

  /// Largest coordinate index referenced (0 for constant expressions).
  int max_var_index() const;
  bool references_param() const;

  std::string str() const;
  std::string str(const std::vector<std::string>& coord_names) const;

  /// Structural equality (same tree after the constructors' normalization).
  friend bool operator==(const Expr& a, const Expr& b);

private:
  struct Node;
  static Expr make(Node n);
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct ParseError : std::runtime_error {
  size_t position;  // 0-based offset into the input text
  ParseError(const std::string& msg, size_t pos) : std::runtime_error(msg), position(pos) {}
};

/// Parses the expression grammar:
///   expr := ["+"|"-"] term (("+"|"-") term)*
///   term := factor (("*"|"/") factor)*
///   factor := base ("^" integer)?
///   base := number | ident | "(" expr ")" | func "(" expr ")"
///   func := "exp" | "ln" | "abs"
/// Identifiers resolve against coordinate names (1-based indices) first,
/// then parameter names; anything else is a ParseError.
Expr parse_expr(const std::string& text, const std::vector<std::string>& coord_names,
                const std::vector<std::string>& param_names);

}  // namespace invlag
