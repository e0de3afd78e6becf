#include "invlag/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace invlag {

struct Expr::Node {
  ExprKind kind;
  Rational value;      // Constant
  int var = 0;         // Var
  std::string param;   // Param
  int exponent = 0;    // Power
  std::vector<Expr> kids;
};

Expr Expr::make(Node n) {
  return Expr(std::make_shared<const Node>(std::move(n)));
}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::constant_value() const { return node_->value; }
int Expr::var_index() const { return node_->var; }
const std::string& Expr::param_name() const { return node_->param; }
int Expr::exponent() const { return node_->exponent; }
const std::vector<Expr>& Expr::children() const { return node_->kids; }

bool Expr::is_zero_constant() const {
  return node_->kind == ExprKind::Constant && node_->value.is_zero();
}

Expr Expr::constant(Rational c) {
  Node n;
  n.kind = ExprKind::Constant;
  n.value = std::move(c);
  return make(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 1) throw std::invalid_argument("Expr::variable: index must be >= 1");
  Node n;
  n.kind = ExprKind::Var;
  n.var = index;
  return make(std::move(n));
}

Expr Expr::parameter(const std::string& name) {
  Node n;
  n.kind = ExprKind::Param;
  n.param = name;
  return make(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  Rational c(0);
  for (auto& t : terms) {
    if (t.kind() == ExprKind::Sum) {
      for (const auto& k : t.children()) {
        if (k.is_constant()) c += k.constant_value();
        else flat.push_back(k);
      }
    } else if (t.is_constant()) {
      c += t.constant_value();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (!c.is_zero()) flat.push_back(constant(c));
  if (flat.empty()) return constant(0L);
  if (flat.size() == 1) return flat[0];
  Node n;
  n.kind = ExprKind::Sum;
  n.kids = std::move(flat);
  return make(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  Rational c(1);
  for (auto& f : factors) {
    if (f.kind() == ExprKind::Product) {
      for (const auto& k : f.children()) {
        if (k.is_constant()) c *= k.constant_value();
        else flat.push_back(k);
      }
    } else if (f.is_constant()) {
      c *= f.constant_value();
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (c.is_zero()) return constant(0L);
  if (flat.empty()) return constant(c);
  if (c != Rational(1)) flat.insert(flat.begin(), constant(c));
  if (flat.size() == 1) return flat[0];
  Node n;
  n.kind = ExprKind::Product;
  n.kids = std::move(flat);
  return make(std::move(n));
}

Expr Expr::quotient(Expr num, Expr den) {
  if (den.is_constant()) {
    if (den.constant_value().is_zero())
      throw DomainError("quotient: constant zero denominator");
    if (num.is_constant()) return constant(num.constant_value() / den.constant_value());
    return product({constant(den.constant_value().inverse()), std::move(num)});
  }
  if (num.is_zero_constant()) return constant(0L);
  Node n;
  n.kind = ExprKind::Quotient;
  n.kids = {std::move(num), std::move(den)};
  return make(std::move(n));
}

Expr Expr::pow(Expr base, int exponent) {
  if (exponent == 0) return constant(1L);
  if (exponent == 1) return base;
  if (base.is_constant() && (exponent > 0 || !base.constant_value().is_zero()))
    return constant(base.constant_value().pow(exponent));
  Node n;
  n.kind = ExprKind::Power;
  n.exponent = exponent;
  n.kids = {std::move(base)};
  return make(std::move(n));
}

Expr Expr::exp(Expr arg) {
  if (arg.is_zero_constant()) return constant(1L);
  Node n;
  n.kind = ExprKind::Exp;
  n.kids = {std::move(arg)};
  return make(std::move(n));
}

Expr Expr::ln_abs(Expr arg) {
  if (arg.kind() == ExprKind::Abs) arg = arg.children()[0];  // ln(abs(u)) == ln|u|
  if (arg.is_constant() && arg.constant_value().abs() == Rational(1)) return constant(0L);
  Node n;
  n.kind = ExprKind::LnAbs;
  n.kids = {std::move(arg)};
  return make(std::move(n));
}

Expr Expr::abs(Expr arg) {
  if (arg.is_constant()) return constant(arg.constant_value().abs());
  if (arg.kind() == ExprKind::Abs) return arg;
  Node n;
  n.kind = ExprKind::Abs;
  n.kids = {std::move(arg)};
  return make(std::move(n));
}

Expr Expr::differentiate(int index) const {
  switch (kind()) {
    case ExprKind::Constant:
    case ExprKind::Param:
      return constant(0L);
    case ExprKind::Var:
      return constant(var_index() == index ? 1L : 0L);
    case ExprKind::Sum: {
      std::vector<Expr> d;
      d.reserve(children().size());
      for (const auto& k : children()) d.push_back(k.differentiate(index));
      return sum(std::move(d));
    }
    case ExprKind::Product: {
      std::vector<Expr> terms;
      const auto& kids = children();
      for (size_t i = 0; i < kids.size(); ++i) {
        Expr di = kids[i].differentiate(index);
        if (di.is_zero_constant()) continue;
        std::vector<Expr> fs;
        fs.reserve(kids.size());
        for (size_t j = 0; j < kids.size(); ++j) fs.push_back(j == i ? di : kids[j]);
        terms.push_back(product(std::move(fs)));
      }
      return sum(std::move(terms));
    }
    case ExprKind::Quotient: {
      const Expr& u = children()[0];
      const Expr& v = children()[1];
      Expr du = u.differentiate(index), dv = v.differentiate(index);
      return quotient(sum({product({du, v}), product({constant(-1L), u, dv})}),
                      pow(v, 2));
    }
    case ExprKind::Power: {
      const Expr& u = children()[0];
      return product({constant(Rational(exponent())), pow(u, exponent() - 1),
                      u.differentiate(index)});
    }
    case ExprKind::Exp: {
      const Expr& u = children()[0];
      return product({*this, u.differentiate(index)});
    }
    case ExprKind::LnAbs: {
      const Expr& u = children()[0];
      return quotient(u.differentiate(index), u);
    }
    case ExprKind::Abs: {
      // d|u| = u/|u| * du, off the zero locus of u.
      const Expr& u = children()[0];
      return quotient(product({u, u.differentiate(index)}), *this);
    }
  }
  throw std::logic_error("differentiate: unreachable");
}

namespace {

double checked_pow(double base, int e) {
  if (base == 0.0 && e < 0) throw DomainError("eval: 0 raised to a negative power");
  return std::pow(base, e);
}

}  // namespace

double Expr::eval(const std::vector<double>& point, const ParamMap& params) const {
  switch (kind()) {
    case ExprKind::Constant:
      return constant_value().to_double();
    case ExprKind::Var: {
      if (var_index() > static_cast<int>(point.size()))
        throw EvalError("eval: point has too few coordinates");
      return point[var_index() - 1];
    }
    case ExprKind::Param: {
      auto it = params.find(param_name());
      if (it == params.end())
        throw UnassignedParameter("eval: unassigned parameter '" + param_name() + "'");
      return it->second.to_double();
    }
    case ExprKind::Sum: {
      double s = 0;
      for (const auto& k : children()) s += k.eval(point, params);
      return s;
    }
    case ExprKind::Product: {
      double p = 1;
      for (const auto& k : children()) p *= k.eval(point, params);
      return p;
    }
    case ExprKind::Quotient: {
      double den = children()[1].eval(point, params);
      if (den == 0.0) throw DomainError("eval: division by zero");
      return children()[0].eval(point, params) / den;
    }
    case ExprKind::Power:
      return checked_pow(children()[0].eval(point, params), exponent());
    case ExprKind::Exp:
      return std::exp(children()[0].eval(point, params));
    case ExprKind::LnAbs: {
      double v = children()[0].eval(point, params);
      if (v == 0.0) throw DomainError("eval: ln|0|");
      return std::log(std::fabs(v));
    }
    case ExprKind::Abs:
      return std::fabs(children()[0].eval(point, params));
  }
  throw std::logic_error("eval: unreachable");
}

double Expr::eval_magnitude(const std::vector<double>& point, const ParamMap& params) const {
  switch (kind()) {
    case ExprKind::Constant:
      return std::fabs(constant_value().to_double());
    case ExprKind::Var:
      return std::fabs(point[var_index() - 1]);
    case ExprKind::Param: {
      auto it = params.find(param_name());
      if (it == params.end())
        throw UnassignedParameter("eval_magnitude: unassigned parameter '" + param_name() + "'");
      return std::fabs(it->second.to_double());
    }
    case ExprKind::Sum: {
      double s = 0;
      for (const auto& k : children()) s += k.eval_magnitude(point, params);
      return s;
    }
    case ExprKind::Product: {
      double p = 1;
      for (const auto& k : children()) p *= k.eval_magnitude(point, params);
      return p;
    }
    case ExprKind::Quotient: {
      double den = children()[1].eval(point, params);
      if (den == 0.0) throw DomainError("eval_magnitude: division by zero");
      return children()[0].eval_magnitude(point, params) / std::fabs(den);
    }
    case ExprKind::Power: {
      if (exponent() >= 0) return std::pow(children()[0].eval_magnitude(point, params), exponent());
      return std::fabs(checked_pow(children()[0].eval(point, params), exponent()));
    }
    case ExprKind::Exp: {
      double a = std::fabs(children()[0].eval(point, params));
      return std::exp(std::min(a, 60.0));
    }
    case ExprKind::LnAbs: {
      double v = children()[0].eval(point, params);
      if (v == 0.0) throw DomainError("eval_magnitude: ln|0|");
      return std::fabs(std::log(std::fabs(v))) + 1.0;
    }
    case ExprKind::Abs:
      return children()[0].eval_magnitude(point, params);
  }
  throw std::logic_error("eval_magnitude: unreachable");
}

Rational Expr::eval_exact(const std::vector<Rational>& point, const ParamMap& params) const {
  switch (kind()) {
    case ExprKind::Constant:
      return constant_value();
    case ExprKind::Var:
      return point.at(static_cast<size_t>(var_index() - 1));
    case ExprKind::Param: {
      auto it = params.find(param_name());
      if (it == params.end())
        throw UnassignedParameter("eval_exact: unassigned parameter '" + param_name() + "'");
      return it->second;
    }
    case ExprKind::Sum: {
      Rational s;
      for (const auto& k : children()) s += k.eval_exact(point, params);
      return s;
    }
    case ExprKind::Product: {
      Rational p(1);
      for (const auto& k : children()) p *= k.eval_exact(point, params);
      return p;
    }
    case ExprKind::Quotient: {
      Rational den = children()[1].eval_exact(point, params);
      if (den.is_zero()) throw DomainError("eval_exact: division by zero");
      return children()[0].eval_exact(point, params) / den;
    }
    case ExprKind::Power: {
      Rational b = children()[0].eval_exact(point, params);
      if (b.is_zero() && exponent() < 0) throw DomainError("eval_exact: 0^negative");
      return b.pow(exponent());
    }
    case ExprKind::Abs:
      return children()[0].eval_exact(point, params).abs();
    case ExprKind::Exp:
    case ExprKind::LnAbs:
      throw EvalError("eval_exact: transcendental node");
  }
  throw std::logic_error("eval_exact: unreachable");
}

Expr Expr::substitute_params(const ParamMap& params) const {
  switch (kind()) {
    case ExprKind::Constant:
    case ExprKind::Var:
      return *this;
    case ExprKind::Param: {
      auto it = params.find(param_name());
      if (it == params.end()) return *this;
      return constant(it->second);
    }
    default: {
      std::vector<Expr> kids;
      kids.reserve(children().size());
      bool changed = false;
      for (const auto& k : children()) {
        Expr s = k.substitute_params(params);
        changed = changed || !(s == k);
        kids.push_back(std::move(s));
      }
      if (!changed) return *this;
      switch (kind()) {
        case ExprKind::Sum: return sum(std::move(kids));
        case ExprKind::Product: return product(std::move(kids));
        case ExprKind::Quotient: return quotient(kids[0], kids[1]);
        case ExprKind::Power: return pow(kids[0], exponent());
        case ExprKind::Exp: return exp(kids[0]);
        case ExprKind::LnAbs: return ln_abs(kids[0]);
        case ExprKind::Abs: return abs(kids[0]);
        default: break;
      }
    }
  }
  throw std::logic_error("substitute_params: unreachable");
}

int Expr::max_var_index() const {
  if (kind() == ExprKind::Var) return var_index();
  int m = 0;
  for (const auto& k : children()) m = std::max(m, k.max_var_index());
  return m;
}

bool Expr::references_param() const {
  if (kind() == ExprKind::Param) return true;
  for (const auto& k : children()) {
    if (k.references_param()) return true;
  }
  return false;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::Constant: return a.constant_value() == b.constant_value();
    case ExprKind::Var: return a.var_index() == b.var_index();
    case ExprKind::Param: return a.param_name() == b.param_name();
    case ExprKind::Power:
      if (a.exponent() != b.exponent()) return false;
      break;
    default: break;
  }
  if (a.children().size() != b.children().size()) return false;
  for (size_t i = 0; i < a.children().size(); ++i) {
    if (!(a.children()[i] == b.children()[i])) return false;
  }
  return true;
}

}  // namespace invlag
