#include "invlag/poly.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace invlag {

Poly Poly::constant(int dim, const Rational& c) {
  Poly p(dim);
  p.add_term(Monomial(dim, 0), c);
  return p;
}

Poly Poly::variable(int dim, int index) {
  if (index < 1 || index > dim) throw std::invalid_argument("Poly::variable: index out of range");
  Monomial m(dim, 0);
  m[index - 1] = 1;
  return monomial(dim, std::move(m), Rational(1));
}

Poly Poly::monomial(int dim, Monomial m, const Rational& c) {
  Poly p(dim);
  p.add_term(m, c);
  return p;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first == Monomial(dim_, 0);
}

Rational Poly::constant_term() const {
  auto it = terms_.find(Monomial(dim_, 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::total_degree() const {
  int deg = 0;
  for (const auto& [m, c] : terms_)
    deg = std::max(deg, std::accumulate(m.begin(), m.end(), 0));
  return deg;
}

Rational Poly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Poly& Poly::add_term(const Monomial& m, const Rational& c) {
  if (static_cast<int>(m.size()) != dim_) throw std::invalid_argument("Poly::add_term: bad monomial");
  if (c.is_zero()) return *this;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
  return *this;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms_) out.add_term(m, c);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out(a.dim_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m(a.dim_);
      for (int i = 0; i < a.dim_; ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Poly Poly::operator-() const {
  Poly out(dim_);
  for (const auto& [m, c] : terms_) out.add_term(m, -c);
  return out;
}

Poly Poly::scaled(const Rational& c) const {
  Poly out(dim_);
  if (c.is_zero()) return out;
  for (const auto& [m, coeff] : terms_) out.add_term(m, coeff * c);
  return out;
}

Poly Poly::pow(int e) const {
  if (e < 0) throw std::invalid_argument("Poly::pow: negative exponent");
  Poly out = Poly::constant(dim_, Rational(1));
  for (int i = 0; i < e; ++i) out = out * *this;
  return out;
}

Poly Poly::derivative(int index) const {
  Poly out(dim_);
  for (const auto& [m, c] : terms_) {
    int e = m[index - 1];
    if (e == 0) continue;
    Monomial d = m;
    d[index - 1] = e - 1;
    out.add_term(d, c * Rational(e));
  }
  return out;
}

Rational Poly::eval_exact(const std::vector<Rational>& point) const {
  Rational acc;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < dim_; ++i) {
      if (m[i] != 0) t *= point.at(i).pow(m[i]);
    }
    acc += t;
  }
  return acc;
}

double Poly::eval(const std::vector<double>& point) const {
  double acc = 0;
  for (const auto& [m, c] : terms_) {
    double t = c.to_double();
    for (int i = 0; i < dim_; ++i) {
      for (int k = 0; k < m[i]; ++k) t *= point[i];
    }
    acc += t;
  }
  return acc;
}

Expr Poly::to_expr() const {
  std::vector<Expr> terms;
  for (const auto& [m, c] : terms_) {
    std::vector<Expr> fs{Expr::constant(c)};
    for (int i = 0; i < dim_; ++i) {
      if (m[i] != 0) fs.push_back(Expr::pow(Expr::variable(i + 1), m[i]));
    }
    terms.push_back(Expr::product(std::move(fs)));
  }
  return Expr::sum(std::move(terms));
}

namespace {

std::optional<Poly> expand(const Expr& e, int dim, const ParamMap& params) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return Poly::constant(dim, e.constant_value());
    case ExprKind::Var:
      if (e.var_index() > dim) return std::nullopt;
      return Poly::variable(dim, e.var_index());
    case ExprKind::Param: {
      auto it = params.find(e.param_name());
      if (it == params.end()) return std::nullopt;
      return Poly::constant(dim, it->second);
    }
    case ExprKind::Sum: {
      Poly acc(dim);
      for (const auto& k : e.children()) {
        auto p = expand(k, dim, params);
        if (!p) return std::nullopt;
        acc = acc + *p;
      }
      return acc;
    }
    case ExprKind::Product: {
      Poly acc = Poly::constant(dim, Rational(1));
      for (const auto& k : e.children()) {
        auto p = expand(k, dim, params);
        if (!p) return std::nullopt;
        acc = acc * *p;
      }
      return acc;
    }
    case ExprKind::Quotient: {
      auto num = expand(e.children()[0], dim, params);
      auto den = expand(e.children()[1], dim, params);
      if (!num || !den || !den->is_constant() || den->constant_term().is_zero())
        return std::nullopt;
      return num->scaled(den->constant_term().inverse());
    }
    case ExprKind::Power: {
      auto base = expand(e.children()[0], dim, params);
      if (!base) return std::nullopt;
      int exp = e.exponent();
      if (exp >= 0) return base->pow(exp);
      if (!base->is_constant() || base->constant_term().is_zero()) return std::nullopt;
      return Poly::constant(dim, base->constant_term().pow(exp));
    }
    case ExprKind::Exp:
    case ExprKind::LnAbs:
    case ExprKind::Abs:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Poly> as_polynomial(const Expr& e, int dim, const ParamMap& params) {
  return expand(e, dim, params);
}

std::vector<Monomial> monomials_up_to_degree(int dim, int degree) {
  std::vector<Monomial> out;
  Monomial cur(dim, 0);
  // Graded order: degree 0, 1, ..., lexicographic within a degree.
  for (int d = 0; d <= degree; ++d) {
    std::vector<Monomial> level;
    std::function<void(int, int)> rec = [&](int idx, int left) {
      if (idx == dim - 1) {
        cur[idx] = left;
        level.push_back(cur);
        return;
      }
      for (int k = left; k >= 0; --k) {
        cur[idx] = k;
        rec(idx + 1, left - k);
      }
    };
    rec(0, d);
    for (auto& m : level) out.push_back(std::move(m));
  }
  return out;
}

}  // namespace invlag
