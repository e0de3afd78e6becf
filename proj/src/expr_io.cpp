#include <cctype>
#include <sstream>

#include "invlag/expr.hpp"

namespace invlag {

namespace {

// Printing. Output re-parses to the same normalized tree.

struct Printer {
  const std::vector<std::string>* names = nullptr;

  std::string var_name(int index) const {
    if (names && index >= 1 && index <= static_cast<int>(names->size()))
      return (*names)[index - 1];
    return "w" + std::to_string(index);
  }

  std::string print(const Expr& e) const;
  std::string print_factor(const Expr& e) const;
  std::string print_product_magnitude(const std::vector<Expr>& kids, const Rational& lead) const;
  std::pair<bool, std::string> print_term(const Expr& e) const;
};

bool is_atom(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Var:
    case ExprKind::Param:
    case ExprKind::Exp:
    case ExprKind::LnAbs:
    case ExprKind::Abs:
      return true;
    case ExprKind::Constant:
      return e.constant_value().sign() >= 0 && e.constant_value().is_integer();
    default:
      return false;
  }
}

std::string print_const(const Rational& c) {
  return c.str();  // "p" or "p/q"; a slash re-parses as exact division
}

std::string Printer::print_product_magnitude(const std::vector<Expr>& kids, const Rational& lead) const {
  std::ostringstream out;
  bool first = true;
  if (lead != Rational(1)) {
    out << print_const(lead);
    first = false;
  }
  for (const auto& k : kids) {
    if (!first) out << "*";
    out << print_factor(k);
    first = false;
  }
  return out.str();
}

// Splits a term into (negative?, magnitude string) for sum printing.
std::pair<bool, std::string> Printer::print_term(const Expr& e) const {
  if (e.kind() == ExprKind::Constant) {
    const Rational& c = e.constant_value();
    return {c.sign() < 0, print_const(c.sign() < 0 ? -c : c)};
  }
  if (e.kind() == ExprKind::Product) {
    if (e.children()[0].kind() == ExprKind::Constant) {
      Rational c = e.children()[0].constant_value();
      std::vector<Expr> rest(e.children().begin() + 1, e.children().end());
      if (c.sign() < 0) return {true, print_product_magnitude(rest, -c)};
      return {false, print_product_magnitude(rest, c)};
    }
    return {false, print_product_magnitude(e.children(), Rational(1))};
  }
  return {false, print_factor(e)};
}

std::string Printer::print_factor(const Expr& e) const {
  switch (e.kind()) {
    case ExprKind::Constant: {
      const Rational& c = e.constant_value();
      if (c.sign() < 0) return "(-" + print_const(-c) + ")";
      return print_const(c);
    }
    case ExprKind::Var:
    case ExprKind::Param:
      return print(e);
    case ExprKind::Sum:
      return "(" + print(e) + ")";
    case ExprKind::Product:
      return print(e);
    case ExprKind::Quotient: {
      const Expr& num = e.children()[0];
      const Expr& den = e.children()[1];
      std::string n = (num.kind() == ExprKind::Sum ||
                       (num.is_constant() && num.constant_value().sign() < 0))
                          ? "(" + print(num) + ")"
                          : print(num);
      std::string d = is_atom(den) || den.kind() == ExprKind::Power
                          ? print(den)
                          : "(" + print(den) + ")";
      return n + "/" + d;
    }
    case ExprKind::Power: {
      const Expr& b = e.children()[0];
      std::string bs = is_atom(b) ? print(b) : "(" + print(b) + ")";
      return bs + "^" + std::to_string(e.exponent());
    }
    case ExprKind::Exp:
      return "exp(" + print(e.children()[0]) + ")";
    case ExprKind::LnAbs:
      return "ln(abs(" + print(e.children()[0]) + "))";
    case ExprKind::Abs:
      return "abs(" + print(e.children()[0]) + ")";
  }
  throw std::logic_error("print_factor: unreachable");
}

std::string Printer::print(const Expr& e) const {
  switch (e.kind()) {
    case ExprKind::Constant:
      return (e.constant_value().sign() < 0 ? "-" + print_const(-e.constant_value())
                                            : print_const(e.constant_value()));
    case ExprKind::Var:
      return var_name(e.var_index());
    case ExprKind::Param:
      return e.param_name();
    case ExprKind::Sum: {
      std::ostringstream out;
      bool first = true;
      for (const auto& t : e.children()) {
        auto [neg, body] = print_term(t);
        if (first) {
          out << (neg ? "-" : "") << body;
          first = false;
        } else {
          out << (neg ? " - " : " + ") << body;
        }
      }
      return out.str();
    }
    case ExprKind::Product: {
      auto [neg, body] = print_term(e);
      return (neg ? "-" : "") + body;
    }
    default:
      return print_factor(e);
  }
}

}  // namespace

std::string Expr::str() const { return Printer{}.print(*this); }

std::string Expr::str(const std::vector<std::string>& coord_names) const {
  Printer p{&coord_names};
  return p.print(*this);
}

// ---------------------------------------------------------------------------
// Parser.

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) { ++pos; return true; }
    return false;
  }
};

class Parser {
public:
  Parser(const std::string& text, const std::vector<std::string>& coords,
         const std::vector<std::string>& params)
      : lex_{text}, coords_(coords), params_(params) {}

  Expr run() {
    Expr e = expr();
    lex_.skip_ws();
    if (lex_.pos != lex_.text.size())
      throw ParseError("unexpected trailing input", lex_.pos);
    return e;
  }

private:
  Lexer lex_;
  const std::vector<std::string>& coords_;
  const std::vector<std::string>& params_;

  Expr expr() {
    bool neg = false;
    if (lex_.eat('-')) neg = true;
    else lex_.eat('+');
    Expr cur = term();
    if (neg) cur = Expr::negate(cur);
    std::vector<Expr> terms{cur};
    for (;;) {
      if (lex_.eat('+')) terms.push_back(term());
      else if (lex_.eat('-')) terms.push_back(Expr::negate(term()));
      else break;
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    Expr cur = factor();
    for (;;) {
      if (lex_.eat('*')) {
        Expr rhs = factor();  // evaluated outside the braced list (throwing
                              // calls in one leak on unwind with gcc 11)
        cur = Expr::product({cur, rhs});
      } else if (lex_.eat('/')) {
        size_t at = lex_.pos;
        Expr d = factor();
        if (d.is_zero_constant()) throw ParseError("division by constant zero", at);
        cur = Expr::quotient(cur, d);
      } else {
        break;
      }
    }
    return cur;
  }

  Expr factor() {
    Expr b = base();
    if (lex_.eat('^')) {
      size_t at = lex_.pos;
      int e = integer();
      if (e < 0 && b.is_zero_constant())
        throw ParseError("zero raised to a negative power", at);
      b = Expr::pow(b, e);
    }
    return b;
  }

  int integer() {
    lex_.skip_ws();
    size_t start = lex_.pos;
    if (lex_.pos < lex_.text.size() && (lex_.text[lex_.pos] == '-' || lex_.text[lex_.pos] == '+'))
      ++lex_.pos;
    size_t digits = lex_.pos;
    while (lex_.pos < lex_.text.size() && std::isdigit(static_cast<unsigned char>(lex_.text[lex_.pos])))
      ++lex_.pos;
    if (lex_.pos == digits) throw ParseError("expected integer exponent", start);
    return std::stoi(lex_.text.substr(start, lex_.pos - start));
  }

  Expr base() {
    char c = lex_.peek();
    if (c == '(') {
      ++lex_.pos;
      Expr e = expr();
      if (!lex_.eat(')')) throw ParseError("expected ')'", lex_.pos);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '\0') throw ParseError("unexpected end of input", lex_.pos);
    throw ParseError(std::string("unexpected character '") + c + "'", lex_.pos);
  }

  Expr number() {
    lex_.skip_ws();
    size_t start = lex_.pos;
    while (lex_.pos < lex_.text.size() &&
           std::isdigit(static_cast<unsigned char>(lex_.text[lex_.pos])))
      ++lex_.pos;
    if (lex_.pos < lex_.text.size() && lex_.text[lex_.pos] == '.') {
      ++lex_.pos;
      while (lex_.pos < lex_.text.size() &&
             std::isdigit(static_cast<unsigned char>(lex_.text[lex_.pos])))
        ++lex_.pos;
    }
    if (lex_.pos < lex_.text.size() && (lex_.text[lex_.pos] == 'e' || lex_.text[lex_.pos] == 'E')) {
      size_t save = lex_.pos;
      ++lex_.pos;
      if (lex_.pos < lex_.text.size() && (lex_.text[lex_.pos] == '+' || lex_.text[lex_.pos] == '-'))
        ++lex_.pos;
      if (lex_.pos < lex_.text.size() &&
          std::isdigit(static_cast<unsigned char>(lex_.text[lex_.pos]))) {
        while (lex_.pos < lex_.text.size() &&
               std::isdigit(static_cast<unsigned char>(lex_.text[lex_.pos])))
          ++lex_.pos;
      } else {
        lex_.pos = save;  // 'e' belongs to a following identifier, not this number
      }
    }
    std::string tok = lex_.text.substr(start, lex_.pos - start);
    if (tok.empty() || tok == ".") throw ParseError("malformed number", start);
    try {
      return Expr::constant(Rational::parse(tok));
    } catch (const std::invalid_argument&) {
      throw ParseError("malformed number '" + tok + "'", start);
    }
  }

  Expr identifier() {
    lex_.skip_ws();
    size_t start = lex_.pos;
    while (lex_.pos < lex_.text.size() &&
           (std::isalnum(static_cast<unsigned char>(lex_.text[lex_.pos])) ||
            lex_.text[lex_.pos] == '_'))
      ++lex_.pos;
    std::string name = lex_.text.substr(start, lex_.pos - start);
    if (name == "exp" || name == "ln" || name == "abs") {
      if (!lex_.eat('(')) throw ParseError("expected '(' after '" + name + "'", lex_.pos);
      Expr arg = expr();
      if (!lex_.eat(')')) throw ParseError("expected ')'", lex_.pos);
      if (name == "exp") return Expr::exp(arg);
      if (name == "ln") return Expr::ln_abs(arg);
      return Expr::abs(arg);
    }
    for (size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == name) return Expr::variable(static_cast<int>(i + 1));
    }
    for (const auto& p : params_) {
      if (p == name) return Expr::parameter(name);
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }
};

}  // namespace

Expr parse_expr(const std::string& text, const std::vector<std::string>& coord_names,
                const std::vector<std::string>& param_names) {
  return Parser(text, coord_names, param_names).run();
}

}  // namespace invlag
