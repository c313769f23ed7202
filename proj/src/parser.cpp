#include "pk/scalar.hpp"

#include <cctype>
#include <optional>

namespace pk {

namespace {

struct Parser {
  const std::string& s;
  const ChartPtr& chart;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos); }

  Expr::Ptr parse_expr() {
    bool neg = false;
    skip_ws();
    if (accept('-')) neg = true;
    else accept('+');
    Expr::Ptr acc = parse_term();
    if (neg) acc = Expr::neg(acc);
    while (true) {
      if (accept('+')) acc = Expr::add(acc, parse_term());
      else if (accept('-')) acc = Expr::sub(acc, parse_term());
      else break;
    }
    return acc;
  }

  Expr::Ptr parse_term() {
    Expr::Ptr acc = parse_factor();
    while (true) {
      if (accept('*')) acc = Expr::mul(acc, parse_factor());
      else if (accept('/')) acc = Expr::div(acc, parse_factor());
      else break;
    }
    return acc;
  }

  Expr::Ptr parse_factor() {
    Expr::Ptr b = parse_base();
    if (accept('^')) {
      skip_ws();
      bool neg = accept('-');
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) fail("expected integer exponent");
      int e = std::stoi(s.substr(start, pos - start));
      return Expr::pow(b, neg ? -e : e);
    }
    return b;
  }

  Expr::Ptr parse_base() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of expression");
    char c = s[pos];
    if (accept('-')) return Expr::neg(parse_base());
    if (accept('(')) {
      Expr::Ptr e = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr::Ptr parse_number() {
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    Int num(s.substr(start, pos - start));
    // a '/' between two integer literals is handled by term parsing; the
    // resulting Div node reduces to the same rational in EXACT mode
    return Expr::constant(Rat(num));
  }

  Expr::Ptr parse_ident() {
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    std::string name = s.substr(start, pos - start);
    static const std::pair<const char*, Expr::Kind> funcs[] = {
        {"exp", Expr::Kind::Exp},   {"sin", Expr::Kind::Sin},
        {"cos", Expr::Kind::Cos},   {"arctan", Expr::Kind::Arctan},
        {"sqrt", Expr::Kind::Sqrt}};
    for (const auto& [fname, kind] : funcs) {
      if (name == fname) {
        if (!accept('(')) fail("expected '(' after function name");
        Expr::Ptr arg = parse_expr();
        if (!accept(')')) fail("expected ')'");
        return Expr::func(kind, arg);
      }
    }
    int idx = chart->index_of(name);
    if (idx < 0) {
      pos = start;
      fail("unknown variable '" + name + "'");
    }
    return Expr::variable(static_cast<unsigned>(idx));
  }
};

bool has_func(const Expr::Ptr& e) {
  switch (e->kind) {
    case Expr::Kind::Exp:
    case Expr::Kind::Sin:
    case Expr::Kind::Cos:
    case Expr::Kind::Arctan:
    case Expr::Kind::Sqrt:
      return true;
    default:
      for (const auto& c : e->children)
        if (has_func(c)) return true;
      return false;
  }
}

RatFunc to_ratfunc(const Expr::Ptr& e, unsigned arity) {
  switch (e->kind) {
    case Expr::Kind::Const: return RatFunc::constant(arity, e->value);
    case Expr::Kind::Var: return RatFunc::variable(arity, e->var);
    case Expr::Kind::Add: return to_ratfunc(e->children[0], arity) + to_ratfunc(e->children[1], arity);
    case Expr::Kind::Sub: return to_ratfunc(e->children[0], arity) - to_ratfunc(e->children[1], arity);
    case Expr::Kind::Mul: return to_ratfunc(e->children[0], arity) * to_ratfunc(e->children[1], arity);
    case Expr::Kind::Div: {
      RatFunc d = to_ratfunc(e->children[1], arity);
      if (d.is_zero()) throw eval_error("division-by-zero literal");
      return to_ratfunc(e->children[0], arity) / d;
    }
    case Expr::Kind::Neg: return -to_ratfunc(e->children[0], arity);
    case Expr::Kind::Pow: {
      RatFunc b = to_ratfunc(e->children[0], arity);
      unsigned abs_e = static_cast<unsigned>(e->exponent < 0 ? -e->exponent : e->exponent);
      RatFunc r = RatFunc(b.num().pow(abs_e), b.den().pow(abs_e));
      if (e->exponent < 0) {
        if (r.is_zero()) throw eval_error("division-by-zero literal");
        return RatFunc::constant(arity, 1) / r;
      }
      return r;
    }
    default:
      throw mode_error("elementary function in EXACT conversion");
  }
}

// Division-by-zero literals must be rejected even in NUMERIC mode when the
// denominator is a constant subtree.
std::optional<Rat> constant_value(const Expr::Ptr& e) {
  switch (e->kind) {
    case Expr::Kind::Const: return e->value;
    case Expr::Kind::Var: return std::nullopt;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div: {
      auto a = constant_value(e->children[0]);
      auto b = constant_value(e->children[1]);
      if (!a || !b) return std::nullopt;
      switch (e->kind) {
        case Expr::Kind::Add: return *a + *b;
        case Expr::Kind::Sub: return *a - *b;
        case Expr::Kind::Mul: return *a * *b;
        default:
          if (*b == 0) throw eval_error("division-by-zero literal");
          return *a / *b;
      }
    }
    case Expr::Kind::Neg: {
      auto a = constant_value(e->children[0]);
      return a ? std::optional<Rat>(-*a) : std::nullopt;
    }
    default: return std::nullopt;
  }
}

void check_literal_divzero(const Expr::Ptr& e) {
  for (const auto& c : e->children) check_literal_divzero(c);
  if (e->kind == Expr::Kind::Div) {
    auto d = constant_value(e->children[1]);
    if (d && *d == 0) throw eval_error("division-by-zero literal");
  }
}

}  // namespace

Scalar parse_scalar(const std::string& text, const ChartPtr& chart) {
  Parser p{text, chart};
  Expr::Ptr ast = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  if (!has_func(ast)) return Scalar(chart, to_ratfunc(ast, chart->dim()));
  check_literal_divzero(ast);
  return Scalar(chart, ast);
}

}  // namespace pk
