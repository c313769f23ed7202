#include "pk/expr.hpp"

#include <sstream>

namespace pk {

double Expr::evaluate(const std::vector<double>& x) const {
  switch (kind) {
    case Kind::Const: return static_cast<double>(value);
    case Kind::Var: return x.at(var);
    case Kind::Add: return children[0]->evaluate(x) + children[1]->evaluate(x);
    case Kind::Sub: return children[0]->evaluate(x) - children[1]->evaluate(x);
    case Kind::Mul: return children[0]->evaluate(x) * children[1]->evaluate(x);
    case Kind::Div: {
      double d = children[1]->evaluate(x);
      if (d == 0.0) throw eval_error("division by zero in numeric expression");
      return children[0]->evaluate(x) / d;
    }
    case Kind::Neg: return -children[0]->evaluate(x);
    case Kind::Pow: {
      double b = children[0]->evaluate(x);
      if (exponent < 0 && b == 0.0) throw eval_error("zero base with negative power");
      return std::pow(b, exponent);
    }
    case Kind::Exp: return std::exp(children[0]->evaluate(x));
    case Kind::Sin: return std::sin(children[0]->evaluate(x));
    case Kind::Cos: return std::cos(children[0]->evaluate(x));
    case Kind::Arctan: return std::atan(children[0]->evaluate(x));
    case Kind::Sqrt: {
      double a = children[0]->evaluate(x);
      if (a < 0.0) throw eval_error("sqrt of negative value");
      return std::sqrt(a);
    }
  }
  throw eval_error("corrupt expression node");
}

Expr::Ptr Expr::differentiate(unsigned v) const {
  auto zero = Expr::constant(Rat(0));
  auto self = std::make_shared<Expr>(*this);
  switch (kind) {
    case Kind::Const: return zero;
    case Kind::Var: return Expr::constant(Rat(var == v ? 1 : 0));
    case Kind::Add: return Expr::add(children[0]->differentiate(v), children[1]->differentiate(v));
    case Kind::Sub: return Expr::sub(children[0]->differentiate(v), children[1]->differentiate(v));
    case Kind::Mul:
      return Expr::add(Expr::mul(children[0]->differentiate(v), children[1]),
                       Expr::mul(children[0], children[1]->differentiate(v)));
    case Kind::Div:
      return Expr::div(Expr::sub(Expr::mul(children[0]->differentiate(v), children[1]),
                                 Expr::mul(children[0], children[1]->differentiate(v))),
                       Expr::pow(children[1], 2));
    case Kind::Neg: return Expr::neg(children[0]->differentiate(v));
    case Kind::Pow:
      if (exponent == 0) return zero;
      return Expr::mul(Expr::mul(Expr::constant(Rat(exponent)), Expr::pow(children[0], exponent - 1)),
                       children[0]->differentiate(v));
    case Kind::Exp: return Expr::mul(self, children[0]->differentiate(v));
    case Kind::Sin:
      return Expr::mul(Expr::func(Kind::Cos, children[0]), children[0]->differentiate(v));
    case Kind::Cos:
      return Expr::neg(Expr::mul(Expr::func(Kind::Sin, children[0]), children[0]->differentiate(v)));
    case Kind::Arctan:
      return Expr::div(children[0]->differentiate(v),
                       Expr::add(Expr::constant(Rat(1)), Expr::pow(children[0], 2)));
    case Kind::Sqrt:
      return Expr::div(children[0]->differentiate(v),
                       Expr::mul(Expr::constant(Rat(2)), self));
  }
  throw eval_error("corrupt expression node");
}

std::string Expr::to_string(const std::vector<std::string>& names) const {
  std::ostringstream os;
  auto paren = [&](const Ptr& c) { return "(" + c->to_string(names) + ")"; };
  switch (kind) {
    case Kind::Const: return rational_to_string(value);
    case Kind::Var: return names.at(var);
    case Kind::Add: return paren(children[0]) + " + " + paren(children[1]);
    case Kind::Sub: return paren(children[0]) + " - " + paren(children[1]);
    case Kind::Mul: return paren(children[0]) + "*" + paren(children[1]);
    case Kind::Div: return paren(children[0]) + "/" + paren(children[1]);
    case Kind::Neg: return "-" + paren(children[0]);
    case Kind::Pow: return paren(children[0]) + "^" + std::to_string(exponent);
    case Kind::Exp: return "exp(" + children[0]->to_string(names) + ")";
    case Kind::Sin: return "sin(" + children[0]->to_string(names) + ")";
    case Kind::Cos: return "cos(" + children[0]->to_string(names) + ")";
    case Kind::Arctan: return "arctan(" + children[0]->to_string(names) + ")";
    case Kind::Sqrt: return "sqrt(" + children[0]->to_string(names) + ")";
  }
  throw eval_error("corrupt expression node");
}

unsigned Expr::internal_nodes() const {
  if (children.empty()) return 0;
  unsigned n = 1;
  for (const auto& c : children) n += c->internal_nodes();
  return n;
}

}  // namespace pk
