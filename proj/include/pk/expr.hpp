#pragma once

#include "pk/rational.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace pk {

/// Numeric expression tree over elementary functions. Immutable; nodes are
/// shared freely between expressions and threads.
class Expr {
public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos, Arctan, Sqrt };

  using Ptr = std::shared_ptr<const Expr>;

  static Ptr constant(const Rat& c) { return make(Kind::Const, {}, c, 0, 0); }
  static Ptr variable(unsigned index) { return make(Kind::Var, {}, Rat(0), index, 0); }
  static Ptr add(Ptr a, Ptr b) { return make(Kind::Add, {a, b}, Rat(0), 0, 0); }
  static Ptr sub(Ptr a, Ptr b) { return make(Kind::Sub, {a, b}, Rat(0), 0, 0); }
  static Ptr mul(Ptr a, Ptr b) { return make(Kind::Mul, {a, b}, Rat(0), 0, 0); }
  static Ptr div(Ptr a, Ptr b) { return make(Kind::Div, {a, b}, Rat(0), 0, 0); }
  static Ptr neg(Ptr a) { return make(Kind::Neg, {a}, Rat(0), 0, 0); }
  static Ptr pow(Ptr a, int e) { return make(Kind::Pow, {a}, Rat(0), 0, e); }
  static Ptr func(Kind k, Ptr a) { return make(k, {a}, Rat(0), 0, 0); }

  Kind kind;
  std::vector<Ptr> children;
  Rat value;       // Const
  unsigned var;    // Var
  int exponent;    // Pow

  double evaluate(const std::vector<double>& x) const;
  Ptr differentiate(unsigned v) const;
  std::string to_string(const std::vector<std::string>& names) const;
  /// Number of internal (non-leaf) nodes.
  unsigned internal_nodes() const;

private:
  static Ptr make(Kind k, std::vector<Ptr> ch, Rat c, unsigned v, int e) {
    auto n = std::make_shared<Expr>();
    n->kind = k;
    n->children = std::move(ch);
    n->value = std::move(c);
    n->var = v;
    n->exponent = e;
    return n;
  }
};

}  // namespace pk
