#pragma once

#include "pk/polynomial.hpp"

namespace pk {

/// Rational function over Q in canonical form: numerator and denominator
/// coprime, denominator monic in graded-lex order. Equality of values is
/// equality of representations.
class RatFunc {
public:
  RatFunc() : num_(0), den_(Poly::constant(0, 1)) {}
  explicit RatFunc(unsigned arity)
      : num_(arity), den_(Poly::constant(arity, 1)) {}
  RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    reduce();
  }
  explicit RatFunc(const Poly& p) : num_(p), den_(Poly::constant(p.arity(), 1)) {}

  static RatFunc constant(unsigned arity, const Rat& c) {
    return RatFunc(Poly::constant(arity, c));
  }
  static RatFunc variable(unsigned arity, unsigned index) {
    return RatFunc(Poly::variable(arity, index));
  }

  unsigned arity() const { return num_.arity(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rat constant_value() const { return num_.constant_value() / den_.constant_value(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  RatFunc operator-() const { return RatFunc::raw(-num_, den_); }
  RatFunc operator+(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  RatFunc operator-(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  RatFunc operator*(const RatFunc& o) const {
    return RatFunc(num_ * o.num_, den_ * o.den_);
  }
  RatFunc operator*(const Rat& c) const { return RatFunc(num_ * c, den_); }
  RatFunc operator/(const RatFunc& o) const {
    if (o.is_zero()) throw eval_error("division by zero rational function");
    return RatFunc(num_ * o.den_, den_ * o.num_);
  }
  bool operator==(const RatFunc& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }

  RatFunc derivative(unsigned var) const {
    // quotient rule; canonical form restored by the constructor
    return RatFunc(num_.derivative(var) * den_ - num_ * den_.derivative(var),
                   den_ * den_);
  }

  Rat evaluate(const std::vector<Rat>& x) const {
    Rat d = den_.evaluate(x);
    if (d == 0) throw eval_error("denominator vanishes at evaluation point");
    return num_.evaluate(x) / d;
  }
  bool defined_at(const std::vector<Rat>& x) const {
    return den_.evaluate(x) != 0;
  }
  double evaluate_double(const std::vector<double>& x) const {
    double d = den_.evaluate_double(x);
    if (d == 0.0) throw eval_error("denominator vanishes at evaluation point");
    return num_.evaluate_double(x) / d;
  }

  /// Compose with a map: each variable goes to a rational function
  /// (possibly in a different arity).
  RatFunc substitute(const std::vector<RatFunc>& images) const {
    unsigned target = images.empty() ? 0 : images.front().arity();
    RatFunc one = RatFunc::constant(target, 1);
    RatFunc n = num_.substitute<RatFunc>(images, one);
    RatFunc d = den_.substitute<RatFunc>(images, one);
    return n / d;
  }

private:
  static RatFunc raw(Poly n, Poly d) {
    RatFunc r;
    r.num_ = std::move(n);
    r.den_ = std::move(d);
    return r;
  }
  void reduce() {
    if (den_.is_zero()) throw eval_error("zero denominator");
    if (num_.is_zero()) {
      den_ = Poly::constant(num_.arity(), 1);
      return;
    }
    Poly g = poly_gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = poly_divexact(num_, g);
      den_ = poly_divexact(den_, g);
    }
    Rat lead = den_.leading().second;
    if (lead != 1) {
      Rat inv = Rat(1) / lead;
      num_ = num_ * inv;
      den_ = den_ * inv;
    }
  }

  Poly num_, den_;
};

inline RatFunc operator*(const Rat& c, const RatFunc& f) { return f * c; }

}  // namespace pk
