#pragma once

#include "pk/rational.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace pk {

/// Exponent vector of a monomial; length equals the chart arity.
using Monomial = std::vector<unsigned>;

/// Graded lexicographic order: compare total degree first, then exponents
/// left to right (earlier chart variables weigh more).
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = std::accumulate(a.begin(), a.end(), 0u);
    unsigned db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

/// Multivariate polynomial over the rationals with a fixed arity.
/// Terms with zero coefficient are never stored.
class Poly {
public:
  Poly() : arity_(0) {}
  explicit Poly(unsigned arity) : arity_(arity) {}

  static Poly constant(unsigned arity, const Rat& c) {
    Poly p(arity);
    if (c != 0) p.terms_[Monomial(arity, 0)] = c;
    return p;
  }
  static Poly variable(unsigned arity, unsigned index) {
    Poly p(arity);
    Monomial m(arity, 0);
    m.at(index) = 1;
    p.terms_[m] = 1;
    return p;
  }

  unsigned arity() const { return arity_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree() == 0);
  }
  Rat constant_value() const {
    if (terms_.empty()) return Rat(0);
    return terms_.begin()->second;
  }
  const std::map<Monomial, Rat, GradedLex>& terms() const { return terms_; }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_)
      d = std::max(d, std::accumulate(m.begin(), m.end(), 0u));
    return d;
  }
  unsigned degree_in(unsigned var) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
    return d;
  }

  /// Leading term in graded-lex order.
  std::pair<Monomial, Rat> leading() const {
    return *terms_.rbegin();
  }

  Poly operator-() const {
    Poly r(arity_);
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
  }
  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
  }
  Poly operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
  }
  Poly operator*(const Poly& o) const {
    Poly r(arity_);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_) {
        Monomial m(arity_);
        for (unsigned i = 0; i < arity_; ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
      }
    return r;
  }
  Poly operator*(const Rat& c) const {
    Poly r(arity_);
    if (c == 0) return r;
    for (const auto& [m, k] : terms_) r.terms_[m] = k * c;
    return r;
  }
  bool operator==(const Poly& o) const {
    return arity_ == o.arity_ && terms_ == o.terms_;
  }

  Poly pow(unsigned e) const {
    Poly r = constant(arity_, 1);
    Poly base = *this;
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  Poly derivative(unsigned var) const {
    Poly r(arity_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Monomial mm = m;
      mm[var] -= 1;
      r.add_term(mm, c * Rat(m[var]));
    }
    return r;
  }

  Rat evaluate(const std::vector<Rat>& x) const {
    Rat acc = 0;
    for (const auto& [m, c] : terms_) {
      Rat t = c;
      for (unsigned i = 0; i < arity_; ++i)
        for (unsigned k = 0; k < m[i]; ++k) t *= x[i];
      acc += t;
    }
    return acc;
  }
  double evaluate_double(const std::vector<double>& x) const {
    double acc = 0;
    for (const auto& [m, c] : terms_) {
      double t = static_cast<double>(c);
      for (unsigned i = 0; i < arity_; ++i)
        for (unsigned k = 0; k < m[i]; ++k) t *= x[i];
      acc += t;
    }
    return acc;
  }

  /// Substitute each variable by a polynomial in some other arity.
  template <typename Value>
  Value substitute(const std::vector<Value>& images, const Value& one) const {
    Value acc = one - one;  // zero of the target ring
    for (const auto& [m, c] : terms_) {
      Value t = one * c;
      for (unsigned i = 0; i < arity_; ++i)
        for (unsigned k = 0; k < m[i]; ++k) t = t * images[i];
      acc = acc + t;
    }
    return acc;
  }

  void add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_[m] = c;
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

private:
  unsigned arity_;
  std::map<Monomial, Rat, GradedLex> terms_;
};

inline Poly operator*(const Rat& c, const Poly& p) { return p * c; }

/// Exact division; throws if the divisor does not divide evenly.
Poly poly_divexact(const Poly& num, const Poly& den);

/// Polynomial gcd (primitive, positive leading coefficient over Z).
/// gcd(0, p) is the normalization of p; gcd of two constants is 1.
Poly poly_gcd(Poly a, Poly b);

std::string poly_to_string(const Poly& p, const std::vector<std::string>& names);

}  // namespace pk
