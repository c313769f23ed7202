#include "pk/polynomial.hpp"

#include <cassert>
#include <sstream>

namespace pk {

namespace {

// Integer content together with sign of the leading coefficient; dividing by
// it makes a polynomial primitive with positive leading coefficient.
Rat content_unit(const Poly& p) {
  if (p.is_zero()) return Rat(1);
  Int num_gcd = 0, den_lcm = 1;
  for (const auto& [m, c] : p.terms()) {
    num_gcd = gcd(num_gcd, numerator(c));
    den_lcm = lcm(den_lcm, denominator(c));
  }
  Rat u(num_gcd, den_lcm);
  if (p.leading().second < 0) u = -u;
  return u;
}

Poly make_primitive(const Poly& p) {
  if (p.is_zero()) return p;
  Rat u = content_unit(p);
  return p * (Rat(1) / u);
}

// View p as univariate in `var`: coefficients indexed by the power of var,
// each a polynomial with var's exponent zeroed out.
std::vector<Poly> coeffs_in(const Poly& p, unsigned var) {
  std::vector<Poly> out(p.degree_in(var) + 1, Poly(p.arity()));
  for (const auto& [m, c] : p.terms()) {
    Monomial mm = m;
    unsigned k = mm[var];
    mm[var] = 0;
    out[k].add_term(mm, c);
  }
  return out;
}

Poly from_coeffs(const std::vector<Poly>& cs, unsigned var, unsigned arity) {
  Poly r(arity);
  for (unsigned k = 0; k < cs.size(); ++k)
    for (const auto& [m, c] : cs[k].terms()) {
      Monomial mm = m;
      mm[var] += k;
      r.add_term(mm, c);
    }
  return r;
}

// Pseudo-remainder of f by g in the main variable `var`.
Poly pseudo_rem(Poly f, const Poly& g, unsigned var) {
  unsigned dg = g.degree_in(var);
  auto gc = coeffs_in(g, var);
  Poly lg = gc[dg];
  while (!f.is_zero() && f.degree_in(var) >= dg) {
    unsigned df = f.degree_in(var);
    auto fc = coeffs_in(f, var);
    Poly lf = fc[df];
    // f <- lg*f - lf * v^(df-dg) * g
    Poly shift = Poly::variable(f.arity(), var).pow(df - dg);
    f = lg * f - lf * shift * g;
    if (!f.is_zero() && f.degree_in(var) == df) {
      // leading term must have cancelled
      assert(false && "pseudo-division failed to reduce degree");
    }
  }
  return f;
}

}  // namespace

Poly poly_divexact(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw eval_error("polynomial division by zero");
  Poly r = num;
  Poly q(num.arity());
  auto [dm, dc] = den.is_zero() ? std::pair<Monomial, Rat>{} : den.leading();
  while (!r.is_zero()) {
    auto [rm, rc] = r.leading();
    Monomial qm(num.arity());
    for (unsigned i = 0; i < num.arity(); ++i) {
      if (rm[i] < dm[i]) throw eval_error("polynomial division not exact");
      qm[i] = rm[i] - dm[i];
    }
    Poly t(num.arity());
    t.add_term(qm, rc / dc);
    q = q + t;
    r = r - t * den;
  }
  return q;
}

Poly poly_gcd(Poly a, Poly b) {
  if (a.is_zero()) return make_primitive(b);
  if (b.is_zero()) return make_primitive(a);
  unsigned arity = a.arity();

  // Main variable: last one appearing in either polynomial.
  int var = -1;
  for (int i = static_cast<int>(arity) - 1; i >= 0; --i)
    if (a.degree_in(i) > 0 || b.degree_in(i) > 0) {
      var = i;
      break;
    }
  if (var < 0) return Poly::constant(arity, 1);

  auto content_of = [&](const Poly& p) {
    auto cs = coeffs_in(p, var);
    Poly g(arity);
    for (const auto& c : cs) g = poly_gcd(g, c);
    return g;
  };

  Poly ca = content_of(a), cb = content_of(b);
  Poly f = poly_divexact(a, ca), g = poly_divexact(b, cb);
  Poly cont_gcd = poly_gcd(ca, cb);

  if (f.degree_in(var) < g.degree_in(var)) std::swap(f, g);
  while (!g.is_zero()) {
    Poly r = pseudo_rem(f, g, var);
    f = g;
    if (r.is_zero()) {
      g = Poly(arity);
    } else {
      g = poly_divexact(r, content_of(r));
      g = make_primitive(g);
    }
  }
  return make_primitive(cont_gcd * make_primitive(f));
}

std::string poly_to_string(const Poly& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  // Print highest terms first for readability.
  const auto& ts = p.terms();
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
    const auto& [m, c] = *it;
    Rat cc = c;
    if (first) {
      if (cc < 0) {
        os << "-";
        cc = -cc;
      }
    } else {
      os << (cc < 0 ? " - " : " + ");
      if (cc < 0) cc = -cc;
    }
    first = false;
    bool any_var = false;
    std::ostringstream vars;
    for (unsigned i = 0; i < p.arity(); ++i) {
      if (m[i] == 0) continue;
      if (any_var) vars << "*";
      any_var = true;
      vars << names.at(i);
      if (m[i] > 1) vars << "^" << m[i];
    }
    if (!any_var) {
      os << rational_to_string(cc);
    } else if (cc == 1) {
      os << vars.str();
    } else {
      os << rational_to_string(cc) << "*" << vars.str();
    }
  }
  return os.str();
}

}  // namespace pk
