#include "pk/calculus.hpp"

namespace pk {

int sort_tuple(IdxTuple& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && idx[j - 1] > idx[j]) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
      --j;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i - 1] == idx[i]) return 0;
  return sign;
}

namespace {

// Derivative with respect to the odd coordinate theta_i. Left derivative
// carries sign (-1)^position, right derivative (-1)^(degree-1-position).
Multivector theta_derivative(const Multivector& P, unsigned i, bool from_right) {
  Multivector r(P.chart(), P.degree() == 0 ? 0 : P.degree() - 1);
  if (P.degree() == 0) return r;
  for (const auto& [idx, c] : P.coeffs()) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] != i) continue;
      IdxTuple rest;
      rest.reserve(idx.size() - 1);
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (j != k) rest.push_back(idx[j]);
      std::size_t exp = from_right ? idx.size() - 1 - k : k;
      r.add(rest, (exp % 2 == 0) ? c : -c);
      break;
    }
  }
  return r;
}

Multivector x_derivative(const Multivector& P, unsigned i) {
  Multivector r(P.chart(), P.degree());
  for (const auto& [idx, c] : P.coeffs()) r.add(idx, c.differentiate(i));
  return r;
}

// Deterministic double sample points for NUMERIC-mode residual checks.
std::vector<std::vector<double>> double_samples(unsigned n) {
  static const double vals[] = {0.3, -0.7, 1.1};
  std::vector<std::vector<double>> out;
  std::vector<unsigned> idx(n, 0);
  for (int count = 0; count < 81; ++count) {
    std::vector<double> p(n);
    for (unsigned i = 0; i < n; ++i) p[i] = vals[idx[i]];
    out.push_back(std::move(p));
    unsigned i = 0;
    for (; i < n; ++i) {
      if (++idx[i] < 3) break;
      idx[i] = 0;
    }
    if (i == n) break;
  }
  return out;
}

template <typename Tag>
double sampled_sup(const GradedObject<Tag>& T) {
  double worst = 0.0;
  for (const auto& x : double_samples(T.chart()->dim())) {
    for (const auto& [idx, c] : T.coeffs()) {
      try {
        worst = std::max(worst, std::abs(c.evaluate_double(x)));
      } catch (const eval_error&) {
        // skip singular sample points
      }
    }
  }
  return worst;
}

}  // namespace

Multivector schouten(const Multivector& P, const Multivector& Q) {
  unsigned p = P.degree(), q = Q.degree();
  unsigned rdeg = p + q == 0 ? 0 : p + q - 1;
  Multivector r(P.chart(), rdeg);
  if (p + q == 0) return r;
  // BV odd-coordinate formula on functions of (x_i, theta_i = d/dx_i):
  //   [P,Q] = sum_i (right d P/d theta_i)(dQ/dx_i)
  //         - sum_i (dP/dx_i)(left d Q/d theta_i)
  for (unsigned i = 0; i < P.chart()->dim(); ++i) {
    if (p > 0)
      r = r + wedge(theta_derivative(P, i, /*from_right=*/true), x_derivative(Q, i));
    if (q > 0)
      r = r - wedge(x_derivative(P, i), theta_derivative(Q, i, /*from_right=*/false));
  }
  return r;
}

PoissonVerdict is_poisson(const Multivector& pi) {
  Multivector jac = schouten(pi, pi);
  if (pi.all_exact())
    return {jac.is_zero() ? PoissonVerdict::Kind::True : PoissonVerdict::Kind::False, 0.0};
  double res = sampled_sup(jac);
  if (res > 1e-6) return {PoissonVerdict::Kind::False, res};
  return {PoissonVerdict::Kind::NotDetermined, res};
}

std::vector<std::vector<Scalar>> bivector_components(const Multivector& pi) {
  if (pi.degree() != 2) throw mode_error("bivector expected");
  unsigned n = pi.chart()->dim();
  std::vector<std::vector<Scalar>> m(n, std::vector<Scalar>(n, Scalar::constant(pi.chart(), 0)));
  for (const auto& [idx, c] : pi.coeffs()) {
    m[idx[0]][idx[1]] = c;
    m[idx[1]][idx[0]] = -c;
  }
  return m;
}

Multivector sharp(const Multivector& pi, const Form& xi) {
  if (xi.degree() != 1) throw mode_error("sharp needs a 1-form");
  auto comp = bivector_components(pi);
  unsigned n = pi.chart()->dim();
  Multivector r(pi.chart(), 1);
  for (const auto& [idx, xa] : xi.coeffs()) {
    unsigned a = idx[0];
    for (unsigned b = 0; b < n; ++b) r.add({b}, xa * comp[a][b]);
  }
  return r;
}

std::vector<std::vector<Scalar>> sharp_matrix(const Multivector& pi) {
  auto comp = bivector_components(pi);
  unsigned n = pi.chart()->dim();
  std::vector<std::vector<Scalar>> m(n, std::vector<Scalar>(n, Scalar::constant(pi.chart(), 0)));
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) m[b][a] = comp[a][b];
  return m;
}

Mat<Rat> sharp_matrix_at(const Multivector& pi, const Point& p) {
  auto m = sharp_matrix(pi);
  unsigned n = pi.chart()->dim();
  Mat<Rat> out(n, std::vector<Rat>(n, Rat(0)));
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) out[i][j] = m[i][j].evaluate(p);
  return out;
}

Form d(const Form& omega) {
  Form r(omega.chart(), omega.degree() + 1);
  if (r.degree() > omega.chart()->dim()) return r;
  for (const auto& [idx, c] : omega.coeffs()) {
    for (unsigned a = 0; a < omega.chart()->dim(); ++a) {
      IdxTuple t;
      t.reserve(idx.size() + 1);
      t.push_back(a);
      t.insert(t.end(), idx.begin(), idx.end());
      r.add(t, c.differentiate(a));
    }
  }
  return r;
}

Form interior(const Multivector& X, const Form& omega) {
  if (X.degree() != 1) throw mode_error("interior product needs a vector field");
  Form r(omega.chart(), omega.degree() == 0 ? 0 : omega.degree() - 1);
  if (omega.degree() == 0) return r;
  for (const auto& [idx, w] : omega.coeffs()) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      Scalar xi = X.coefficient({idx[k]});
      if (xi.is_zero()) continue;
      IdxTuple rest;
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (j != k) rest.push_back(idx[j]);
      Scalar term = xi * w;
      r.add(rest, (k % 2 == 0) ? term : -term);
    }
  }
  return r;
}

Form lie_derivative(const Multivector& X, const Form& omega) {
  if (X.degree() != 1) throw mode_error("Lie derivative needs a vector field");
  unsigned n = omega.chart()->dim();
  Form r(omega.chart(), omega.degree());
  for (const auto& [idx, w] : omega.coeffs()) {
    // X(w) dx_I
    for (unsigned a = 0; a < n; ++a) {
      Scalar xa = X.coefficient({a});
      if (!xa.is_zero()) r.add(idx, xa * w.differentiate(a));
    }
    // w * sum_k dx_{i_1} ... d(X^{i_k}) ... dx_{i_m}
    for (std::size_t k = 0; k < idx.size(); ++k) {
      Scalar xik = X.coefficient({idx[k]});
      for (unsigned a = 0; a < n; ++a) {
        Scalar da = xik.differentiate(a);
        if (da.is_zero()) continue;
        IdxTuple t = idx;
        t[k] = a;
        r.add(t, w * da);
      }
    }
  }
  return r;
}

Multivector lie_derivative(const Multivector& X, const Multivector& T) {
  if (X.degree() != 1) throw mode_error("Lie derivative needs a vector field");
  return schouten(X, T);
}

Multivector vector_field(const ChartPtr& chart, const std::vector<Scalar>& comps) {
  Multivector r(chart, 1);
  for (unsigned i = 0; i < comps.size(); ++i) r.add({i}, comps[i]);
  return r;
}

Multivector basis_multivector(const ChartPtr& chart, const IdxTuple& idx) {
  Multivector r(chart, static_cast<unsigned>(idx.size()));
  r.add(idx, Scalar::constant(chart, 1));
  return r;
}

Form basis_form(const ChartPtr& chart, const IdxTuple& idx) {
  Form r(chart, static_cast<unsigned>(idx.size()));
  r.add(idx, Scalar::constant(chart, 1));
  return r;
}

Form d_of_scalar(const Scalar& f) {
  Form r(f.chart(), 1);
  for (unsigned a = 0; a < f.chart()->dim(); ++a) r.add({a}, f.differentiate(a));
  return r;
}

Multivector euler_field(const ChartPtr& chart, unsigned xi, unsigned yi) {
  Multivector r(chart, 1);
  r.add({xi}, Scalar::variable(chart, xi));
  r.add({yi}, Scalar::variable(chart, yi));
  return r;
}

Multivector rotation_field(const ChartPtr& chart, unsigned xi, unsigned yi) {
  Multivector r(chart, 1);
  r.add({yi}, Scalar::variable(chart, xi));
  r.add({xi}, -Scalar::variable(chart, yi));
  return r;
}

std::vector<std::vector<Scalar>> SmoothMap::jacobian() const {
  std::vector<std::vector<Scalar>> J;
  J.reserve(components.size());
  for (const auto& comp : components) {
    std::vector<Scalar> row;
    for (unsigned i = 0; i < source->dim(); ++i) row.push_back(comp.differentiate(i));
    J.push_back(std::move(row));
  }
  return J;
}

Mat<Rat> SmoothMap::jacobian_at(const Point& p) const {
  auto J = jacobian();
  Mat<Rat> out(J.size(), std::vector<Rat>(source->dim(), Rat(0)));
  for (std::size_t a = 0; a < J.size(); ++a)
    for (unsigned i = 0; i < source->dim(); ++i) out[a][i] = J[a][i].evaluate(p);
  return out;
}

Point SmoothMap::apply(const Point& p) const {
  Point q{target, {}};
  q.coords.reserve(components.size());
  for (const auto& comp : components) q.coords.push_back(comp.evaluate(p));
  return q;
}

Scalar SmoothMap::pullback_scalar(const Scalar& f) const {
  return f.substitute(source, components);
}

Form pullback_form(const SmoothMap& phi, const Form& omega) {
  Form r(phi.source, omega.degree());
  if (omega.degree() > phi.source->dim()) return r;
  for (const auto& [idx, c] : omega.coeffs()) {
    Form term(phi.source, 0);
    term.add({}, phi.pullback_scalar(c));
    for (unsigned i : idx) term = wedge(term, d_of_scalar(phi.components[i]));
    r = r + term;
  }
  return r;
}

Multivector hamiltonian_field(const Multivector& pi, const Scalar& f) {
  return sharp(pi, d_of_scalar(f));
}

PoissonVerdict map_related(const SmoothMap& phi, const Multivector& pi_src,
                           const Multivector& pi_tgt) {
  unsigned n = phi.target->dim();
  auto tgt_comp = bivector_components(pi_tgt);
  bool exact = pi_src.all_exact() && pi_tgt.all_exact();
  for (const auto& c : phi.components) exact = exact && c.exact();
  double worst = 0.0;
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = a + 1; b < n; ++b) {
      Scalar fa = phi.components[a], fb = phi.components[b];
      Multivector X = sharp(pi_src, d_of_scalar(fa));
      Scalar lhs = Scalar::constant(phi.source, 0);
      for (unsigned i = 0; i < phi.source->dim(); ++i)
        lhs = lhs + X.coefficient({i}) * fb.differentiate(i);
      Scalar residual = lhs - phi.pullback_scalar(tgt_comp[a][b]);
      if (exact) {
        if (!residual.is_zero()) return {PoissonVerdict::Kind::False, 0.0};
      } else {
        for (const auto& x : double_samples(phi.source->dim())) {
          try {
            worst = std::max(worst, std::abs(residual.evaluate_double(x)));
          } catch (const eval_error&) {
          }
        }
      }
    }
  if (exact) return {PoissonVerdict::Kind::True, 0.0};
  if (worst > 1e-6) return {PoissonVerdict::Kind::False, worst};
  return {PoissonVerdict::Kind::NotDetermined, worst};
}

}  // namespace pk
