#include "pk/lie.hpp"

#include <json.hpp>

namespace pk {

namespace {

Mat<Rat> matmul(const Mat<Rat>& a, const Mat<Rat>& b) {
  Mat<Rat> r(a.size(), std::vector<Rat>(mat_cols(b), Rat(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < mat_cols(a); ++k)
      for (std::size_t j = 0; j < mat_cols(b); ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Mat<Rat> identity(std::size_t n) {
  Mat<Rat> id(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

Mat<Rat> zero_cols(std::size_t rows) { return Mat<Rat>(rows, std::vector<Rat>{}); }

Mat<Rat> single_column(const std::vector<Rat>& v) {
  Mat<Rat> m(v.size(), std::vector<Rat>(1, Rat(0)));
  for (std::size_t i = 0; i < v.size(); ++i) m[i][0] = v[i];
  return m;
}

std::vector<Rat> mat_col(const Mat<Rat>& m, std::size_t j) {
  std::vector<Rat> v(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) v[i] = m[i][j];
  return v;
}

// [span(A), span(B)] inside span(C)?
bool bracket_contained(const LieAlgebra& L, const Mat<Rat>& A, const Mat<Rat>& B,
                       const Mat<Rat>& C) {
  for (std::size_t i = 0; i < mat_cols(A); ++i)
    for (std::size_t j = 0; j < mat_cols(B); ++j)
      if (!subspace_contains(C, single_column(L.bracket(mat_col(A, i), mat_col(B, j)))))
        return false;
  return true;
}

std::vector<Rat> realify(const CMat& m) {
  std::vector<Rat> v;
  v.reserve(2 * m.size() * m.size());
  for (const auto& row : m)
    for (const auto& e : row) {
      v.push_back(e.re);
      v.push_back(e.im);
    }
  return v;
}

CMat commutator(const CMat& a, const CMat& b) {
  return cmat_sub(cmat_mul(a, b), cmat_mul(b, a));
}

}  // namespace

CMat cmat_mul(const CMat& a, const CMat& b) {
  std::size_t n = a.size(), m = b[0].size(), k = b.size();
  CMat r(n, std::vector<CRat>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < m; ++j) r[i][j] = r[i][j] + a[i][l] * b[l][j];
  return r;
}

CMat cmat_sub(const CMat& a, const CMat& b) {
  CMat r = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] = a[i][j] - b[i][j];
  return r;
}

CMat cmat_adjoint(const CMat& a) {
  CMat r(a[0].size(), std::vector<CRat>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j].conj();
  return r;
}

CMat cmat_identity(unsigned n) {
  CMat id(n, std::vector<CRat>(n));
  for (unsigned i = 0; i < n; ++i) id[i][i] = CRat(Rat(1));
  return id;
}

bool cmat_is_unitary(const CMat& g) {
  if (g.empty() || g.size() != g[0].size()) return false;
  CMat p = cmat_mul(g, cmat_adjoint(g));
  CMat id = cmat_identity(static_cast<unsigned>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      if (!(p[i][j] == id[i][j])) return false;
  return true;
}

CRat cmat_trace(const CMat& a) {
  CRat t;
  for (std::size_t i = 0; i < a.size(); ++i) t = t + a[i][i];
  return t;
}

std::vector<Rat> LieAlgebra::bracket(const std::vector<Rat>& u,
                                     const std::vector<Rat>& v) const {
  std::vector<Rat> w(dim, Rat(0));
  for (unsigned i = 0; i < dim; ++i) {
    if (u[i] == 0) continue;
    for (unsigned j = 0; j < dim; ++j) {
      if (v[j] == 0) continue;
      for (unsigned k = 0; k < dim; ++k) w[k] += u[i] * v[j] * c[i][j][k];
    }
  }
  return w;
}

Mat<Rat> LieAlgebra::ad(const std::vector<Rat>& v) const {
  Mat<Rat> m(dim, std::vector<Rat>(dim, Rat(0)));
  for (unsigned j = 0; j < dim; ++j) {
    std::vector<Rat> ej(dim, Rat(0));
    ej[j] = 1;
    auto col = bracket(v, ej);
    for (unsigned i = 0; i < dim; ++i) m[i][j] = col[i];
  }
  return m;
}

AlgebraReport validate_algebra(const LieAlgebra& L) {
  AlgebraReport rep;
  rep.antisymmetric = true;
  rep.jacobi = true;
  for (unsigned i = 0; i < L.dim && rep.antisymmetric; ++i)
    for (unsigned j = 0; j <= i && rep.antisymmetric; ++j)
      for (unsigned k = 0; k < L.dim; ++k)
        if (L.c[i][j][k] + L.c[j][i][k] != 0) {
          rep.antisymmetric = false;
          rep.residual = "antisymmetry(" + std::to_string(i) + "," +
                         std::to_string(j) + ")[" + std::to_string(k) + "]";
          break;
        }
  auto unit = [&](unsigned i) {
    std::vector<Rat> e(L.dim, Rat(0));
    e[i] = 1;
    return e;
  };
  for (unsigned i = 0; i < L.dim && rep.jacobi; ++i)
    for (unsigned j = i + 1; j < L.dim && rep.jacobi; ++j)
      for (unsigned k = j + 1; k < L.dim && rep.jacobi; ++k) {
        auto t1 = L.bracket(L.bracket(unit(i), unit(j)), unit(k));
        auto t2 = L.bracket(L.bracket(unit(j), unit(k)), unit(i));
        auto t3 = L.bracket(L.bracket(unit(k), unit(i)), unit(j));
        for (unsigned l = 0; l < L.dim; ++l)
          if (t1[l] + t2[l] + t3[l] != 0) {
            rep.jacobi = false;
            rep.residual = "jacobi(" + std::to_string(i) + "," + std::to_string(j) +
                           "," + std::to_string(k) + ")[" + std::to_string(l) + "]";
            break;
          }
      }
  return rep;
}

LieAlgebra so3_algebra() {
  LieAlgebra L = abelian_algebra(3);
  L.c[0][1][2] = 1;
  L.c[1][0][2] = -1;
  L.c[1][2][0] = 1;
  L.c[2][1][0] = -1;
  L.c[2][0][1] = 1;
  L.c[0][2][1] = -1;
  return L;
}

LieAlgebra abelian_algebra(unsigned d) {
  LieAlgebra L;
  L.dim = d;
  L.c.assign(d, std::vector<std::vector<Rat>>(d, std::vector<Rat>(d, Rat(0))));
  return L;
}

bool form_symmetric(const Mat<Rat>& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i]) return false;
  return true;
}

bool form_invariant(const LieAlgebra& L, const Mat<Rat>& m) {
  auto pair = [&](const std::vector<Rat>& u, const std::vector<Rat>& v) {
    Rat acc(0);
    for (unsigned a = 0; a < L.dim; ++a)
      for (unsigned b = 0; b < L.dim; ++b) acc += u[a] * m[a][b] * v[b];
    return acc;
  };
  auto unit = [&](unsigned i) {
    std::vector<Rat> e(L.dim, Rat(0));
    e[i] = 1;
    return e;
  };
  for (unsigned i = 0; i < L.dim; ++i)
    for (unsigned j = 0; j < L.dim; ++j)
      for (unsigned k = 0; k < L.dim; ++k)
        if (pair(L.bracket(unit(i), unit(j)), unit(k)) +
                pair(unit(j), L.bracket(unit(i), unit(k))) !=
            0)
          return false;
  return true;
}

bool form_nondegenerate(const Mat<Rat>& m) { return rank(m) == m.size(); }

bool subspace_closed(const LieAlgebra& L, const Mat<Rat>& basis) {
  return bracket_contained(L, basis, basis, basis);
}

bool subspace_isotropic(const Mat<Rat>& pairing, const Mat<Rat>& basis) {
  Mat<Rat> gram = matmul(mat_transpose(basis), matmul(pairing, basis));
  for (const auto& row : gram)
    for (const auto& e : row)
      if (e != 0) return false;
  return true;
}

ManinReport manin_check(const ManinTriple& t) {
  ManinReport rep;
  rep.g_subalgebra = subspace_closed(t.d, t.g);
  rep.h_subalgebra = subspace_closed(t.d, t.h);
  rep.g_isotropic = subspace_isotropic(t.pairing, t.g) && 2 * mat_cols(t.g) == t.d.dim;
  rep.h_isotropic = subspace_isotropic(t.pairing, t.h) && 2 * mat_cols(t.h) == t.d.dim;
  rep.transversal = mat_cols(t.g) + mat_cols(t.h) == t.d.dim &&
                    rank(hcat(t.g, t.h)) == t.d.dim;
  rep.pairing_symmetric = form_symmetric(t.pairing);
  rep.pairing_invariant = form_invariant(t.d, t.pairing);
  rep.pairing_nondegenerate = form_nondegenerate(t.pairing);
  return rep;
}

std::vector<Rat> StandardTriple::coordinates(const CMat& m) const {
  std::size_t dim = basis.size();
  std::vector<Rat> target = realify(m);
  Mat<Rat> R(target.size(), std::vector<Rat>(dim, Rat(0)));
  for (std::size_t j = 0; j < dim; ++j) {
    auto col = realify(basis[j]);
    for (std::size_t i = 0; i < col.size(); ++i) R[i][j] = col[i];
  }
  auto x = solve(R, target, Rat(1));
  if (!x) throw mode_error("matrix lies outside the span of the algebra basis");
  // solve() ignores surplus rows' residuals only when consistent; verify
  std::vector<Rat> back(target.size(), Rat(0));
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < target.size(); ++i) back[i] += R[i][j] * (*x)[j];
  for (std::size_t i = 0; i < target.size(); ++i)
    if (back[i] != target[i])
      throw mode_error("matrix lies outside the span of the algebra basis");
  return *x;
}

CMat StandardTriple::matrix_of(const std::vector<Rat>& coords) const {
  unsigned n = static_cast<unsigned>(basis[0].size());
  CMat m(n, std::vector<CRat>(n));
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (coords[j] == 0) continue;
    for (unsigned r = 0; r < n; ++r)
      for (unsigned c = 0; c < n; ++c)
        m[r][c] = m[r][c] + CRat(coords[j]) * basis[j][r][c];
  }
  return m;
}

StandardTriple standard_triple(SeriesType type) {
  unsigned n = type == SeriesType::A1 ? 2 : 3;
  auto unit_mat = [&](unsigned r, unsigned c, bool imag) {
    CMat m(n, std::vector<CRat>(n));
    m[r][c] = imag ? CRat(Rat(0), Rat(1)) : CRat(Rat(1));
    return m;
  };
  auto cartan = [&](unsigned i, bool imag) {
    CMat m(n, std::vector<CRat>(n));
    CRat one = imag ? CRat(Rat(0), Rat(1)) : CRat(Rat(1));
    m[i][i] = one;
    m[i + 1][i + 1] = CRat(Rat(0)) - one;
    return m;
  };

  StandardTriple st;
  std::vector<unsigned> t_idx, a_idx, np_idx, nm_idx, g_extra;
  for (unsigned i = 0; i + 1 < n; ++i) {
    a_idx.push_back(static_cast<unsigned>(st.basis.size()));
    st.basis.push_back(cartan(i, false));
    t_idx.push_back(static_cast<unsigned>(st.basis.size()));
    st.basis.push_back(cartan(i, true));
  }
  std::vector<std::pair<unsigned, unsigned>> roots;
  for (unsigned p = 0; p < n; ++p)
    for (unsigned q = p + 1; q < n; ++q) roots.push_back({p, q});
  for (auto [p, q] : roots) {
    np_idx.push_back(static_cast<unsigned>(st.basis.size()));
    st.basis.push_back(unit_mat(p, q, false));
    np_idx.push_back(static_cast<unsigned>(st.basis.size()));
    st.basis.push_back(unit_mat(p, q, true));
  }
  for (auto [p, q] : roots) {
    nm_idx.push_back(static_cast<unsigned>(st.basis.size()));
    st.basis.push_back(unit_mat(q, p, false));
    nm_idx.push_back(static_cast<unsigned>(st.basis.size()));
    st.basis.push_back(unit_mat(q, p, true));
  }
  unsigned dim = static_cast<unsigned>(st.basis.size());

  // structure constants from the matrix realization
  LieAlgebra L = abelian_algebra(dim);
  for (unsigned i = 0; i < dim; ++i)
    for (unsigned j = 0; j < dim; ++j)
      L.c[i][j] = st.coordinates(commutator(st.basis[i], st.basis[j]));

  // pairing: imaginary part of the complex Killing form 2n tr(vw)
  Mat<Rat> pairing(dim, std::vector<Rat>(dim, Rat(0)));
  for (unsigned i = 0; i < dim; ++i)
    for (unsigned j = 0; j < dim; ++j)
      pairing[i][j] = Rat(2 * n) * cmat_trace(cmat_mul(st.basis[i], st.basis[j])).im;

  auto cols_from = [&](const std::vector<unsigned>& idx) {
    Mat<Rat> m(dim, std::vector<Rat>(idx.size(), Rat(0)));
    for (std::size_t c = 0; c < idx.size(); ++c) m[idx[c]][c] = 1;
    return m;
  };
  st.t = cols_from(t_idx);
  st.a = cols_from(a_idx);
  st.n_plus = cols_from(np_idx);
  st.n_minus = cols_from(nm_idx);

  // g = su(n): i-Cartan directions plus E_pq - E_qp and i(E_pq + E_qp)
  Mat<Rat> g(dim, std::vector<Rat>(dim / 2, Rat(0)));
  std::size_t col = 0;
  for (unsigned i : t_idx) g[i][col++] = 1;
  for (std::size_t r = 0; r < roots.size(); ++r) {
    g[np_idx[2 * r]][col] = 1;
    g[nm_idx[2 * r]][col] = -1;
    ++col;
    g[np_idx[2 * r + 1]][col] = 1;
    g[nm_idx[2 * r + 1]][col] = 1;
    ++col;
  }

  st.triple = ManinTriple{std::move(L), std::move(pairing), std::move(g),
                          subspace_sum(st.a, st.n_plus)};
  return st;
}

QuotientReport quotient_conditions(const StandardTriple& st, const Mat<Rat>& k,
                                   const std::vector<CMat>& samples) {
  const LieAlgebra& L = st.triple.d;
  const Mat<Rat>& g = st.triple.g;
  const Mat<Rat>& h = st.triple.h;
  unsigned dim = L.dim;
  if (!subspace_contains(g, k) || !subspace_closed(L, k))
    throw mode_error("k must be a subalgebra of g");

  // k° = pairing-annihilator of k inside h
  Mat<Rat> kzero;
  if (mat_cols(k) == 0) {
    kzero = h;
  } else if (mat_cols(h) == 0) {
    kzero = zero_cols(dim);
  } else {
    Mat<Rat> constraint = matmul(mat_transpose(k), matmul(st.triple.pairing, h));
    auto ker = kernel(constraint, Rat(1));
    Mat<Rat> gen(dim, std::vector<Rat>(ker.size(), Rat(0)));
    for (std::size_t c = 0; c < ker.size(); ++c)
      for (unsigned i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < mat_cols(h); ++j)
          gen[i][c] += h[i][j] * ker[c][j];
    kzero = column_space(gen);
  }

  QuotientReport rep;
  rep.a = bracket_contained(L, k, h, h);
  rep.b = bracket_contained(L, h, kzero, kzero);
  rep.c = bracket_contained(L, kzero, kzero, kzero);

  rep.d_pd = true;
  rep.d_trivial = true;
  for (const auto& gmat : samples) {
    if (!cmat_is_unitary(gmat)) throw mode_error("adjoint sample is not unitary");
    CMat ginv = cmat_adjoint(gmat);
    Mat<Rat> adh(dim, std::vector<Rat>(mat_cols(h), Rat(0)));
    for (std::size_t j = 0; j < mat_cols(h); ++j) {
      CMat m = st.matrix_of(mat_col(h, j));
      auto coords = st.coordinates(cmat_mul(gmat, cmat_mul(m, ginv)));
      for (unsigned i = 0; i < dim; ++i) adh[i][j] = coords[i];
    }
    adh = column_space(adh);
    Mat<Rat> pd_target = subspace_sum(k, kzero);
    Mat<Rat> triv_target = subspace_sum(k, h);
    rep.d_pd = rep.d_pd &&
               subspace_contains(kzero, subspace_intersection(adh, pd_target, Rat(1)));
    rep.d_trivial =
        rep.d_trivial &&
        subspace_contains(h, subspace_intersection(adh, triv_target, Rat(1)));
  }
  return rep;
}

PositivityReport positivity(const Mat<Rat>& J, const Mat<Rat>& pi) {
  std::size_t n = pi.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (pi[i][j] != -pi[j][i]) throw mode_error("bivector matrix not antisymmetric");
  {
    Mat<Rat> jj = matmul(J, J);
    Mat<Rat> minus_id = identity(n);
    for (std::size_t i = 0; i < n; ++i) minus_id[i][i] = -1;
    if (jj != minus_id) throw mode_error("J is not a complex structure (J^2 != -I)");
  }

  PositivityReport rep;
  Mat<Rat> sharp = mat_transpose(pi);  // columns span the image of pi^sharp
  Mat<Rat> S = column_space(sharp);
  std::size_t r = mat_cols(S);
  if (r == 0) {
    rep.positive = true;
    return rep;
  }
  Mat<Rat> JS = matmul(J, S);
  if (!subspace_contains(S, JS)) {
    rep.positive = false;
    rep.reason = "leaf tangent space is not J-invariant";
    for (std::size_t j = 0; j < r; ++j)
      if (!subspace_contains(S, single_column(mat_col(JS, j)))) {
        rep.witness = mat_col(JS, j);
        break;
      }
    return rep;
  }

  // omega_S(pi^sharp xi, pi^sharp eta) := pi(xi, eta) in the S-basis
  std::vector<std::vector<Rat>> xi(r);
  for (std::size_t j = 0; j < r; ++j) {
    auto x = solve(sharp, mat_col(S, j), Rat(1));
    if (!x) throw mode_error("leaf basis escaped the sharp image");
    xi[j] = *x;
  }
  auto omega = [&](const std::vector<Rat>& u, const std::vector<Rat>& v) {
    Rat acc(0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) acc += u[a] * pi[a][b] * v[b];
    return acc;
  };
  Mat<Rat> W(r, std::vector<Rat>(r, Rat(0)));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) W[i][j] = omega(xi[i], xi[j]);
  // well-definedness under the kernel quotient
  auto ker = kernel(sharp, Rat(1));
  if (!ker.empty()) {
    auto shifted = xi[0];
    for (std::size_t a = 0; a < n; ++a) shifted[a] += ker[0][a];
    for (std::size_t j = 0; j < r; ++j)
      if (omega(shifted, xi[j]) != W[0][j])
        throw mode_error("omega_S is not well-defined on the kernel quotient");
  }

  // J restricted to S, then check omega is J-invariant
  Mat<Rat> C(r, std::vector<Rat>(r, Rat(0)));
  for (std::size_t j = 0; j < r; ++j) {
    auto cj = solve(S, mat_col(JS, j), Rat(1));
    for (std::size_t i = 0; i < r; ++i) C[i][j] = (*cj)[i];
  }
  if (matmul(mat_transpose(C), matmul(W, C)) != W) {
    rep.positive = false;
    rep.reason = "leaf symplectic form is not J-invariant";
    return rep;
  }

  // g_S(u, v) = omega_S(u, Jv); symmetric congruence reduction gives either
  // all positive pivots or an explicit vector with g(v, v) <= 0
  Mat<Rat> G = matmul(W, C);
  Mat<Rat> T = identity(r);  // rows express the working basis in S-columns
  auto witness_from_row = [&](std::size_t i) {
    std::vector<Rat> v(n, Rat(0));
    for (std::size_t kk = 0; kk < r; ++kk)
      for (std::size_t a = 0; a < n; ++a) v[a] += T[i][kk] * S[a][kk];
    return v;
  };
  if (G != mat_transpose(G)) throw mode_error("g_S is not symmetric");
  for (std::size_t i = 0; i < r; ++i) {
    if (G[i][i] == 0) {
      std::size_t j = i + 1;
      while (j < r && G[i][j] == 0) ++j;
      if (j == r) {
        rep.positive = false;
        rep.reason = "g_S is degenerate";
        rep.witness = witness_from_row(i);
        return rep;
      }
      Rat cand = G[j][j] + 2 * G[i][j];
      Rat s = cand != 0 ? Rat(1) : Rat(-1);
      for (std::size_t kk = 0; kk < r; ++kk) {
        G[i][kk] += s * G[j][kk];
        T[i][kk] += s * T[j][kk];
      }
      for (std::size_t kk = 0; kk < r; ++kk) G[kk][i] += s * G[kk][j];
    }
    if (G[i][i] < 0) {
      rep.positive = false;
      rep.reason = "g_S is not positive-definite";
      rep.witness = witness_from_row(i);
      return rep;
    }
    for (std::size_t j = i + 1; j < r; ++j) {
      if (G[j][i] == 0) continue;
      Rat f = G[j][i] / G[i][i];
      for (std::size_t kk = 0; kk < r; ++kk) {
        G[j][kk] -= f * G[i][kk];
        T[j][kk] -= f * T[i][kk];
      }
      for (std::size_t kk = 0; kk < r; ++kk) G[kk][j] -= f * G[kk][i];
    }
  }
  rep.positive = true;
  return rep;
}

ActionBivector induced_from_action(const Mat<Rat>& pi_A,
                                   const std::vector<Multivector>& rho) {
  if (rho.empty()) throw mode_error("induced_from_action needs generators");
  if (pi_A.size() != rho.size())
    throw mode_error("bivector matrix size does not match the generator count");
  for (std::size_t i = 0; i < pi_A.size(); ++i)
    for (std::size_t j = 0; j < pi_A.size(); ++j)
      if (pi_A[i][j] != -pi_A[j][i])
        throw mode_error("bivector matrix not antisymmetric");
  const ChartPtr& chart = rho[0].chart();
  ActionBivector out;
  out.pi = Multivector(chart, 2);
  for (std::size_t i = 0; i < rho.size(); ++i)
    for (std::size_t j = i + 1; j < rho.size(); ++j)
      if (pi_A[i][j] != 0)
        out.pi = out.pi + wedge(rho[i], rho[j]) * Scalar::constant(chart, pi_A[i][j]);
  out.generators_commute = true;
  for (std::size_t i = 0; i < rho.size(); ++i)
    for (std::size_t j = i + 1; j < rho.size(); ++j)
      if (!schouten(rho[i], rho[j]).is_zero()) out.generators_commute = false;
  out.jacobi = is_poisson(out.pi);
  return out;
}

std::uint64_t weyl_order(char type, unsigned rank) {
  if (rank == 0 || rank > 20) throw mode_error("weyl_order: unsupported rank");
  auto factorial = [](unsigned m) {
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= m; ++i) f *= i;
    return f;
  };
  switch (type) {
    case 'A':
      return factorial(rank + 1);
    case 'B':
    case 'C':
      return (std::uint64_t{1} << rank) * factorial(rank);
    case 'D':
      if (rank < 2) throw mode_error("weyl_order: D needs rank >= 2");
      return (std::uint64_t{1} << (rank - 1)) * factorial(rank);
    default:
      throw mode_error("weyl_order: unknown series type");
  }
}

std::pair<LieAlgebra, std::optional<Mat<Rat>>> algebra_from_json(
    const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("bad algebra JSON: ") + e.what(), 0);
  }
  auto as_rat = [](const nlohmann::json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rat(v.get<long long>());
    throw parse_error("rational entries must be integers or \"p/q\" strings", 0);
  };
  if (!doc.contains("dim") || !doc["dim"].is_number_unsigned())
    throw parse_error("algebra JSON needs an unsigned \"dim\"", 0);
  unsigned d = doc["dim"].get<unsigned>();
  LieAlgebra L = abelian_algebra(d);
  for (const auto& entry : doc.value("brackets", nlohmann::json::array())) {
    if (!entry.is_array() || entry.size() != 3 || !entry[2].is_array() ||
        entry[2].size() != d)
      throw parse_error("bracket entries must be [i, j, [d coefficients]]", 0);
    unsigned i = entry[0].get<unsigned>(), j = entry[1].get<unsigned>();
    if (i >= d || j >= d) throw parse_error("bracket index out of range", 0);
    for (unsigned k = 0; k < d; ++k) {
      L.c[i][j][k] = as_rat(entry[2][k]);
      L.c[j][i][k] = -L.c[i][j][k];
    }
  }
  std::optional<Mat<Rat>> pairing;
  if (doc.contains("pairing")) {
    const auto& pj = doc["pairing"];
    if (!pj.is_array() || pj.size() != d)
      throw parse_error("pairing must be a dim x dim matrix", 0);
    Mat<Rat> m(d, std::vector<Rat>(d, Rat(0)));
    for (unsigned i = 0; i < d; ++i) {
      if (!pj[i].is_array() || pj[i].size() != d)
        throw parse_error("pairing must be a dim x dim matrix", 0);
      for (unsigned j = 0; j < d; ++j) m[i][j] = as_rat(pj[i][j]);
    }
    pairing = std::move(m);
  }
  return {std::move(L), std::move(pairing)};
}

}  // namespace pk
