#include "pk/submanifolds.hpp"

namespace pk {

namespace {

template <typename F>
Mat<F> transpose(const Mat<F>& m) {
  return mat_transpose(m);
}

template <typename F>
Mat<F> matmul(const Mat<F>& a, const Mat<F>& b, const F& zero) {
  Mat<F> r(a.size(), std::vector<F>(mat_cols(b), zero));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < mat_cols(a); ++k)
      for (std::size_t j = 0; j < mat_cols(b); ++j) r[i][j] = r[i][j] + a[i][k] * b[k][j];
  return r;
}

// dim of the intersection of two column spans by two independent methods;
// they must agree.
template <typename F>
std::size_t intersection_dim_checked(const Mat<F>& A, const Mat<F>& B, const F& one) {
  std::size_t m1 = mat_cols(subspace_intersection(A, B, one));
  std::size_t m2 = rank(A) + rank(B) - mat_cols(subspace_sum(A, B));
  if (m1 != m2) throw mode_error("intersection-dimension methods disagree");
  return m1;
}

// kernel of J^T as matrix columns; handles the 0-dimensional-X case.
template <typename F>
Mat<F> conormal(const Mat<F>& J, unsigned n, const F& one) {
  F zero = one - one;
  if (mat_cols(J) == 0) {
    Mat<F> id(n, std::vector<F>(n, zero));
    for (unsigned i = 0; i < n; ++i) id[i][i] = one;
    return id;
  }
  auto ker = kernel(transpose(J), one);
  Mat<F> N(n, std::vector<F>(ker.size(), zero));
  for (std::size_t c = 0; c < ker.size(); ++c)
    for (unsigned i = 0; i < n; ++i) N[i][c] = ker[c][i];
  return column_space(N);
}

// E = pi^sharp(N*X): column j is P^T nu_j.
template <typename F>
Mat<F> sharp_image(const Mat<F>& P, const Mat<F>& N, const F& one) {
  F zero = one - one;
  return matmul(transpose(P), N, zero);
}

// Extension solve: xi with J^T xi = e_i and xi vanishing on the columns of E.
template <typename F>
std::optional<std::vector<F>> extension(const Mat<F>& J, const Mat<F>& E,
                                        unsigned i, const F& one) {
  F zero = one - one;
  unsigned n = static_cast<unsigned>(J.size());
  std::size_t k = mat_cols(J), r = mat_cols(E);
  Mat<F> A(k + r, std::vector<F>(n, zero));
  std::vector<F> rhs(k + r, zero);
  for (std::size_t row = 0; row < k; ++row)
    for (unsigned a = 0; a < n; ++a) A[row][a] = J[a][row];
  for (std::size_t row = 0; row < r; ++row)
    for (unsigned a = 0; a < n; ++a) A[k + row][a] = E[a][row];
  rhs[i] = one;
  return solve(A, rhs, one);
}

template <typename F>
F bilinear(const std::vector<F>& xi, const Mat<F>& P, const std::vector<F>& eta,
           const F& one) {
  F acc = one - one;
  for (std::size_t a = 0; a < xi.size(); ++a)
    for (std::size_t b = 0; b < eta.size(); ++b) acc = acc + xi[a] * P[a][b] * eta[b];
  return acc;
}

}  // namespace

FramePair frames(const SubmanifoldSpec& spec, const Point& at) {
  Mat<Rat> J = spec.embedding.jacobian_at(at);
  unsigned m = spec.embedding.source->dim();
  if (rank(J) != m)
    throw eval_error("embedding is not an immersion at a sample point");
  return {J, conormal(J, spec.embedding.target->dim(), Rat(1))};
}

std::optional<Mat<Rat>> pointwise_induce(const Mat<Rat>& pi, const Mat<Rat>& TX,
                                         const Mat<Rat>& NstarX) {
  Rat one(1);
  Mat<Rat> E = sharp_image(pi, NstarX, one);
  if (intersection_dim_checked(column_space(E), column_space(TX), one) != 0)
    return std::nullopt;
  std::size_t k = mat_cols(TX);
  std::vector<std::vector<Rat>> xs;
  for (unsigned i = 0; i < k; ++i) {
    auto xi = extension(TX, E, i, one);
    if (!xi) return std::nullopt;
    xs.push_back(*xi);
  }
  Mat<Rat> B(k, std::vector<Rat>(k, Rat(0)));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) B[i][j] = bilinear(xs[i], pi, xs[j], one);

  // extension-independence: redo with a second extension shifted by a kernel
  // element of the constraint system, if one exists
  unsigned n = static_cast<unsigned>(pi.size());
  Mat<Rat> A(k + mat_cols(E), std::vector<Rat>(n, Rat(0)));
  for (std::size_t row = 0; row < k; ++row)
    for (unsigned a = 0; a < n; ++a) A[row][a] = TX[a][row];
  for (std::size_t row = 0; row < mat_cols(E); ++row)
    for (unsigned a = 0; a < n; ++a) A[k + row][a] = E[a][row];
  auto ker = kernel(A, one);
  if (!ker.empty()) {
    std::vector<std::vector<Rat>> ys = xs;
    for (auto& y : ys)
      for (unsigned a = 0; a < n; ++a) y[a] += ker[0][a];
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (bilinear(ys[i], pi, ys[j], one) != B[i][j])
          throw mode_error("induced bivector depends on the extension choice");
  }
  return B;
}

std::optional<Multivector> induced_bivector_symbolic(const SubmanifoldSpec& spec,
                                                     const Multivector& pi) {
  const ChartPtr& X = spec.embedding.source;
  unsigned m = X->dim(), n = spec.embedding.target->dim();
  RatFunc one = RatFunc::constant(m, 1);
  Multivector result(X, 2);

  Mat<RatFunc> J(n, std::vector<RatFunc>(m, RatFunc(m)));
  auto Js = spec.embedding.jacobian();
  for (unsigned a = 0; a < n; ++a)
    for (unsigned i = 0; i < m; ++i) J[a][i] = Js[a][i].rat();

  auto comp = bivector_components(pi);
  Mat<RatFunc> P(n, std::vector<RatFunc>(n, RatFunc(m)));
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b)
      P[a][b] = comp[a][b].substitute(X, spec.embedding.components).rat();

  Mat<RatFunc> N = conormal(J, n, one);
  Mat<RatFunc> E = sharp_image(P, N, one);

  std::vector<std::vector<RatFunc>> xs;
  for (unsigned i = 0; i < m; ++i) {
    auto xi = extension(J, E, i, one);
    if (!xi) return std::nullopt;
    xs.push_back(*xi);
  }
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = i + 1; j < m; ++j)
      result.add({i, j}, Scalar(X, bilinear(xs[i], P, xs[j], one)));
  return result;
}

HierarchyReport classify(const SubmanifoldSpec& spec, const Multivector& pi,
                         const std::vector<Point>& grid) {
  if (grid.empty()) throw mode_error("classify needs a nonempty sample grid");
  if (!pi.all_exact()) throw mode_error("classify requires EXACT coefficients");
  unsigned n = spec.embedding.target->dim();
  HierarchyReport rep;
  for (const auto& p : grid) {
    FramePair fr = frames(spec, p);
    Point q = spec.embedding.apply(p);
    Mat<Rat> P = bivector_matrix_at(pi, q);
    Mat<Rat> E = column_space(sharp_image(P, fr.NstarX, Rat(1)));
    Mat<Rat> TX = column_space(fr.TX);
    std::size_t inter = intersection_dim_checked(E, TX, Rat(1));
    std::size_t erank = mat_cols(E);
    rep.samples.push_back(p);
    rep.pointwise_pd.push_back(inter == 0);
    rep.q_rank.push_back(static_cast<int>(erank));
    rep.coisotropic.push_back(subspace_contains(TX, E));
    rep.poisson_submanifold.push_back(erank == 0);
    rep.poisson_transversal.push_back(inter == 0 && mat_cols(TX) + erank == n);
  }
  auto all = [](const std::vector<bool>& v) {
    for (bool b : v)
      if (!b) return false;
    return true;
  };
  rep.coisotropic_all = all(rep.coisotropic);
  rep.poisson_submanifold_all = all(rep.poisson_submanifold);
  rep.poisson_transversal_all = all(rep.poisson_transversal);

  rep.induced = induced_bivector_symbolic(spec, pi);
  if (rep.induced) {
    for (const auto& p : rep.samples) {
      bool pole = false;
      for (const auto& [idx, c] : rep.induced->coeffs())
        if (!c.defined_at(p)) pole = true;
      if (pole) rep.pole_witnesses.push_back(p);
    }
  }

  // coregular verdict
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    if (!rep.pointwise_pd[i]) {
      rep.coregular = Verdict::Fails;
      rep.coregular_witness = rep.samples[i];
      return rep;
    }
  }
  int r0 = rep.q_rank.front();
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    if (rep.q_rank[i] != r0) {
      rep.coregular = Verdict::Fails;
      // witness: the point of lower rank
      rep.coregular_witness = rep.samples[rep.q_rank[i] < r0 ? i : 0];
      return rep;
    }
  }
  // symbolic generic rank of pi^sharp(N*X) along X
  {
    unsigned m = spec.embedding.source->dim();
    RatFunc one = RatFunc::constant(m, 1);
    Mat<RatFunc> J(n, std::vector<RatFunc>(m, RatFunc(m)));
    auto Js = spec.embedding.jacobian();
    for (unsigned a = 0; a < n; ++a)
      for (unsigned i = 0; i < m; ++i) J[a][i] = Js[a][i].rat();
    auto comp = bivector_components(pi);
    Mat<RatFunc> P(n, std::vector<RatFunc>(n, RatFunc(m)));
    for (unsigned a = 0; a < n; ++a)
      for (unsigned b = 0; b < n; ++b)
        P[a][b] = comp[a][b].substitute(spec.embedding.source, spec.embedding.components).rat();
    Mat<RatFunc> N = conormal(J, n, one);
    std::size_t generic = rank(sharp_image(P, N, one));
    if (static_cast<int>(generic) == r0) {
      rep.coregular = Verdict::Holds;
      rep.split_certificate = "coregular";
    } else {
      // constant on the grid but below the generic rank: undecided
      rep.coregular = Verdict::NotDetermined;
    }
  }
  return rep;
}

}  // namespace pk
