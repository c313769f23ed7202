#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pk/lie.hpp"

#include <Eigen/Eigenvalues>

#include <random>

using namespace pk;

namespace {

Mat<Rat> cols(std::size_t rows, const std::vector<std::vector<Rat>>& columns) {
  Mat<Rat> m(rows, std::vector<Rat>(columns.size(), Rat(0)));
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (std::size_t r = 0; r < rows; ++r) m[r][c] = columns[c][r];
  return m;
}

bool span_eq(const Mat<Rat>& a, const Mat<Rat>& b) {
  return subspace_contains(a, b) && subspace_contains(b, a);
}

// brackets of all column pairs, as columns
Mat<Rat> bracket_span(const LieAlgebra& L, const Mat<Rat>& A, const Mat<Rat>& B) {
  std::vector<std::vector<Rat>> out;
  for (std::size_t i = 0; i < mat_cols(A); ++i)
    for (std::size_t j = 0; j < mat_cols(B); ++j) {
      std::vector<Rat> u(L.dim), v(L.dim);
      for (unsigned r = 0; r < L.dim; ++r) {
        u[r] = A[r][i];
        v[r] = B[r][j];
      }
      out.push_back(L.bracket(u, v));
    }
  return column_space(cols(L.dim, out));
}

CMat cmat2(CRat a, CRat b, CRat c, CRat d) { return {{a, b}, {c, d}}; }

std::vector<CMat> unitary_samples() {
  Rat h(1, 2);
  return {
      cmat_identity(2),
      cmat2(CRat(Rat(3, 5), Rat(4, 5)), CRat(Rat(0)), CRat(Rat(0)),
            CRat(Rat(3, 5), Rat(-4, 5))),
      cmat2(CRat(h, h), CRat(h, h), CRat(-h, h), CRat(h, -h)),
  };
}

Mat<Rat> standard_J(std::size_t pairs) {
  Mat<Rat> J(2 * pairs, std::vector<Rat>(2 * pairs, Rat(0)));
  for (std::size_t i = 0; i < pairs; ++i) {
    J[2 * i][2 * i + 1] = -1;
    J[2 * i + 1][2 * i] = 1;
  }
  return J;
}

Mat<Rat> bivector2(const Rat& c) { return {{Rat(0), c}, {-c, Rat(0)}}; }

// --- exact univariate polynomial helpers (ascending coefficients) ---
using Poly = std::vector<Rat>;

Poly poly_trim(Poly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

Poly poly_deriv(const Poly& p) {
  Poly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(Rat(k) * p[k]);
  return poly_trim(d);
}

Poly poly_rem(Poly a, const Poly& b) {
  a = poly_trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a = poly_trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  a = poly_trim(a);
  b = poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b);
    a = b;
    b = r;
  }
  return a;
}

Poly poly_div_exact(Poly a, const Poly& b) {
  a = poly_trim(a);
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a = poly_trim(a);
  }
  REQUIRE(a.empty());
  return poly_trim(q);
}

int sign_of(const Rat& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

// Sturm-chain sign variations; where is 0, +1 (at +inf) or -1 (at -inf)
int sturm_variations(const std::vector<Poly>& chain, int where) {
  int var = 0, prev = 0;
  for (const auto& p : chain) {
    int s;
    if (where == 0)
      s = sign_of(p[0]);
    else {
      s = sign_of(p.back());
      if (where < 0 && (p.size() - 1) % 2 == 1) s = -s;
    }
    if (s != 0 && prev != 0 && s != prev) ++var;
    if (s != 0) prev = s;
  }
  return var;
}

std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain = {p, poly_deriv(p)};
  while (!chain.back().empty() && chain.back().size() > 1) {
    Poly r = poly_rem(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(r);
  }
  return chain;
}

// char poly of A, monic, by the Faddeev-LeVerrier recursion
Poly char_poly(const Mat<Rat>& A) {
  std::size_t d = A.size();
  Poly c(d + 1, Rat(0));
  c[d] = 1;
  Mat<Rat> M(d, std::vector<Rat>(d, Rat(0)));
  for (std::size_t k = 1; k <= d; ++k) {
    // M <- A (M + c_{d-k+1} I)
    Mat<Rat> N = M;
    for (std::size_t i = 0; i < d; ++i) N[i][i] += c[d - k + 1];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Rat acc(0);
        for (std::size_t l = 0; l < d; ++l) acc += A[i][l] * N[l][j];
        M[i][j] = acc;
      }
    Rat tr(0);
    for (std::size_t i = 0; i < d; ++i) tr += M[i][i];
    c[d - k] = -tr / Rat(k);
  }
  return c;
}

// Exact decision: every root of the char poly of A lies on the imaginary
// axis. Writes p(x) = x^e r(x^2) and demands the squarefree part of r to
// have deg(r) distinct real roots, none of them positive.
bool spectrum_purely_imaginary(const Mat<Rat>& A) {
  Poly p = poly_trim(char_poly(A));
  std::size_t d = A.size();
  // sign symmetry p(x) = (-1)^d p(-x): odd-gap coefficients vanish
  for (std::size_t k = 0; k < p.size(); ++k)
    if ((d + k) % 2 == 1 && p[k] != 0) return false;
  std::size_t e = 0;
  while (e < p.size() && p[e] == 0) ++e;
  Poly r;
  for (std::size_t k = e; k < p.size(); k += 2) r.push_back(p[k]);
  r = poly_trim(r);
  if (r.size() <= 1) return true;
  Poly g = poly_gcd(r, poly_deriv(r));
  Poly rs = r;
  if (g.size() > 1) rs = poly_div_exact(r, g);
  auto chain = sturm_chain(rs);
  int real_roots = sturm_variations(chain, -1) - sturm_variations(chain, +1);
  int positive_roots = sturm_variations(chain, 0) - sturm_variations(chain, +1);
  return real_roots == static_cast<int>(rs.size()) - 1 && positive_roots == 0;
}

}  // namespace

TEST_CASE("algebra validation") {
  CHECK(validate_algebra(so3_algebra()).valid());
  CHECK(validate_algebra(abelian_algebra(4)).valid());

  LieAlgebra bad = so3_algebra();
  bad.c[0][1][0] += 1;
  bad.c[1][0][0] -= 1;  // keep antisymmetry, break Jacobi
  auto rep = validate_algebra(bad);
  CHECK(rep.antisymmetric);
  CHECK_FALSE(rep.jacobi);
  CHECK(rep.residual == "jacobi(0,1,2)[1]");

  LieAlgebra skew = so3_algebra();
  skew.c[0][1][2] = 2;  // no matching change to c[1][0][2]
  auto rep2 = validate_algebra(skew);
  CHECK_FALSE(rep2.antisymmetric);
  CHECK(rep2.residual == "antisymmetry(1,0)[2]");
}

TEST_CASE("algebra JSON input") {
  std::string text = R"({"dim": 3,
    "brackets": [[0,1,[0,0,1]], [1,2,["1/1",0,0]], [2,0,[0,1,0]]],
    "pairing": [[1,0,0],[0,1,0],[0,0,1]]})";
  auto [L, pairing] = algebra_from_json(text);
  CHECK(L.dim == 3);
  CHECK(validate_algebra(L).valid());
  CHECK(L.c == so3_algebra().c);
  REQUIRE(pairing.has_value());
  CHECK(form_symmetric(*pairing));
  CHECK(form_invariant(L, *pairing));
  CHECK(form_nondegenerate(*pairing));

  auto [half, none] = algebra_from_json(R"({"dim": 2, "brackets": [[0,1,["1/2",0]]]})");
  CHECK_FALSE(none.has_value());
  CHECK(half.c[0][1][0] == Rat(1, 2));
  CHECK(half.c[1][0][0] == Rat(-1, 2));

  CHECK_THROWS_AS(algebra_from_json("{"), parse_error);
  CHECK_THROWS_AS(algebra_from_json(R"({"dim": 2, "brackets": [[0,5,[0,0]]]})"),
                  parse_error);
  CHECK_THROWS_AS(algebra_from_json(R"({"dim": 2, "brackets": [[0,1,[0.5,0]]]})"),
                  parse_error);
}

TEST_CASE("standard triple A1") {
  StandardTriple st = standard_triple(SeriesType::A1);
  CHECK(st.triple.d.dim == 6);
  CHECK(mat_cols(st.triple.g) == 3);
  CHECK(mat_cols(st.triple.h) == 3);
  CHECK(mat_cols(st.t) == 1);
  CHECK(mat_cols(st.a) == 1);
  CHECK(mat_cols(st.n_plus) == 2);
  CHECK(mat_cols(st.n_minus) == 2);
  CHECK(validate_algebra(st.triple.d).valid());

  auto rep = manin_check(st.triple);
  CHECK(rep.g_subalgebra);
  CHECK(rep.h_subalgebra);
  CHECK(rep.g_isotropic);
  CHECK(rep.h_isotropic);
  CHECK(rep.transversal);
  CHECK(rep.pairing_symmetric);
  CHECK(rep.pairing_invariant);
  CHECK(rep.pairing_nondegenerate);
  CHECK(rep.all());

  // [t, h] equals n_plus, in particular lands inside h
  Mat<Rat> th = bracket_span(st.triple.d, st.t, st.triple.h);
  CHECK(span_eq(th, st.n_plus));
  CHECK(subspace_contains(st.triple.h, th));
}

TEST_CASE("standard triple A2") {
  StandardTriple st = standard_triple(SeriesType::A2);
  CHECK(st.triple.d.dim == 16);
  CHECK(mat_cols(st.triple.g) == 8);
  CHECK(mat_cols(st.triple.h) == 8);
  CHECK(mat_cols(st.t) == 2);
  CHECK(mat_cols(st.a) == 2);
  CHECK(mat_cols(st.n_plus) == 6);
  CHECK(mat_cols(st.n_minus) == 6);
  CHECK(validate_algebra(st.triple.d).valid());
  CHECK(manin_check(st.triple).all());
  CHECK(subspace_contains(st.triple.h, bracket_span(st.triple.d, st.t, st.triple.h)));
}

TEST_CASE("manin_check rejects broken triples") {
  StandardTriple st = standard_triple(SeriesType::A1);

  ManinTriple same = st.triple;
  same.h = same.g;
  auto rep = manin_check(same);
  CHECK(rep.g_subalgebra);
  CHECK(rep.g_isotropic);
  CHECK_FALSE(rep.transversal);

  // real part of the Killing form: su(2) is no longer isotropic
  ManinTriple re = st.triple;
  for (unsigned i = 0; i < 6; ++i)
    for (unsigned j = 0; j < 6; ++j)
      re.pairing[i][j] = Rat(4) * cmat_trace(cmat_mul(st.basis[i], st.basis[j])).re;
  auto rep2 = manin_check(re);
  CHECK(rep2.pairing_symmetric);
  CHECK(rep2.pairing_invariant);
  CHECK_FALSE(rep2.g_isotropic);
}

TEST_CASE("quotient conditions on the A1 triple") {
  StandardTriple st = standard_triple(SeriesType::A1);
  auto samples = unitary_samples();

  SUBCASE("k = t") {
    auto rep = quotient_conditions(st, st.t, samples);
    CHECK(rep.a);
    CHECK(rep.b);
    CHECK(rep.c);
    CHECK(rep.d_pd);
    CHECK(rep.d_trivial);
  }
  SUBCASE("k = 0") {
    Mat<Rat> none(6, std::vector<Rat>{});
    auto rep = quotient_conditions(st, none, samples);
    CHECK(rep.a);
    CHECK(rep.b);
    CHECK(rep.c);
    CHECK(rep.d_pd);
    CHECK(rep.d_trivial);
  }
  SUBCASE("k = g") {
    auto rep = quotient_conditions(st, st.triple.g, samples);
    CHECK(rep.c);  // k° = 0 is a subalgebra
    CHECK(rep.d_pd);
    // here d_trivial asks Ad_g(h) ⊆ h, refuted by the quaternion sample
    CHECK_FALSE(rep.d_trivial);
  }
  SUBCASE("non-unitary sample rejected") {
    std::vector<CMat> bad = {cmat2(CRat(Rat(1)), CRat(Rat(1)), CRat(Rat(0)),
                                   CRat(Rat(1)))};
    CHECK_THROWS_AS(quotient_conditions(st, st.t, bad), mode_error);
  }
  SUBCASE("k must be a subalgebra of g") {
    CHECK_THROWS_AS(quotient_conditions(st, st.n_plus, samples), mode_error);
  }
}

TEST_CASE("spectral spot check: ad of t + n_plus has imaginary spectrum") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-3, 3);
  for (SeriesType type : {SeriesType::A1, SeriesType::A2}) {
    StandardTriple st = standard_triple(type);
    Mat<Rat> span = hcat(st.t, st.n_plus);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Rat> v(st.triple.d.dim, Rat(0));
      for (std::size_t c = 0; c < mat_cols(span); ++c) {
        Rat coeff(num(rng), 2);
        for (unsigned r = 0; r < st.triple.d.dim; ++r) v[r] += coeff * span[r][c];
      }
      Mat<Rat> ad = st.triple.d.ad(v);
      CHECK(spectrum_purely_imaginary(ad));
      // numeric cross-check; defective ad(v) limits eigenvalue accuracy
      Eigen::MatrixXd m(st.triple.d.dim, st.triple.d.dim);
      for (unsigned i = 0; i < st.triple.d.dim; ++i)
        for (unsigned j = 0; j < st.triple.d.dim; ++j)
          m(i, j) = static_cast<double>(ad[i][j]);
      Eigen::EigenSolver<Eigen::MatrixXd> es(m);
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        CHECK(std::abs(es.eigenvalues()(i).real()) < 1e-6);
    }
  }
}

TEST_CASE("positivity on the plane") {
  Mat<Rat> J = standard_J(1);
  auto pos = positivity(J, bivector2(Rat(1)));
  CHECK(pos.positive);
  CHECK(pos.reason.empty());

  auto neg = positivity(J, bivector2(Rat(-1)));
  CHECK_FALSE(neg.positive);
  CHECK(neg.reason == "g_S is not positive-definite");
  REQUIRE(neg.witness.size() == 2);
  CHECK(neg.witness[0] == 1);
  CHECK(neg.witness[1] == 0);

  CHECK(positivity(J, bivector2(Rat(0))).positive);

  Mat<Rat> bad_j = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  CHECK_THROWS_AS(positivity(bad_j, bivector2(Rat(1))), mode_error);
  Mat<Rat> bad_pi = {{Rat(0), Rat(1)}, {Rat(1), Rat(0)}};
  CHECK_THROWS_AS(positivity(J, bad_pi), mode_error);
}

TEST_CASE("positivity in two complex dimensions") {
  Mat<Rat> J = standard_J(2);
  auto zeros = [] { return Mat<Rat>(4, std::vector<Rat>(4, Rat(0))); };

  Mat<Rat> full = zeros();
  full[0][1] = 1;
  full[1][0] = -1;
  full[2][3] = 1;
  full[3][2] = -1;
  CHECK(positivity(J, full).positive);

  Mat<Rat> leaf = zeros();  // rank 2: one positive factor
  leaf[0][1] = 1;
  leaf[1][0] = -1;
  CHECK(positivity(J, leaf).positive);

  Mat<Rat> mixed = zeros();
  mixed[0][1] = 1;
  mixed[1][0] = -1;
  mixed[2][3] = -1;
  mixed[3][2] = 1;
  auto rep = positivity(J, mixed);
  CHECK_FALSE(rep.positive);
  CHECK(rep.reason == "g_S is not positive-definite");
  REQUIRE_FALSE(rep.witness.empty());

  Mat<Rat> tilted = zeros();  // image spans x1, x2: not J-invariant
  tilted[0][2] = 1;
  tilted[2][0] = -1;
  auto rep2 = positivity(J, tilted);
  CHECK_FALSE(rep2.positive);
  CHECK(rep2.reason == "leaf tangent space is not J-invariant");
}

TEST_CASE("positive bivector meets J-invariant subspaces cleanly") {
  Mat<Rat> J = standard_J(2);
  Mat<Rat> pi(4, std::vector<Rat>(4, Rat(0)));
  pi[0][1] = 1;
  pi[1][0] = -1;
  pi[2][3] = 1;
  pi[3][2] = -1;
  REQUIRE(positivity(J, pi).positive);

  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-4, 4);
  int tried = 0;
  while (tried < 20) {
    std::vector<Rat> v(4);
    for (auto& e : v) e = Rat(num(rng));
    std::vector<Rat> jv(4, Rat(0));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) jv[i] += J[i][j] * v[j];
    Mat<Rat> B = column_space(cols(4, {v, jv}));
    if (mat_cols(B) != 2) continue;
    ++tried;
    // annihilator of B, pushed through pi^sharp
    Mat<Rat> Bt = mat_transpose(B);
    auto ann = kernel(Bt, Rat(1));
    Mat<Rat> image(4, std::vector<Rat>(ann.size(), Rat(0)));
    for (std::size_t c = 0; c < ann.size(); ++c)
      for (int b = 0; b < 4; ++b)
        for (int a = 0; a < 4; ++a) image[b][c] += ann[c][a] * pi[a][b];
    CHECK(mat_cols(subspace_intersection(column_space(image), B, Rat(1))) == 0);
  }
}

TEST_CASE("bivectors induced by abelian actions") {
  auto chart = make_chart({"x", "y"});
  Mat<Rat> piA = bivector2(Rat(1));

  SUBCASE("exponential action of the complex line") {
    std::vector<Multivector> rho = {euler_field(chart, 0, 1),
                                    rotation_field(chart, 0, 1)};
    auto out = induced_from_action(piA, rho);
    CHECK(out.generators_commute);
    CHECK(out.jacobi.holds());
    CHECK(out.pi.coefficient({0, 1}) == parse_scalar("x^2 + y^2", chart));
    for (const auto& r : rho) CHECK(lie_derivative(r, out.pi).is_zero());
  }
  SUBCASE("translations") {
    std::vector<Multivector> rho = {basis_multivector(chart, {0}),
                                    basis_multivector(chart, {1})};
    auto out = induced_from_action(piA, rho);
    CHECK(out.generators_commute);
    CHECK(out.jacobi.holds());
    CHECK(out.pi == basis_multivector(chart, {0, 1}));
    for (const auto& r : rho) CHECK(lie_derivative(r, out.pi).is_zero());
  }
  SUBCASE("zero bivector") {
    std::vector<Multivector> rho = {euler_field(chart, 0, 1),
                                    rotation_field(chart, 0, 1)};
    auto out = induced_from_action(bivector2(Rat(0)), rho);
    CHECK(out.pi.is_zero());
    CHECK(out.jacobi.holds());
  }
  SUBCASE("non-commuting generators flagged, Jacobi still decided") {
    std::vector<Multivector> rho = {
        basis_multivector(chart, {0}),
        vector_field(chart, {parse_scalar("0", chart), parse_scalar("x", chart)})};
    auto out = induced_from_action(piA, rho);
    CHECK_FALSE(out.generators_commute);
    CHECK(out.jacobi.holds());  // any bivector on a 2d chart
  }
  SUBCASE("shape errors") {
    std::vector<Multivector> rho = {euler_field(chart, 0, 1)};
    CHECK_THROWS_AS(induced_from_action(piA, rho), mode_error);
    Mat<Rat> sym = {{Rat(0), Rat(1)}, {Rat(1), Rat(0)}};
    std::vector<Multivector> two = {euler_field(chart, 0, 1),
                                    rotation_field(chart, 0, 1)};
    CHECK_THROWS_AS(induced_from_action(sym, two), mode_error);
  }
}

TEST_CASE("weyl group orders") {
  CHECK(weyl_order('A', 1) == 2);
  CHECK(weyl_order('A', 2) == 6);
  CHECK(weyl_order('A', 3) == 24);
  CHECK(weyl_order('B', 2) == 8);
  CHECK(weyl_order('C', 3) == 48);
  CHECK(weyl_order('D', 4) == 192);
  CHECK_THROWS_AS(weyl_order('E', 6), mode_error);
  CHECK_THROWS_AS(weyl_order('A', 0), mode_error);
  CHECK_THROWS_AS(weyl_order('D', 1), mode_error);
  // associated-bundle sanity: two Bruhat cells over 2- and 3-leaf fibers
  CHECK(weyl_order('A', 1) * 2 == 4);
  CHECK(weyl_order('A', 1) * 3 == 6);
}
