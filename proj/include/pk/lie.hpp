#pragma once

#include "pk/calculus.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pk {

/// Gaussian-rational complex scalar.
struct CRat {
  Rat re = 0, im = 0;
  CRat() = default;
  CRat(Rat r) : re(std::move(r)) {}
  CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  CRat operator+(const CRat& o) const { return {re + o.re, im + o.im}; }
  CRat operator-(const CRat& o) const { return {re - o.re, im - o.im}; }
  CRat operator*(const CRat& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  CRat conj() const { return {re, -im}; }
  bool operator==(const CRat& o) const { return re == o.re && im == o.im; }
};

using CMat = std::vector<std::vector<CRat>>;

CMat cmat_mul(const CMat& a, const CMat& b);
CMat cmat_sub(const CMat& a, const CMat& b);
CMat cmat_adjoint(const CMat& a);  // conjugate transpose
CMat cmat_identity(unsigned n);
bool cmat_is_unitary(const CMat& g);
CRat cmat_trace(const CMat& a);

/// Finite-dimensional Lie algebra by structure constants:
/// [e_i, e_j] = sum_k c[i][j][k] e_k.
struct LieAlgebra {
  unsigned dim = 0;
  std::vector<std::vector<std::vector<Rat>>> c;

  std::vector<Rat> bracket(const std::vector<Rat>& u, const std::vector<Rat>& v) const;
  Mat<Rat> ad(const std::vector<Rat>& v) const;
};

struct AlgebraReport {
  bool antisymmetric = false;
  bool jacobi = false;
  std::string residual;  // first failing identity, if any
  bool valid() const { return antisymmetric && jacobi; }
};

AlgebraReport validate_algebra(const LieAlgebra& L);

LieAlgebra so3_algebra();
LieAlgebra abelian_algebra(unsigned d);

bool form_symmetric(const Mat<Rat>& m);
bool form_invariant(const LieAlgebra& L, const Mat<Rat>& m);
bool form_nondegenerate(const Mat<Rat>& m);
/// Closure of a subspace (columns) under the bracket.
bool subspace_closed(const LieAlgebra& L, const Mat<Rat>& basis);
bool subspace_isotropic(const Mat<Rat>& pairing, const Mat<Rat>& basis);

struct ManinTriple {
  LieAlgebra d;
  Mat<Rat> pairing;
  Mat<Rat> g, h;  // subspaces as column bases
};

struct ManinReport {
  bool g_subalgebra = false, h_subalgebra = false;
  bool g_isotropic = false, h_isotropic = false;
  bool transversal = false;
  bool pairing_symmetric = false, pairing_invariant = false,
       pairing_nondegenerate = false;
  bool all() const {
    return g_subalgebra && h_subalgebra && g_isotropic && h_isotropic &&
           transversal && pairing_symmetric && pairing_invariant &&
           pairing_nondegenerate;
  }
};

ManinReport manin_check(const ManinTriple& t);

enum class SeriesType { A1, A2 };

/// Standard triple of the compact form: d = sl(n, C) as a real algebra,
/// g = su(n), h = a + n_+, pairing Im of the complex Killing form.
struct StandardTriple {
  ManinTriple triple;
  Mat<Rat> t, a, n_plus, n_minus;
  std::vector<CMat> basis;  // matrix realization of the d-basis
  /// Coordinates of a matrix in the d-basis (throws if outside the span).
  std::vector<Rat> coordinates(const CMat& m) const;
  CMat matrix_of(const std::vector<Rat>& coords) const;
};

StandardTriple standard_triple(SeriesType type);

struct QuotientReport {
  bool a = false;        // [k, h] inside h
  bool b = false;        // k° an ideal of h
  bool c = false;        // k° a subalgebra
  bool d_pd = false;     // Ad_g(h) ∩ (k + k°) inside k°, on samples
  bool d_trivial = false;  // Ad_g(h) ∩ (k + h) inside h, on samples
};

QuotientReport quotient_conditions(const StandardTriple& st, const Mat<Rat>& k,
                                   const std::vector<CMat>& samples);

struct PositivityReport {
  bool positive = false;
  std::string reason;         // empty when positive
  std::vector<Rat> witness;   // a leaf vector violating positivity, if any
};

/// Positivity of an antisymmetric bivector matrix w.r.t. a complex structure.
PositivityReport positivity(const Mat<Rat>& J, const Mat<Rat>& pi);

struct ActionBivector {
  Multivector pi;
  bool generators_commute = false;
  PoissonVerdict jacobi;
};

ActionBivector induced_from_action(const Mat<Rat>& pi_A,
                                   const std::vector<Multivector>& rho);

std::uint64_t weyl_order(char type, unsigned rank);

/// JSON input {"dim": n, "brackets": [[i, j, [coeffs...]], ...],
/// "pairing": [[...]] (optional)}; rationals as numbers or "p/q" strings.
std::pair<LieAlgebra, std::optional<Mat<Rat>>> algebra_from_json(
    const std::string& text);

}  // namespace pk
