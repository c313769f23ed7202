#pragma once

#include "pk/calculus.hpp"

#include <memory>
#include <optional>
#include <string>

namespace pk {

/// Element u + xi of V ⊕ V* at a point.
struct GTElement {
  std::vector<Rat> u;
  std::vector<Rat> xi;
  unsigned dim() const { return static_cast<unsigned>(u.size()); }
};

/// Symmetric pairing <u+xi, v+eta> = eta(u) + xi(v).
Rat pairing(const GTElement& e, const GTElement& f);

/// Isotropic subspace of V ⊕ V* stored as a 2n x k matrix in reduced column
/// echelon form (vector parts in rows 0..n-1, covector parts in rows n..2n-1).
/// Equality of subspaces is equality of canonical matrices.
class LagrangianSubspace {
public:
  LagrangianSubspace(unsigned n, const Mat<Rat>& columns);
  static LagrangianSubspace span(unsigned n, const std::vector<GTElement>& gens);

  unsigned base_dim() const { return n_; }
  unsigned dim() const { return static_cast<unsigned>(mat_cols(basis_)); }
  bool is_lagrangian() const { return dim() == n_; }
  const Mat<Rat>& basis() const { return basis_; }

  unsigned dim_cap_V() const;      // dim(L ∩ (V ⊕ 0))
  unsigned dim_cap_Vstar() const;  // dim(L ∩ (0 ⊕ V*))
  /// Canonical basis of the vector-part projection pr_V(L).
  Mat<Rat> vector_projection() const;

  /// If L = graph(pi) (i.e. L ∩ V = 0 and L is Lagrangian), the antisymmetric
  /// component matrix pi^{ab}.
  std::optional<Mat<Rat>> as_bivector() const;
  /// If L = graph(omega) (L ∩ V* = 0), the 2-form matrix omega_{ab}.
  std::optional<Mat<Rat>> as_form() const;

  bool operator==(const LagrangianSubspace& o) const {
    return n_ == o.n_ && basis_ == o.basis_;
  }

private:
  unsigned n_;
  Mat<Rat> basis_;
};

/// graph(pi) = {(pi^sharp(xi); xi)} from the component matrix pi^{ab}.
LagrangianSubspace graph_of_bivector(const Mat<Rat>& pi);
/// graph(omega) = {(u; iota_u omega)} from the matrix omega_{ab}.
LagrangianSubspace graph_of_form(const Mat<Rat>& omega);
/// Gauge transform R_omega: (u; xi) -> (u; xi + iota_u omega).
LagrangianSubspace gauge(const LagrangianSubspace& L, const Mat<Rat>& omega);
/// i^!(L) = {(u; J^T eta) : (J u; eta) in L} for the Jacobian J (n x m).
LagrangianSubspace pullback_point(const LagrangianSubspace& L, const Mat<Rat>& J);

/// Component matrix pi^{ab} of a bivector at an exact point (and the 2-form
/// matrix omega_{ab} of a form).
Mat<Rat> bivector_matrix_at(const Multivector& pi, const Point& p);
Mat<Rat> form_matrix_at(const Form& omega, const Point& p);

/// Symbolic rule for a pointwise Lagrangian family.
class LagrangianFamily {
public:
  static LagrangianFamily graph(Multivector pi);
  static LagrangianFamily graph(Form omega);
  static LagrangianFamily gauged(LagrangianFamily inner, Form omega);
  static LagrangianFamily pulled_back(LagrangianFamily inner, SmoothMap map);

  const ChartPtr& chart() const { return chart_; }
  LagrangianSubspace at(const Point& p) const;

private:
  enum class Rule { GraphBivector, GraphForm, Gauge, Pullback };
  LagrangianFamily() = default;

  Rule rule_ = Rule::GraphBivector;
  ChartPtr chart_;
  std::optional<Multivector> pi_;
  std::optional<Form> omega_;
  std::shared_ptr<const LagrangianFamily> inner_;
  std::optional<SmoothMap> map_;
};

struct ScanPoint {
  std::vector<Rat> coords;
  unsigned dim_cap_V = 0;
  unsigned dim_cap_Vstar = 0;
  std::string kind;  // "bivector", "form", "symplectic" (both), "mixed"
};

struct ScanReport {
  std::vector<ScanPoint> points;
  /// Distinct (dim_cap_V, dim_cap_Vstar) profiles in grid order.
  std::vector<std::pair<unsigned, unsigned>> rank_profile;
  /// Indices (i, i+1) of consecutive grid points whose profile or kind differ.
  std::vector<std::pair<std::size_t, std::size_t>> witnesses;
  std::string to_json() const;
};

ScanReport family_scan(const LagrangianFamily& F, const std::vector<Point>& grid);

}  // namespace pk
