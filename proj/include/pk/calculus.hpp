#pragma once

#include "pk/linalg.hpp"
#include "pk/scalar.hpp"

#include <map>
#include <optional>

namespace pk {

/// Strictly increasing index tuple into a chart's variable list (0-based).
using IdxTuple = std::vector<unsigned>;

/// Sort an arbitrary tuple into increasing order; returns the permutation
/// sign, or 0 if an index repeats.
int sort_tuple(IdxTuple& idx);

/// Graded antisymmetric coefficient table; Tag distinguishes multivectors
/// from forms (identical storage, different geometric role).
template <typename Tag>
class GradedObject {
public:
  GradedObject() = default;
  GradedObject(ChartPtr chart, unsigned degree)
      : chart_(std::move(chart)), degree_(degree) {}

  const ChartPtr& chart() const { return chart_; }
  unsigned degree() const { return degree_; }
  const std::map<IdxTuple, Scalar>& coeffs() const { return coeffs_; }
  bool is_zero() const {
    for (const auto& [i, c] : coeffs_)
      if (!c.is_zero()) return false;
    return true;
  }
  bool all_exact() const {
    for (const auto& [i, c] : coeffs_)
      if (!c.exact()) return false;
    return true;
  }

  Scalar coefficient(const IdxTuple& idx) const {
    IdxTuple k = idx;
    int sign = sort_tuple(k);
    if (sign == 0) return Scalar::constant(chart_, 0);
    auto it = coeffs_.find(k);
    if (it == coeffs_.end()) return Scalar::constant(chart_, 0);
    return sign > 0 ? it->second : -it->second;
  }

  /// Accumulate into the coefficient of an arbitrary (unsorted) tuple.
  void add(const IdxTuple& idx, const Scalar& c) {
    if (idx.size() != degree_) throw mode_error("index tuple degree mismatch");
    if (c.is_zero()) return;
    IdxTuple k = idx;
    int sign = sort_tuple(k);
    if (sign == 0) return;
    Scalar v = sign > 0 ? c : -c;
    auto it = coeffs_.find(k);
    if (it == coeffs_.end()) {
      coeffs_.emplace(std::move(k), std::move(v));
    } else {
      it->second = it->second + v;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  GradedObject operator+(const GradedObject& o) const {
    check_compat(o);
    GradedObject r = *this;
    for (const auto& [i, c] : o.coeffs_) r.add(i, c);
    return r;
  }
  GradedObject operator-(const GradedObject& o) const {
    check_compat(o);
    GradedObject r = *this;
    for (const auto& [i, c] : o.coeffs_) r.add(i, -c);
    return r;
  }
  GradedObject operator-() const {
    GradedObject r(chart_, degree_);
    for (const auto& [i, c] : coeffs_) r.coeffs_[i] = -c;
    return r;
  }
  GradedObject operator*(const Scalar& f) const {
    GradedObject r(chart_, degree_);
    for (const auto& [i, c] : coeffs_) r.add(i, c * f);
    return r;
  }
  bool operator==(const GradedObject& o) const {
    check_compat(o);
    return (*this - o).is_zero();
  }

private:
  void check_compat(const GradedObject& o) const {
    if (!(*chart_ == *o.chart_) || degree_ != o.degree_)
      throw mode_error("graded objects on different charts or degrees");
  }

  ChartPtr chart_;
  unsigned degree_ = 0;
  std::map<IdxTuple, Scalar> coeffs_;
};

struct MultivectorTag {};
struct FormTag {};
using Multivector = GradedObject<MultivectorTag>;
using Form = GradedObject<FormTag>;

template <typename Tag>
GradedObject<Tag> wedge(const GradedObject<Tag>& a, const GradedObject<Tag>& b) {
  GradedObject<Tag> r(a.chart(), a.degree() + b.degree());
  if (r.degree() > a.chart()->dim()) return r;  // zero beyond top degree
  for (const auto& [ia, ca] : a.coeffs())
    for (const auto& [ib, cb] : b.coeffs()) {
      IdxTuple idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      r.add(idx, ca * cb);
    }
  return r;
}

/// Smooth map between charts: one source-chart scalar per target variable.
struct SmoothMap {
  ChartPtr source;
  ChartPtr target;
  std::vector<Scalar> components;

  SmoothMap(ChartPtr src, ChartPtr tgt, std::vector<Scalar> comps)
      : source(std::move(src)), target(std::move(tgt)), components(std::move(comps)) {
    if (components.size() != target->dim())
      throw mode_error("map component count does not match target dimension");
  }

  /// Jacobian entries J[a][i] = d(comp_a)/d(source var i), scalars on source.
  std::vector<std::vector<Scalar>> jacobian() const;
  /// Jacobian evaluated at an exact source point.
  Mat<Rat> jacobian_at(const Point& p) const;
  Point apply(const Point& p) const;
  Scalar pullback_scalar(const Scalar& f) const;  // f on target -> f∘map
};

// --- constructors ---
Multivector vector_field(const ChartPtr& chart, const std::vector<Scalar>& comps);
Multivector basis_multivector(const ChartPtr& chart, const IdxTuple& idx);
Form basis_form(const ChartPtr& chart, const IdxTuple& idx);
Form d_of_scalar(const Scalar& f);
/// Euler field x∂x + y∂y and rotation field x∂y − y∂x of the complex factor
/// with real coordinates at positions (xi, yi).
Multivector euler_field(const ChartPtr& chart, unsigned xi, unsigned yi);
Multivector rotation_field(const ChartPtr& chart, unsigned xi, unsigned yi);

// --- core operations ---
Multivector schouten(const Multivector& P, const Multivector& Q);

struct PoissonVerdict {
  enum class Kind { True, False, NotDetermined } kind;
  double sampled_residual = 0.0;  // NUMERIC mode only
  bool holds() const { return kind == Kind::True; }
};
PoissonVerdict is_poisson(const Multivector& pi);

Multivector sharp(const Multivector& pi, const Form& xi);
/// Matrix M with sharp(pi, dx_a) = sum_b M[b][a] d/dx_b, i.e. M[b][a] = pi^{ab}.
std::vector<std::vector<Scalar>> sharp_matrix(const Multivector& pi);
Mat<Rat> sharp_matrix_at(const Multivector& pi, const Point& p);
/// Full antisymmetric component table pi^{ab} as scalars.
std::vector<std::vector<Scalar>> bivector_components(const Multivector& pi);

Form d(const Form& omega);
Form interior(const Multivector& X, const Form& omega);
Form lie_derivative(const Multivector& X, const Form& omega);
Multivector lie_derivative(const Multivector& X, const Multivector& T);

Form pullback_form(const SmoothMap& phi, const Form& omega);

/// Hamiltonian vector field H_f = pi^sharp(df).
Multivector hamiltonian_field(const Multivector& pi, const Scalar& f);

/// Poisson-map check: exact verdict in EXACT mode; NotDetermined-on-pass in
/// NUMERIC mode (sampled residual).
PoissonVerdict map_related(const SmoothMap& phi, const Multivector& pi_src,
                           const Multivector& pi_tgt);

}  // namespace pk
