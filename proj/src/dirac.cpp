#include "pk/dirac.hpp"

#include <json.hpp>

namespace pk {

Rat pairing(const GTElement& e, const GTElement& f) {
  Rat acc = 0;
  for (unsigned i = 0; i < e.dim(); ++i) acc += e.xi[i] * f.u[i] + e.u[i] * f.xi[i];
  return acc;
}

LagrangianSubspace::LagrangianSubspace(unsigned n, const Mat<Rat>& columns) : n_(n) {
  if (!columns.empty() && columns.size() != 2 * n)
    throw mode_error("Lagrangian basis must have 2n rows");
  basis_ = column_space(columns.empty() ? Mat<Rat>(2 * n, std::vector<Rat>{}) : columns);
  // isotropy check on canonical generators
  std::size_t k = mat_cols(basis_);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      Rat acc = 0;
      for (unsigned i = 0; i < n_; ++i)
        acc += basis_[n_ + i][a] * basis_[i][b] + basis_[i][a] * basis_[n_ + i][b];
      if (acc != 0) throw mode_error("subspace is not isotropic");
    }
}

LagrangianSubspace LagrangianSubspace::span(unsigned n, const std::vector<GTElement>& gens) {
  Mat<Rat> m(2 * n, std::vector<Rat>(gens.size(), Rat(0)));
  for (std::size_t c = 0; c < gens.size(); ++c)
    for (unsigned i = 0; i < n; ++i) {
      m[i][c] = gens[c].u[i];
      m[n + i][c] = gens[c].xi[i];
    }
  return LagrangianSubspace(n, m);
}

namespace {

Mat<Rat> v_part(const Mat<Rat>& basis, unsigned n) {
  Mat<Rat> m(n);
  for (unsigned i = 0; i < n; ++i) m[i] = basis[i];
  return m;
}
Mat<Rat> vstar_part(const Mat<Rat>& basis, unsigned n) {
  Mat<Rat> m(n);
  for (unsigned i = 0; i < n; ++i) m[i] = basis[n + i];
  return m;
}

}  // namespace

unsigned LagrangianSubspace::dim_cap_V() const {
  // elements with zero covector part: kernel of the V*-block
  auto ker = kernel(vstar_part(basis_, n_), Rat(1));
  return static_cast<unsigned>(ker.size());
}

unsigned LagrangianSubspace::dim_cap_Vstar() const {
  auto ker = kernel(v_part(basis_, n_), Rat(1));
  return static_cast<unsigned>(ker.size());
}

Mat<Rat> LagrangianSubspace::vector_projection() const {
  return column_space(v_part(basis_, n_));
}

std::optional<Mat<Rat>> LagrangianSubspace::as_bivector() const {
  if (!is_lagrangian() || dim_cap_V() != 0) return std::nullopt;
  // covector parts span V*; solve (pi^sharp e_a; e_a) in L for each a.
  // Column combination c with Vstar-block * c = e_a gives vector part.
  Mat<Rat> vs = vstar_part(basis_, n_);
  Mat<Rat> vv = v_part(basis_, n_);
  Mat<Rat> pi(n_, std::vector<Rat>(n_, Rat(0)));
  for (unsigned a = 0; a < n_; ++a) {
    std::vector<Rat> rhs(n_, Rat(0));
    rhs[a] = 1;
    auto c = solve(vs, rhs, Rat(1));
    if (!c) return std::nullopt;
    // vector part = pi^sharp(dx_a) = sum_b pi^{ab} d_b
    for (unsigned b = 0; b < n_; ++b) {
      Rat acc = 0;
      for (std::size_t k = 0; k < c->size(); ++k) acc += vv[b][k] * (*c)[k];
      pi[a][b] = acc;
    }
  }
  return pi;
}

std::optional<Mat<Rat>> LagrangianSubspace::as_form() const {
  if (!is_lagrangian() || dim_cap_Vstar() != 0) return std::nullopt;
  Mat<Rat> vs = vstar_part(basis_, n_);
  Mat<Rat> vv = v_part(basis_, n_);
  Mat<Rat> om(n_, std::vector<Rat>(n_, Rat(0)));
  for (unsigned a = 0; a < n_; ++a) {
    std::vector<Rat> rhs(n_, Rat(0));
    rhs[a] = 1;
    auto c = solve(vv, rhs, Rat(1));
    if (!c) return std::nullopt;
    for (unsigned b = 0; b < n_; ++b) {
      Rat acc = 0;
      for (std::size_t k = 0; k < c->size(); ++k) acc += vs[b][k] * (*c)[k];
      om[a][b] = acc;  // (iota_{e_a} omega)_b = omega_{ab}
    }
  }
  return om;
}

LagrangianSubspace graph_of_bivector(const Mat<Rat>& pi) {
  unsigned n = static_cast<unsigned>(pi.size());
  Mat<Rat> m(2 * n, std::vector<Rat>(n, Rat(0)));
  for (unsigned a = 0; a < n; ++a) {
    for (unsigned b = 0; b < n; ++b) m[b][a] = pi[a][b];  // pi^sharp(dx_a)
    m[n + a][a] = 1;
  }
  return LagrangianSubspace(n, m);
}

LagrangianSubspace graph_of_form(const Mat<Rat>& omega) {
  unsigned n = static_cast<unsigned>(omega.size());
  Mat<Rat> m(2 * n, std::vector<Rat>(n, Rat(0)));
  for (unsigned a = 0; a < n; ++a) {
    m[a][a] = 1;
    for (unsigned b = 0; b < n; ++b) m[n + b][a] = omega[a][b];
  }
  return LagrangianSubspace(n, m);
}

LagrangianSubspace gauge(const LagrangianSubspace& L, const Mat<Rat>& omega) {
  unsigned n = L.base_dim();
  Mat<Rat> m = L.basis();
  for (std::size_t c = 0; c < mat_cols(m); ++c)
    for (unsigned b = 0; b < n; ++b) {
      Rat acc = 0;
      for (unsigned a = 0; a < n; ++a) acc += m[a][c] * omega[a][b];
      m[n + b][c] += acc;
    }
  return LagrangianSubspace(n, m);
}

LagrangianSubspace pullback_point(const LagrangianSubspace& L, const Mat<Rat>& J) {
  unsigned n = L.base_dim();
  unsigned m_dim = static_cast<unsigned>(mat_cols(J));
  std::size_t k = L.dim();
  // unknowns (u in Q^m, eta in Q^n, c in Q^k) with J u = B_v c, eta = B_xi c
  Mat<Rat> sys(2 * n, std::vector<Rat>(m_dim + n + k, Rat(0)));
  const Mat<Rat>& B = L.basis();
  for (unsigned r = 0; r < n; ++r) {
    for (unsigned j = 0; j < m_dim; ++j) sys[r][j] = J[r][j];
    for (std::size_t c = 0; c < k; ++c) sys[r][m_dim + n + c] = -B[r][c];
    sys[n + r][m_dim + r] = 1;
    for (std::size_t c = 0; c < k; ++c) sys[n + r][m_dim + n + c] = -B[n + r][c];
  }
  auto ker = kernel(sys, Rat(1));
  Mat<Rat> gens(2 * m_dim, std::vector<Rat>(ker.size(), Rat(0)));
  for (std::size_t c = 0; c < ker.size(); ++c) {
    for (unsigned i = 0; i < m_dim; ++i) gens[i][c] = ker[c][i];
    // covector part J^T eta
    for (unsigned i = 0; i < m_dim; ++i) {
      Rat acc = 0;
      for (unsigned r = 0; r < n; ++r) acc += J[r][i] * ker[c][m_dim + r];
      gens[m_dim + i][c] = acc;
    }
  }
  LagrangianSubspace out(m_dim, gens);
  if (!out.is_lagrangian())
    throw mode_error("pullback did not produce a Lagrangian subspace");
  return out;
}

Mat<Rat> bivector_matrix_at(const Multivector& pi, const Point& p) {
  auto comp = bivector_components(pi);
  unsigned n = pi.chart()->dim();
  Mat<Rat> m(n, std::vector<Rat>(n, Rat(0)));
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) m[a][b] = comp[a][b].evaluate(p);
  return m;
}

Mat<Rat> form_matrix_at(const Form& omega, const Point& p) {
  if (omega.degree() != 2) throw mode_error("2-form expected");
  unsigned n = omega.chart()->dim();
  Mat<Rat> m(n, std::vector<Rat>(n, Rat(0)));
  for (const auto& [idx, c] : omega.coeffs()) {
    Rat v = c.evaluate(p);
    m[idx[0]][idx[1]] = v;
    m[idx[1]][idx[0]] = -v;
  }
  return m;
}

LagrangianFamily LagrangianFamily::graph(Multivector pi) {
  LagrangianFamily f;
  f.rule_ = Rule::GraphBivector;
  f.chart_ = pi.chart();
  f.pi_ = std::move(pi);
  return f;
}

LagrangianFamily LagrangianFamily::graph(Form omega) {
  LagrangianFamily f;
  f.rule_ = Rule::GraphForm;
  f.chart_ = omega.chart();
  f.omega_ = std::move(omega);
  return f;
}

LagrangianFamily LagrangianFamily::gauged(LagrangianFamily inner, Form omega) {
  LagrangianFamily f;
  f.rule_ = Rule::Gauge;
  f.chart_ = inner.chart();
  f.inner_ = std::make_shared<LagrangianFamily>(std::move(inner));
  f.omega_ = std::move(omega);
  return f;
}

LagrangianFamily LagrangianFamily::pulled_back(LagrangianFamily inner, SmoothMap map) {
  LagrangianFamily f;
  f.rule_ = Rule::Pullback;
  f.chart_ = map.source;
  f.inner_ = std::make_shared<LagrangianFamily>(std::move(inner));
  f.map_ = std::move(map);
  return f;
}

LagrangianSubspace LagrangianFamily::at(const Point& p) const {
  switch (rule_) {
    case Rule::GraphBivector: return graph_of_bivector(bivector_matrix_at(*pi_, p));
    case Rule::GraphForm: return graph_of_form(form_matrix_at(*omega_, p));
    case Rule::Gauge: return gauge(inner_->at(p), form_matrix_at(*omega_, p));
    case Rule::Pullback:
      return pullback_point(inner_->at(map_->apply(p)), map_->jacobian_at(p));
  }
  throw mode_error("corrupt family rule");
}

ScanReport family_scan(const LagrangianFamily& F, const std::vector<Point>& grid) {
  ScanReport rep;
  for (const auto& p : grid) {
    LagrangianSubspace L = F.at(p);
    ScanPoint sp;
    sp.coords = p.coords;
    sp.dim_cap_V = L.dim_cap_V();
    sp.dim_cap_Vstar = L.dim_cap_Vstar();
    bool biv = sp.dim_cap_V == 0, form = sp.dim_cap_Vstar == 0;
    sp.kind = biv && form ? "symplectic" : biv ? "bivector" : form ? "form" : "mixed";
    rep.points.push_back(std::move(sp));
  }
  for (const auto& sp : rep.points) {
    std::pair<unsigned, unsigned> prof{sp.dim_cap_V, sp.dim_cap_Vstar};
    if (rep.rank_profile.empty() || rep.rank_profile.back() != prof)
      rep.rank_profile.push_back(prof);
  }
  for (std::size_t i = 0; i + 1 < rep.points.size(); ++i) {
    const auto& a = rep.points[i];
    const auto& b = rep.points[i + 1];
    if (a.dim_cap_V != b.dim_cap_V || a.dim_cap_Vstar != b.dim_cap_Vstar ||
        a.kind != b.kind)
      rep.witnesses.emplace_back(i, i + 1);
  }
  return rep;
}

std::string ScanReport::to_json() const {
  nlohmann::json j;
  j["points"] = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json jp;
    jp["coords"] = nlohmann::json::array();
    for (const auto& c : p.coords) jp["coords"].push_back(rational_to_string(c));
    jp["dim_cap_V"] = p.dim_cap_V;
    jp["dim_cap_Vstar"] = p.dim_cap_Vstar;
    jp["kind"] = p.kind;
    j["points"].push_back(jp);
  }
  j["rank_profile"] = nlohmann::json::array();
  for (const auto& [a, b] : rank_profile) j["rank_profile"].push_back({a, b});
  j["witnesses"] = nlohmann::json::array();
  for (const auto& [a, b] : witnesses) j["witnesses"].push_back({a, b});
  return j.dump(2);
}

}  // namespace pk
