#include "pk/toric.hpp"
#include "pk/lie.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace pk {

namespace {

// linear constraint a.xi >= b (or > b when strict)
struct Constraint {
  std::vector<Rat> a;
  Rat b;
  bool strict = false;
};

void normalize(Constraint& c) {
  Rat scale(0);
  for (const auto& e : c.a)
    if (e != 0) {
      scale = abs(e);
      break;
    }
  if (scale == 0) return;
  for (auto& e : c.a) e /= scale;
  c.b /= scale;
}

bool same_constraint(const Constraint& x, const Constraint& y) {
  return x.a == y.a && x.b == y.b && x.strict == y.strict;
}

/// Fourier-Motzkin feasibility over the rationals.
bool fm_feasible(std::vector<Constraint> cs, unsigned nvars) {
  for (unsigned var = nvars; var-- > 0;) {
    std::vector<Constraint> lower, upper, rest;
    for (auto& c : cs) {
      if (c.a[var] > 0)
        lower.push_back(std::move(c));
      else if (c.a[var] < 0)
        upper.push_back(std::move(c));
      else
        rest.push_back(std::move(c));
    }
    if (!lower.empty() && !upper.empty()) {
      for (const auto& lo : lower)
        for (const auto& up : upper) {
          // positive combination cancelling xi_var
          Rat f_lo = -up.a[var], f_up = lo.a[var];
          Constraint combo;
          combo.a.resize(nvars, Rat(0));
          for (unsigned k = 0; k < nvars; ++k)
            combo.a[k] = f_lo * lo.a[k] + f_up * up.a[k];
          combo.b = f_lo * lo.b + f_up * up.b;
          combo.strict = lo.strict || up.strict;
          normalize(combo);
          bool dup = false;
          for (const auto& r : rest)
            if (same_constraint(r, combo)) dup = true;
          if (!dup) rest.push_back(std::move(combo));
        }
    }
    cs = std::move(rest);
  }
  for (const auto& c : cs) {
    if (c.strict ? !(0 > c.b) : !(0 >= c.b)) return false;
  }
  return true;
}

std::vector<Constraint> polytope_constraints(const DelzantPolytope& dp) {
  std::vector<Constraint> cs;
  for (std::size_t i = 0; i < dp.facet_count(); ++i) {
    Constraint c;
    c.a.reserve(dp.rank);
    for (unsigned k = 0; k < dp.rank; ++k) c.a.push_back(Rat(dp.normals[i][k]));
    c.b = dp.offsets[i];
    cs.push_back(std::move(c));
  }
  return cs;
}

bool bounded(const DelzantPolytope& dp) {
  // recession cone {v : <v, u_i> >= 0} must be {0}
  for (unsigned k = 0; k < dp.rank; ++k)
    for (int s : {1, -1}) {
      std::vector<Constraint> cs = polytope_constraints(dp);
      for (auto& c : cs) c.b = 0;
      Constraint fix_lo, fix_hi;
      fix_lo.a.resize(dp.rank, Rat(0));
      fix_lo.a[k] = 1;
      fix_lo.b = s;
      fix_hi.a.resize(dp.rank, Rat(0));
      fix_hi.a[k] = -1;
      fix_hi.b = -s;
      cs.push_back(fix_lo);
      cs.push_back(fix_hi);
      if (fm_feasible(std::move(cs), dp.rank)) return false;
    }
  return true;
}

std::vector<Rat> eval_facets(const DelzantPolytope& dp, const std::vector<Rat>& xi) {
  std::vector<Rat> v(dp.facet_count(), Rat(0));
  for (std::size_t i = 0; i < dp.facet_count(); ++i)
    for (unsigned k = 0; k < dp.rank; ++k) v[i] += Rat(dp.normals[i][k]) * xi[k];
  return v;
}

Rat det_rat(Mat<Rat> m) {
  Rat d(1);
  std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return Rat(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rat f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return d;
}

// evaluate a degree-1 multivector at a point, as a coordinate vector
std::vector<Rat> field_at(const Multivector& X, const Point& p) {
  std::vector<Rat> v(X.chart()->dim(), Rat(0));
  for (const auto& [idx, c] : X.coeffs()) v[idx[0]] = c.evaluate(p);
  return v;
}

}  // namespace

DelzantPolytope polytope_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("bad polytope JSON: ") + e.what(), 0);
  }
  if (!doc.contains("rank") || !doc["rank"].is_number_unsigned())
    throw parse_error("polytope JSON needs an unsigned \"rank\"", 0);
  DelzantPolytope dp;
  dp.rank = doc["rank"].get<unsigned>();
  if (!doc.contains("facets") || !doc["facets"].is_array())
    throw parse_error("polytope JSON needs a \"facets\" array", 0);
  for (const auto& f : doc["facets"]) {
    if (!f.contains("u") || !f["u"].is_array() || f["u"].size() != dp.rank)
      throw parse_error("each facet needs a rank-length integer \"u\"", 0);
    std::vector<Int> u;
    for (const auto& e : f["u"]) {
      if (!e.is_number_integer()) throw parse_error("facet normals must be integers", 0);
      u.push_back(Int(e.get<long long>()));
    }
    dp.normals.push_back(std::move(u));
    if (!f.contains("c")) throw parse_error("each facet needs an offset \"c\"", 0);
    const auto& c = f["c"];
    if (c.is_string())
      dp.offsets.push_back(parse_rational(c.get<std::string>()));
    else if (c.is_number_integer())
      dp.offsets.push_back(Rat(c.get<long long>()));
    else
      throw parse_error("facet offsets must be integers or \"p/q\" strings", 0);
  }
  return dp;
}

std::vector<std::vector<Rat>> vertices(const DelzantPolytope& dp) {
  unsigned n = dp.rank;
  std::size_t d = dp.facet_count();
  if (d < n) throw mode_error("polytope is unbounded");
  if (!bounded(dp)) throw mode_error("polytope is unbounded");

  std::vector<std::vector<Rat>> verts;
  std::vector<unsigned> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  auto next_combo = [&]() {
    int i = static_cast<int>(n) - 1;
    while (i >= 0 && pick[i] == d - n + i) --i;
    if (i < 0) return false;
    ++pick[i];
    for (unsigned j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
    return true;
  };
  do {
    Mat<Rat> A(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> rhs(n);
    for (unsigned r = 0; r < n; ++r) {
      for (unsigned k = 0; k < n; ++k) A[r][k] = Rat(dp.normals[pick[r]][k]);
      rhs[r] = dp.offsets[pick[r]];
    }
    if (rank(A) != n) continue;
    auto xi = solve(A, rhs, Rat(1));
    if (!xi) continue;
    auto vals = eval_facets(dp, *xi);
    bool feasible = true;
    for (std::size_t i = 0; i < d; ++i)
      if (vals[i] < dp.offsets[i]) feasible = false;
    if (feasible && std::find(verts.begin(), verts.end(), *xi) == verts.end())
      verts.push_back(*xi);
  } while (next_combo());
  if (verts.empty()) throw mode_error("polytope is empty");

  for (const auto& v : verts) {
    auto vals = eval_facets(dp, v);
    unsigned active = 0;
    for (std::size_t i = 0; i < d; ++i)
      if (vals[i] == dp.offsets[i]) ++active;
    if (active != n) throw mode_error("polytope is not simple");
  }
  std::sort(verts.begin(), verts.end());
  return verts;
}

DelzantCheck is_delzant(const DelzantPolytope& dp) {
  DelzantCheck out;
  for (const auto& u : dp.normals) {
    Int g(0);
    for (const auto& e : u) g = gcd(g, e);
    if (g != 1) {
      out.reason = "facet normal is not primitive";
      return out;
    }
  }
  for (const auto& v : vertices(dp)) {
    auto vals = eval_facets(dp, v);
    Mat<Rat> active;
    for (std::size_t i = 0; i < dp.facet_count(); ++i)
      if (vals[i] == dp.offsets[i]) {
        std::vector<Rat> row(dp.rank);
        for (unsigned k = 0; k < dp.rank; ++k) row[k] = Rat(dp.normals[i][k]);
        active.push_back(std::move(row));
      }
    Rat det = det_rat(active);
    if (det != 1 && det != -1) {
      out.failing_vertex = v;
      out.reason = "active normals are not a Z-basis";
      return out;
    }
  }
  out.delzant = true;
  return out;
}

KernelLattice kernel_lattice(const DelzantPolytope& dp) {
  unsigned n = dp.rank;
  std::size_t d = dp.facet_count();
  // A: n x d with columns u_i; diagonalize by unimodular row/column ops,
  // tracking the column transform R with A_new = A_old R
  Mat<Int> A(n, std::vector<Int>(d, Int(0)));
  for (std::size_t j = 0; j < d; ++j)
    for (unsigned i = 0; i < n; ++i) A[i][j] = dp.normals[j][i];
  Mat<Int> R(d, std::vector<Int>(d, Int(0)));
  for (std::size_t j = 0; j < d; ++j) R[j][j] = 1;

  std::size_t t = 0;
  while (t < n && t < d) {
    // pivot: smallest nonzero absolute value in the remaining block
    std::size_t pr = t, pc = t;
    Int best(0);
    for (std::size_t i = t; i < n; ++i)
      for (std::size_t j = t; j < d; ++j)
        if (A[i][j] != 0 && (best == 0 || abs(A[i][j]) < best)) {
          best = abs(A[i][j]);
          pr = i;
          pc = j;
        }
    if (best == 0) break;
    std::swap(A[t], A[pr]);
    for (std::size_t i = 0; i < n; ++i) std::swap(A[i][t], A[i][pc]);
    for (std::size_t i = 0; i < d; ++i) std::swap(R[i][t], R[i][pc]);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t j = t + 1; j < d; ++j) {
        if (A[t][j] == 0) continue;
        Int q = A[t][j] / A[t][t];
        for (std::size_t i = 0; i < n; ++i) A[i][j] -= q * A[i][t];
        for (std::size_t i = 0; i < d; ++i) R[i][j] -= q * R[i][t];
        if (A[t][j] != 0) {
          for (std::size_t i = 0; i < n; ++i) std::swap(A[i][t], A[i][j]);
          for (std::size_t i = 0; i < d; ++i) std::swap(R[i][t], R[i][j]);
          clean = false;
        }
      }
      for (std::size_t i = t + 1; i < n; ++i) {
        if (A[i][t] == 0) continue;
        Int q = A[i][t] / A[t][t];
        for (std::size_t j = 0; j < d; ++j) A[i][j] -= q * A[t][j];
        if (A[i][t] != 0) {
          std::swap(A[t], A[i]);
          clean = false;
        }
      }
    }
    ++t;
  }

  KernelLattice out;
  out.surjective = t == n;
  for (std::size_t k = 0; k < t; ++k)
    if (abs(A[k][k]) != 1) out.surjective = false;
  for (std::size_t j = t; j < d; ++j) {
    std::vector<Int> col(d);
    for (std::size_t i = 0; i < d; ++i) col[i] = R[i][j];
    out.basis.push_back(std::move(col));
  }
  return out;
}

bool face_feasible(const DelzantPolytope& dp, const std::vector<unsigned>& I,
                   bool strict) {
  std::vector<bool> in(dp.facet_count(), false);
  for (unsigned i : I) in.at(i) = true;
  std::vector<Constraint> cs;
  for (std::size_t i = 0; i < dp.facet_count(); ++i) {
    Constraint c;
    for (unsigned k = 0; k < dp.rank; ++k) c.a.push_back(Rat(dp.normals[i][k]));
    c.b = dp.offsets[i];
    if (in[i]) {
      Constraint flip = c;
      for (auto& e : flip.a) e = -e;
      flip.b = -flip.b;
      cs.push_back(c);
      cs.push_back(flip);  // equality
    } else {
      c.strict = strict;
      cs.push_back(c);
    }
  }
  return fm_feasible(std::move(cs), dp.rank);
}

std::vector<std::vector<unsigned>> faces(const DelzantPolytope& dp) {
  std::size_t d = dp.facet_count();
  if (d > 20) throw mode_error("face enumeration supports at most 20 facets");
  std::vector<std::vector<unsigned>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    std::vector<unsigned> I;
    for (std::size_t i = 0; i < d; ++i)
      if (mask & (std::size_t{1} << i)) I.push_back(static_cast<unsigned>(i));
    if (face_feasible(dp, I, true)) out.push_back(std::move(I));
  }
  return out;
}

std::size_t leaf_count_toric(const DelzantPolytope& dp) { return faces(dp).size(); }

std::vector<Rat> moment_map(const DelzantPolytope& dp,
                            const std::vector<Rat>& abs_sq) {
  if (abs_sq.size() != dp.facet_count())
    throw mode_error("moment map needs one |z_i|^2 per facet");
  std::vector<Rat> mu(dp.facet_count());
  for (std::size_t i = 0; i < dp.facet_count(); ++i)
    mu[i] = abs_sq[i] / 2 + dp.offsets[i];
  return mu;
}

std::vector<Rat> moment_map_N(const DelzantPolytope& dp,
                              const std::vector<Rat>& abs_sq) {
  auto mu = moment_map(dp, abs_sq);
  auto ker = kernel_lattice(dp);
  std::vector<Rat> out;
  for (const auto& v : ker.basis) {
    Rat acc(0);
    for (std::size_t i = 0; i < v.size(); ++i) acc += Rat(v[i]) * mu[i];
    out.push_back(acc);
  }
  return out;
}

bool git_coregular_sample(const DelzantPolytope& dp, const Mat<Rat>& pi_A,
                          const Point& z) {
  std::size_t d = dp.facet_count();
  if (z.chart->dim() != 2 * d)
    throw mode_error("sample chart must have one (x, y) pair per facet");

  Mat<Rat> J(2 * d, std::vector<Rat>(2 * d, Rat(0)));
  for (std::size_t i = 0; i < d; ++i) {
    J[2 * i][2 * i + 1] = -1;
    J[2 * i + 1][2 * i] = 1;
  }
  if (!positivity(J, pi_A).positive)
    throw mode_error("git_coregular_sample needs a positive bivector");

  std::vector<unsigned> I;
  for (std::size_t i = 0; i < d; ++i)
    if (z.coords[2 * i] == 0 && z.coords[2 * i + 1] == 0)
      I.push_back(static_cast<unsigned>(i));
  if (!face_feasible(dp, I, true))
    throw eval_error("sample point lies outside Sigma_Delta");

  std::vector<Multivector> rho;
  for (std::size_t i = 0; i < d; ++i) {
    rho.push_back(euler_field(z.chart, 2 * i, 2 * i + 1));
    rho.push_back(rotation_field(z.chart, 2 * i, 2 * i + 1));
  }
  Multivector Pi = induced_from_action(pi_A, rho).pi;

  // complexified orbit tangent W_z of the subtorus N
  auto ker = kernel_lattice(dp);
  std::vector<std::vector<Rat>> cols;
  for (const auto& v : ker.basis) {
    Multivector ev(z.chart, 1), vv(z.chart, 1);
    for (std::size_t i = 0; i < d; ++i) {
      if (v[i] == 0) continue;
      Scalar f = Scalar::constant(z.chart, Rat(v[i]));
      ev = ev + rho[2 * i] * f;
      vv = vv + rho[2 * i + 1] * f;
    }
    cols.push_back(field_at(ev, z));
    cols.push_back(field_at(vv, z));
  }
  Mat<Rat> W(2 * d, std::vector<Rat>(cols.size(), Rat(0)));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < 2 * d; ++r) W[r][c] = cols[c][r];
  W = column_space(W);

  Mat<Rat> M = sharp_matrix_at(Pi, z);
  auto ann = kernel(mat_transpose(W), Rat(1));
  Mat<Rat> E(2 * d, std::vector<Rat>(ann.size(), Rat(0)));
  for (std::size_t c = 0; c < ann.size(); ++c)
    for (std::size_t b = 0; b < 2 * d; ++b) {
      Rat acc(0);
      for (std::size_t a = 0; a < 2 * d; ++a) acc += M[b][a] * ann[c][a];
      E[b][c] = acc;
    }
  E = column_space(E);
  return mat_cols(subspace_intersection(E, W, Rat(1))) == 0;
}

bool totally_real(const Multivector& pi) {
  const ChartPtr& chart = pi.chart();
  unsigned n = chart->dim();
  if (pi.degree() != 2) throw mode_error("totally_real expects a bivector");
  if (n % 2 != 0) throw mode_error("totally_real needs complex-factor pairs");
  if (!pi.all_exact()) throw mode_error("totally_real requires EXACT coefficients");
  // conjugation c : (x_i, y_i) -> (x_i, -y_i); check c_* pi = -pi
  std::vector<Scalar> images;
  auto sign = [](unsigned k) { return k % 2 == 0 ? 1 : -1; };
  for (unsigned k = 0; k < n; ++k) {
    Scalar v = Scalar::variable(chart, k);
    images.push_back(sign(k) > 0 ? v : -v);
  }
  Multivector pushed(chart, 2);
  for (const auto& [idx, c] : pi.coeffs()) {
    Scalar moved = c.substitute(chart, images);  // c o conj = c o conj^{-1}
    Rat s(sign(idx[0]) * sign(idx[1]));
    pushed.add(idx, moved * s);
  }
  return pushed == -pi;
}

std::size_t associated_leaf_count(const AssociatedLeafSpec& spec) {
  if (spec.base_count == 0 || spec.fiber_count == 0)
    throw mode_error("leaf counts must be positive");
  if (spec.hypothesis_tag != "principal-fibers-zero" &&
      spec.hypothesis_tag != "isotropic-orbits")
    throw mode_error("associated_leaf_count needs a hypothesis tag");
  return spec.base_count * spec.fiber_count;
}

}  // namespace pk
