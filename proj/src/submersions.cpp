#include "pk/submersions.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pk {

namespace {

template <typename F>
Mat<F> kernel_columns(const Mat<F>& m, unsigned width, const F& one) {
  F zero = one;
  zero = zero - one;
  if (m.empty()) {
    Mat<F> id(width, std::vector<F>(width, zero));
    for (unsigned i = 0; i < width; ++i) id[i][i] = one;
    return id;
  }
  auto ker = kernel(m, one);
  Mat<F> cols(width, std::vector<F>(ker.size(), zero));
  for (std::size_t c = 0; c < ker.size(); ++c)
    for (unsigned i = 0; i < width; ++i) cols[i][c] = ker[c][i];
  return column_space(cols);
}

template <typename F>
Mat<F> sharp_image(const Mat<F>& P, const Mat<F>& N, const F& one) {
  F zero = one;
  zero = zero - one;
  Mat<F> r(P.size(), std::vector<F>(mat_cols(N), zero));
  for (std::size_t b = 0; b < P.size(); ++b)
    for (std::size_t a = 0; a < P.size(); ++a)
      for (std::size_t j = 0; j < mat_cols(N); ++j) r[b][j] = r[b][j] + P[a][b] * N[a][j];
  return r;
}

// symbolic component matrix of pi on its own chart
Mat<RatFunc> component_matrix(const Multivector& pi) {
  unsigned n = pi.chart()->dim();
  auto comp = bivector_components(pi);
  Mat<RatFunc> P(n, std::vector<RatFunc>(n, RatFunc(n)));
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) P[a][b] = comp[a][b].rat();
  return P;
}

// columns of Gr(pi) ∩ (V ⊕ T*Σ) + V° inside V ⊕ V* (2n rows)
template <typename F>
Mat<F> vertical_family(const Mat<F>& P, const Mat<F>& V, const F& one) {
  F zero = one;
  zero = zero - one;
  unsigned n = static_cast<unsigned>(P.size());
  std::size_t v = mat_cols(V);
  Mat<F> G(2 * n, std::vector<F>(n, zero));
  for (unsigned a = 0; a < n; ++a) {
    for (unsigned b = 0; b < n; ++b) G[b][a] = P[a][b];  // pi^sharp(dx_a)
    G[n + a][a] = one;
  }
  Mat<F> W(2 * n, std::vector<F>(v + n, zero));
  for (unsigned i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < v; ++c) W[i][c] = V[i][c];
    W[n + i][v + i] = one;
  }
  Mat<F> L = subspace_intersection(G, W, one);
  Mat<F> Vt(v, std::vector<F>(n, zero));
  for (std::size_t c = 0; c < v; ++c)
    for (unsigned i = 0; i < n; ++i) Vt[c][i] = V[i][c];
  Mat<F> ann = kernel_columns(Vt, n, one);
  Mat<F> annlift(2 * n, std::vector<F>(mat_cols(ann), zero));
  for (unsigned i = 0; i < n; ++i)
    for (std::size_t c = 0; c < mat_cols(ann); ++c) annlift[n + i][c] = ann[i][c];
  return subspace_sum(L, annlift);
}

// read off the bivector matrix of a Lagrangian graph given by 2n x n columns
template <typename F>
std::optional<Mat<F>> graph_matrix(const Mat<F>& L, unsigned n, const F& one) {
  F zero = one;
  zero = zero - one;
  if (mat_cols(L) != n) return std::nullopt;
  Mat<F> cov(n, std::vector<F>(n, zero));
  for (unsigned i = 0; i < n; ++i)
    for (unsigned c = 0; c < n; ++c) cov[i][c] = L[n + i][c];
  Mat<F> B(n, std::vector<F>(n, zero));
  for (unsigned a = 0; a < n; ++a) {
    std::vector<F> rhs(n, zero);
    rhs[a] = one;
    auto c = solve(cov, rhs, one);
    if (!c) return std::nullopt;
    for (unsigned b = 0; b < n; ++b) {
      F acc = zero;
      for (unsigned k = 0; k < n; ++k) acc = acc + L[b][k] * (*c)[k];
      B[a][b] = acc;  // component pi^{ab}
    }
  }
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) {
      F s = B[a][b] + B[b][a];
      if (!(s == zero)) return std::nullopt;
    }
  return B;
}

std::size_t intersection_dim(const Mat<Rat>& A, const Mat<Rat>& B) {
  return mat_cols(subspace_intersection(A, B, Rat(1)));
}

}  // namespace

Mat<RatFunc> vertical_frame(const SubmersionSpec& spec) {
  unsigned n = spec.p.source->dim(), k = spec.p.target->dim();
  RatFunc one = RatFunc::constant(n, 1);
  auto J = spec.p.jacobian();
  Mat<RatFunc> dp(k, std::vector<RatFunc>(n, RatFunc(n)));
  for (unsigned a = 0; a < k; ++a)
    for (unsigned i = 0; i < n; ++i) dp[a][i] = J[a][i].rat();
  if (rank(dp) != k) throw mode_error("map is generically not a submersion");
  return kernel_columns(dp, n, one);
}

Mat<Rat> vertical_frame_at(const SubmersionSpec& spec, const Point& at) {
  Mat<Rat> J = spec.p.jacobian_at(at);
  unsigned k = spec.p.target->dim();
  if (rank(J) != k) throw eval_error("submersion loses rank at a sample point");
  return kernel_columns(J, spec.p.source->dim(), Rat(1));
}

FiberReport fiber_report(const SubmersionSpec& spec, const std::vector<Point>& grid) {
  unsigned n = spec.p.source->dim();
  FiberReport rep;
  rep.poisson_map = map_related(spec.p, spec.pi_total, spec.pi_base).holds();

  struct Group {
    Point first;
    int rank;
  };
  std::map<std::vector<Rat>, Group> fibers;
  std::optional<std::pair<Point, Point>> jump;
  bool pd_all = true;
  Point pd_witness;

  for (const auto& pt : grid) {
    Mat<Rat> V = vertical_frame_at(spec, pt);
    Mat<Rat> Vt = mat_transpose(V);
    Mat<Rat> ann = kernel_columns(Vt, n, Rat(1));
    Mat<Rat> P = bivector_matrix_at(spec.pi_total, pt);
    Mat<Rat> E = column_space(sharp_image(P, ann, Rat(1)));

    FiberPoint fp;
    fp.at = pt;
    fp.fiber_rank = static_cast<int>(mat_cols(E));
    fp.fiber_pd = intersection_dim(E, V) == 0;
    fp.coupling = fp.fiber_pd && mat_cols(V) + mat_cols(E) == n;
    auto B = pointwise_induce(P, V, ann);
    if (!B) {
      fp.fiber_kind = "none";
    } else {
      std::size_t r = rank(*B);
      fp.fiber_kind = r == 0 ? "trivial" : (r == mat_cols(V) ? "symplectic" : "degenerate");
    }
    if (!fp.fiber_pd && pd_all) {
      pd_all = false;
      pd_witness = pt;
    }
    auto img = spec.p.apply(pt).coords;
    auto it = fibers.find(img);
    if (it == fibers.end()) {
      fibers.emplace(img, Group{pt, fp.fiber_rank});
    } else if (it->second.rank != fp.fiber_rank && !jump) {
      jump = {it->second.first, pt};
    }
    rep.points.push_back(std::move(fp));
  }

  if (!rep.poisson_map) {
    rep.coregular = Verdict::NotDetermined;  // hierarchy verdicts need a Poisson map
  } else if (!pd_all) {
    rep.coregular = Verdict::Fails;
    rep.witness = {pd_witness, pd_witness};
  } else if (jump) {
    rep.coregular = Verdict::Fails;
    rep.witness = jump;
  } else {
    rep.coregular = Verdict::Holds;
  }
  return rep;
}

std::optional<Mat<Rat>> vertical_bivector_at(const SubmersionSpec& spec,
                                             const Point& at) {
  unsigned n = spec.p.source->dim();
  Mat<Rat> V = vertical_frame_at(spec, at);
  Mat<Rat> P = bivector_matrix_at(spec.pi_total, at);
  Mat<Rat> L = vertical_family(P, V, Rat(1));
  return graph_matrix(L, n, Rat(1));
}

std::variant<PencilDecomposition, PencilObstruction> pencil_decompose(
    const SubmersionSpec& spec, const std::vector<Point>& grid) {
  if (grid.empty()) throw mode_error("pencil_decompose needs a nonempty grid");
  if (!spec.pi_total.all_exact())
    throw mode_error("pencil_decompose requires EXACT coefficients");
  unsigned n = spec.p.source->dim();

  // generic vertical bivector from the symbolic linear family
  RatFunc one = RatFunc::constant(n, 1);
  Mat<RatFunc> P = component_matrix(spec.pi_total);
  Mat<RatFunc> V = vertical_frame(spec);
  Mat<RatFunc> L = vertical_family(P, V, one);
  auto B = graph_matrix(L, n, one);
  if (!B) {
    PencilObstruction obs;
    obs.witnesses = grid;
    obs.ranks.assign(grid.size(), -1);
    return obs;
  }

  // the family is a bundle only if the generic formula matches every sample
  std::optional<Point> agree;
  int agree_rank = 0;
  PencilObstruction obs;
  for (const auto& pt : grid) {
    auto Bx = vertical_bivector_at(spec, pt);
    bool match = Bx.has_value();
    if (match) {
      for (unsigned a = 0; a < n && match; ++a)
        for (unsigned b = 0; b < n && match; ++b) {
          if (!(*B)[a][b].defined_at(pt.coords)) match = false;
          else if ((*B)[a][b].evaluate(pt.coords) != (*Bx)[a][b]) match = false;
        }
    }
    int r = Bx ? static_cast<int>(rank(*Bx)) : -1;
    if (match && !agree) {
      agree = pt;
      agree_rank = r;
    } else if (!match) {
      obs.witnesses.push_back(pt);
      obs.ranks.push_back(r);
    }
  }
  if (!obs.witnesses.empty()) {
    if (agree) {
      obs.witnesses.insert(obs.witnesses.begin(), *agree);
      obs.ranks.insert(obs.ranks.begin(), agree_rank);
    }
    return obs;
  }

  const ChartPtr& chart = spec.pi_total.chart();
  PencilDecomposition dec;
  dec.pi_v = Multivector(chart, 2);
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = a + 1; b < n; ++b)
      dec.pi_v.add({a, b}, Scalar(chart, (*B)[a][b]));
  dec.pi_h = spec.pi_total - dec.pi_v;

  dec.bracket_vv = schouten(dec.pi_v, dec.pi_v).is_zero();
  dec.bracket_vh = schouten(dec.pi_v, dec.pi_h).is_zero();
  dec.bracket_hh = schouten(dec.pi_h, dec.pi_h).is_zero();

  dec.vertical_ok = true;
  std::size_t vrank = rank(V);
  for (unsigned a = 0; a < n; ++a) {
    Mat<RatFunc> aug = V;
    for (unsigned b = 0; b < n; ++b) aug[b].push_back((*B)[a][b]);
    if (rank(aug) != vrank) dec.vertical_ok = false;
  }

  dec.horizontal_clear = true;
  for (const auto& pt : grid) {
    Mat<Rat> Vp = vertical_frame_at(spec, pt);
    Mat<Rat> PH = bivector_matrix_at(dec.pi_h, pt);
    Mat<Rat> img = column_space(mat_transpose(PH));
    if (intersection_dim(img, Vp) != 0) dec.horizontal_clear = false;
  }
  return dec;
}

CouplingVerdicts coupling_data_verify(const CouplingData& cd,
                                      const SubmersionSpec& spec,
                                      const std::vector<Point>& grid) {
  unsigned n = spec.p.source->dim();
  for (const auto& pt : grid) {
    Mat<Rat> V = vertical_frame_at(spec, pt);
    Mat<Rat> full = V;
    for (const auto& h : cd.horizontal) {
      for (unsigned i = 0; i < n; ++i) {
        Scalar c = h.coefficient({i});
        full[i].push_back(c.evaluate(pt));
      }
    }
    if (rank(full) != n)
      throw mode_error("coupling data is not complementary to V at a sample");
  }

  CouplingVerdicts v;
  v.pi_poisson = schouten(cd.pi, cd.pi).is_zero();

  v.lifts_preserve = true;
  for (const auto& h : cd.horizontal)
    if (!lie_derivative(h, cd.pi).is_zero()) v.lifts_preserve = false;

  Form dom = d(cd.omega);
  v.omega_closed_h = true;
  std::size_t m = cd.horizontal.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = b + 1; c < m; ++c) {
        Form r = interior(cd.horizontal[c],
                          interior(cd.horizontal[b], interior(cd.horizontal[a], dom)));
        if (!r.is_zero()) v.omega_closed_h = false;
      }

  v.curvature_matches = true;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      // coordinate fields commute on the base: curv = -[h(u), h(v)]
      Multivector curv = -schouten(cd.horizontal[a], cd.horizontal[b]);
      Form theta = interior(cd.horizontal[a], interior(cd.horizontal[b], dom));
      if (!(curv == sharp(cd.pi, theta))) v.curvature_matches = false;
    }
  return v;
}

std::vector<Multivector> horizontal_generators(const SubmersionSpec& spec) {
  const ChartPtr& chart = spec.p.source;
  unsigned n = chart->dim(), k = spec.p.target->dim();
  std::vector<Multivector> gens;
  for (unsigned a = 0; a < k; ++a) {
    Form pull(chart, 1);
    for (unsigned i = 0; i < n; ++i)
      pull.add({i}, spec.p.components[a].differentiate(i));
    gens.push_back(sharp(spec.pi_total, pull));
  }
  return gens;
}

bool horizontal_closure(const SubmersionSpec& spec) {
  auto gens = horizontal_generators(spec);
  unsigned k = spec.p.target->dim();
  for (unsigned a = 0; a < k; ++a)
    for (unsigned b = a + 1; b < k; ++b) {
      Scalar fab = spec.pi_base.coefficient({a, b});
      Multivector rhs =
          hamiltonian_field(spec.pi_total, spec.p.pullback_scalar(fab));
      if (!(schouten(gens[a], gens[b]) == rhs)) return false;
    }
  return true;
}

Trajectory ham_flow(const Multivector& pi, const Scalar& f, const Point& x0,
                    double T, double h) {
  if (T <= 0 || h <= 0) throw mode_error("ham_flow needs positive T and h");
  Multivector H = hamiltonian_field(pi, f);
  unsigned n = pi.chart()->dim();
  std::vector<Scalar> comps;
  for (unsigned i = 0; i < n; ++i) comps.push_back(H.coefficient({i}));

  auto rhs = [&](const std::vector<double>& x) {
    std::vector<double> v(n);
    for (unsigned i = 0; i < n; ++i) v[i] = comps[i].evaluate_double(x);
    return v;
  };
  auto finite = [](const std::vector<double>& x) {
    for (double c : x)
      if (!std::isfinite(c)) return false;
    return true;
  };
  auto integrate = [&](double step, Trajectory* record) -> std::vector<double> {
    std::vector<double> x = x0.to_double();
    std::size_t steps = static_cast<std::size_t>(std::llround(T / step));
    if (record) {
      record->times.push_back(0.0);
      record->states.push_back(x);
    }
    for (std::size_t s = 0; s < steps; ++s) {
      std::vector<double> k1, k2, k3, k4, tmp(n);
      try {
        k1 = rhs(x);
        for (unsigned i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k1[i];
        k2 = rhs(tmp);
        for (unsigned i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k2[i];
        k3 = rhs(tmp);
        for (unsigned i = 0; i < n; ++i) tmp[i] = x[i] + step * k3[i];
        k4 = rhs(tmp);
      } catch (const eval_error&) {
        return x;  // singular evaluation: abort with partial trajectory
      }
      for (unsigned i = 0; i < n; ++i)
        x[i] += step / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      if (!finite(x)) return x;
      if (record) {
        record->times.push_back((s + 1) * step);
        record->states.push_back(x);
      }
    }
    if (record) record->completed = true;
    return x;
  };

  Trajectory traj;
  std::vector<double> end = integrate(h, &traj);
  std::vector<double> end2 = integrate(h / 2, nullptr);
  for (unsigned i = 0; i < n; ++i)
    traj.richardson_error = std::max(traj.richardson_error, std::abs(end[i] - end2[i]));
  double f0 = f.evaluate_double(x0.to_double());
  for (const auto& x : traj.states)
    traj.conservation_error =
        std::max(traj.conservation_error, std::abs(f.evaluate_double(x) - f0));
  return traj;
}

}  // namespace pk
