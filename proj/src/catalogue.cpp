#include "pk/catalogue.hpp"

#include "pk/lie.hpp"
#include "pk/toric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace pk {
namespace {

Scalar S(const ChartPtr& c, const std::string& t) { return parse_scalar(t, c); }

struct Check {
  bool ok = true;
  std::string fail;
  void operator()(bool c, const std::string& what) {
    if (!c && ok) {
      ok = false;
      fail = what;
    }
  }
};

FixtureResult result(const Check& ck, const std::string& detail) {
  if (ck.ok) return {true, detail};
  return {false, "failed: " + ck.fail};
}

// --- shared example data ---

// R^4 with d1^d2 + x3 d3^d4
Multivector ambient_mixed() {
  auto M = make_chart({"x1", "x2", "x3", "x4"});
  Multivector pi(M, 2);
  pi.add({0, 1}, S(M, "1"));
  pi.add({2, 3}, S(M, "x3"));
  return pi;
}

Multivector so3_dual() {
  auto M = make_chart({"x1", "x2", "x3"});
  Multivector pi(M, 2);
  pi.add({1, 2}, S(M, "x1"));
  pi.add({2, 0}, S(M, "x2"));
  pi.add({0, 1}, S(M, "x3"));
  return pi;
}

Multivector disk_product() {
  auto M = make_chart({"x1", "x2", "x3", "x4"});
  Multivector pi(M, 2);
  pi.add({0, 1}, S(M, "x1^2 + x2^2 + x1"));
  pi.add({2, 3}, S(M, "x3^2 + x4^2 - x3"));
  return pi;
}

Multivector clean_not_split_ambient() {
  auto M = make_chart({"x1", "x2", "x3", "x4"});
  Multivector pi(M, 2);
  pi.add({0, 1}, S(M, "x1^2"));
  pi.add({2, 3}, S(M, "x3"));
  return pi;
}

Multivector symplectomorphism_product() {
  auto M = make_chart({"x1", "x2", "y1", "y2"});
  Multivector pi(M, 2);
  pi.add({0, 1}, S(M, "1"));
  pi.add({2, 3}, S(M, "-1"));
  return pi;
}

// Sigma = R^3 with dx^dy + (1+z^2) dz^dy over (R^2, dx^dy)
SubmersionSpec leaves_submersion() {
  auto sigma = make_chart({"x", "y", "z"});
  auto base = make_chart({"x", "y"});
  Multivector piS(sigma, 2);
  piS.add({0, 1}, S(sigma, "1"));
  piS.add({2, 1}, S(sigma, "1 + z^2"));
  Multivector piM(base, 2);
  piM.add({0, 1}, S(base, "1"));
  return {SmoothMap(sigma, base, {S(sigma, "x"), S(sigma, "y")}), piS, piM};
}

// Sigma = C^2 with |z0|^2 (E0+E1)^(V0+V1) over the first factor
SubmersionSpec pencil_submersion() {
  auto c4 = make_chart({"a0", "b0", "a1", "b1"});
  auto c2 = make_chart({"a0", "b0"});
  Multivector piS = wedge(euler_field(c4, 0, 1) + euler_field(c4, 2, 3),
                          rotation_field(c4, 0, 1) + rotation_field(c4, 2, 3)) *
                    S(c4, "a0^2 + b0^2");
  Multivector piM = wedge(euler_field(c2, 0, 1), rotation_field(c2, 0, 1)) *
                    S(c2, "a0^2 + b0^2");
  return {SmoothMap(c4, c2, {S(c4, "a0"), S(c4, "b0")}), piS, piM};
}

// Sigma = C^2 \ 0 with (1/4)(E0-E1)^(V0-V1) over CP^1 in the affine chart
SubmersionSpec disc_submersion() {
  auto c4 = make_chart({"a0", "b0", "a1", "b1"});
  auto c2 = make_chart({"u", "v"});
  Multivector piS = wedge(euler_field(c4, 0, 1) - euler_field(c4, 2, 3),
                          rotation_field(c4, 0, 1) - rotation_field(c4, 2, 3)) *
                    S(c4, "1/4");
  Multivector piM = wedge(euler_field(c2, 0, 1), rotation_field(c2, 0, 1));
  SmoothMap p(c4, c2,
              {S(c4, "(a0*a1 + b0*b1) / (a0^2 + b0^2)"),
               S(c4, "(a0*b1 - b0*a1) / (a0^2 + b0^2)")});
  return {p, piS, piM};
}

SubmersionSpec vertical_submersion() {
  auto sigma = make_chart({"x", "y", "t"});
  auto base = make_chart({"t"});
  Multivector piS(sigma, 2);
  piS.add({0, 1}, S(sigma, "t"));
  Multivector piM(base, 2);
  return {SmoothMap(sigma, base, {S(sigma, "t")}), piS, piM};
}

SubmersionSpec cotangent_submersion() {
  auto sigma = make_chart({"q", "p"});
  auto base = make_chart({"q"});
  Multivector piS(sigma, 2);
  piS.add({0, 1}, S(sigma, "1"));
  Multivector piM(base, 2);
  return {SmoothMap(sigma, base, {S(sigma, "q")}), piS, piM};
}

DelzantPolytope interval_polytope() { return {1, {{1}, {-1}}, {Rat(0), Rat(-1)}}; }

DelzantPolytope triangle_polytope() {
  return {2, {{1, 0}, {0, 1}, {-1, -1}}, {Rat(0), Rat(0), Rat(-1)}};
}

DelzantPolytope square_polytope() {
  return {2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {Rat(0), Rat(-1), Rat(0), Rat(-1)}};
}

Mat<Rat> standard_J2() { return {{Rat(0), Rat(-1)}, {Rat(1), Rat(0)}}; }

Mat<Rat> bivector2(const Rat& c) { return {{Rat(0), c}, {-c, Rat(0)}}; }

std::vector<CMat> unitary_samples() {
  auto I = cmat_identity(2);
  CMat diag = {{CRat(Rat(3, 5), Rat(4, 5)), CRat()},
               {CRat(), CRat(Rat(3, 5), Rat(-4, 5))}};
  CMat quat = {{CRat(Rat(1, 2), Rat(1, 2)), CRat(Rat(1, 2), Rat(1, 2))},
               {CRat(Rat(-1, 2), Rat(1, 2)), CRat(Rat(1, 2), Rat(-1, 2))}};
  return {I, diag, quat};
}

// --- fixture bodies ---

// Numeric check that the pulled-back Dirac family of
// i(x,y) = (x, y, f^2, f^2), f = exp(-1/x^2)(y - sin(1/x)),
// is the graph of dx^dy at sampled points with x != 0: for each basis
// covector alpha on X we solve J^T eta = alpha, P^T eta = J v and compare v
// with the expected sharp matrix.
FixtureResult run_intersections_numeric() {
  Check ck;
  auto X = make_chart({"x", "y"});
  Scalar f = S(X, "exp(-1/x^2) * (y - sin(1/x))");
  Scalar g = f * f;
  std::vector<Scalar> comps{Scalar::variable(X, 0), Scalar::variable(X, 1), g, g};
  std::vector<Scalar> dgs{g.differentiate(0), g.differentiate(1)};

  // expected sharp matrix of dx^dy on X, evaluated exactly
  Multivector expected(X, 2);
  expected.add({0, 1}, S(X, "1"));
  Mat<Rat> Mx = sharp_matrix_at(expected, Point{X, {Rat(0), Rat(0)}});

  const double xs[] = {0.3, -0.45, 0.8, 1.2, -1.7};
  const double ys[] = {-1.0, 0.25, 2.0};
  for (double x : xs)
    for (double y : ys) {
      std::vector<double> p{x, y};
      double gv = g.evaluate_double(p);
      Eigen::MatrixXd J(4, 2);
      J.setZero();
      J(0, 0) = 1;
      J(1, 1) = 1;
      for (int i = 0; i < 2; ++i) J(2, i) = J(3, i) = dgs[i].evaluate_double(p);
      Eigen::MatrixXd P(4, 4);  // ambient components pi^{ab} at i(p)
      P.setZero();
      P(0, 1) = 1;
      P(1, 0) = -1;
      P(2, 3) = gv;
      P(3, 2) = -gv;
      // unknowns (eta, v): J^T eta = alpha, P^T eta - J v = 0
      Eigen::MatrixXd A(6, 6);
      A.setZero();
      A.block<2, 4>(0, 0) = J.transpose();
      A.block<4, 4>(2, 0) = P.transpose();
      A.block<4, 2>(2, 4) = -J;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      ck(lu.isInvertible(), "pullback family is not a graph at a sample");
      if (!lu.isInvertible()) break;
      for (int j = 0; j < 2; ++j) {
        Eigen::VectorXd rhs(6);
        rhs.setZero();
        rhs(j) = 1;
        Eigen::VectorXd sol = lu.solve(rhs);
        for (int b = 0; b < 2; ++b) {
          double want = static_cast<double>(Mx[b][j]);
          ck(std::abs(sol(4 + b) - want) < 1e-9,
             "pulled-back bivector differs from dx^dy");
        }
      }
    }
  return result(ck, "pullback family = graph(dx^dy) at 15 numeric samples");
}

FixtureResult run_no_clean_intersection() {
  Check ck;
  Multivector pi = ambient_mixed();
  auto X = make_chart({"x", "y"});
  SubmanifoldSpec spec{
      SmoothMap(X, pi.chart(), {S(X, "x"), S(X, "y"), S(X, "x"), S(X, "x*y")})};
  auto sym = induced_bivector_symbolic(spec, pi);
  ck(sym.has_value(), "no symbolic induced bivector");
  if (sym) {
    Multivector expect(X, 2);
    expect.add({0, 1}, S(X, "1/2"));
    ck(*sym == expect, "induced bivector is not (1/2) dx^dy");
  }
  std::vector<Point> off, on;
  for (const auto& p : rational_grid(X))
    (p.coords[0] == 0 ? on : off).push_back(p);
  auto rep = classify(spec, pi, off);
  ck(rep.coregular == Verdict::Holds, "not coregular away from x = 0");
  for (const auto& p : on) {
    auto fr = frames(spec, p);
    auto P = bivector_matrix_at(pi, spec.embedding.apply(p));
    ck(!pointwise_induce(P, fr.TX, fr.NstarX).has_value(),
       "pointwise induction unexpectedly succeeds on x = 0");
  }
  return result(ck, "induced (1/2) dx^dy; coregular off x = 0");
}

FixtureResult run_disk_diagonal() {
  Check ck;
  Multivector pi = disk_product();
  auto X = make_chart({"t", "s"});
  SubmanifoldSpec spec{
      SmoothMap(X, pi.chart(), {S(X, "t"), S(X, "s"), S(X, "t"), S(X, "s")})};
  auto sym = induced_bivector_symbolic(spec, pi);
  ck(sym.has_value(), "no symbolic induced bivector");
  if (sym) {
    Multivector expect(X, 2);
    expect.add({0, 1}, S(X, "((t^2 + s^2)^2 - t^2) / (2*t^2 + 2*s^2)"));
    ck(*sym == expect, "induced coefficient mismatch");
    ck(sym->coefficient({0, 1}).evaluate(Point{X, {Rat(1), Rat(1)}}) == Rat(3, 4),
       "coefficient at (1,1) is not 3/4");
  }
  auto rep = classify(spec, pi, rational_grid(X));
  ck(rep.coregular == Verdict::Fails, "coregular verdict should fail");
  ck(rep.pole_witnesses.size() == 1 &&
         rep.pole_witnesses[0].coords == std::vector<Rat>{Rat(0), Rat(0)},
     "missing pole witness at the origin");
  return result(ck, "induced ((t^2+s^2)^2 - t^2)/(2t^2+2s^2); pole at the origin");
}

FixtureResult run_clean_not_split() {
  Check ck;
  Multivector pi = clean_not_split_ambient();
  auto X = make_chart({"t", "s"});
  SubmanifoldSpec spec{
      SmoothMap(X, pi.chart(), {S(X, "t^2"), S(X, "0"), S(X, "t"), S(X, "s")})};
  auto sym = induced_bivector_symbolic(spec, pi);
  ck(sym.has_value(), "no symbolic induced bivector");
  if (sym) {
    Multivector expect(X, 2);
    expect.add({0, 1}, S(X, "t"));
    ck(*sym == expect, "induced bivector is not t dt^ds");
  }
  auto rep = classify(spec, pi, rational_grid(X));
  for (bool pd : rep.pointwise_pd) ck(pd, "pointwise induction fails");
  ck(rep.coregular == Verdict::Fails, "coregular verdict should fail");
  ck(rep.coregular_witness && rep.coregular_witness->coords[0] == 0,
     "missing rank-jump witness on t = 0");
  return result(ck, "induced t dt^ds; rank jumps on t = 0");
}

FixtureResult run_so3_axis() {
  Check ck;
  Multivector pi = so3_dual();
  auto X = make_chart({"t"});
  SubmanifoldSpec spec{
      SmoothMap(X, pi.chart(), {S(X, "t"), S(X, "0"), S(X, "0")})};
  auto rep = classify(spec, pi, rational_grid(X));
  for (bool pd : rep.pointwise_pd) ck(pd, "pointwise induction fails");
  ck(rep.coregular == Verdict::Fails, "coregular verdict should fail");
  ck(rep.coregular_witness && rep.coregular_witness->coords[0] == 0,
     "witness is not t = 0");
  ck(rep.induced && rep.induced->is_zero(), "induced bivector should vanish");
  return result(ck, "pointwise PD everywhere; not coregular, witness t = 0");
}

FixtureResult run_point_coregular() {
  Check ck;
  auto M = make_chart({"x1", "x2"});
  Multivector pi(M, 2);
  pi.add({0, 1}, S(M, "1"));
  auto X = make_chart({});
  SubmanifoldSpec spec{
      SmoothMap(X, M, {Scalar::constant(X, 1), Scalar::constant(X, 0)})};
  auto rep = classify(spec, pi, {Point{X, {}}});
  ck(rep.coregular == Verdict::Holds, "a point should be coregular");
  ck(rep.split_certificate == "coregular", "missing split certificate");
  return result(ck, "a point of the symplectic plane is coregular");
}

FixtureResult run_symplectomorphism_graph() {
  Check ck;
  Multivector pi = symplectomorphism_product();
  auto X = make_chart({"u", "v"});
  SubmanifoldSpec spec{
      SmoothMap(X, pi.chart(), {S(X, "u"), S(X, "v"), S(X, "u"), S(X, "v")})};
  auto rep = classify(spec, pi, rational_grid(X, 3));
  ck(rep.coisotropic_all, "graph should be coisotropic");
  for (bool pd : rep.pointwise_pd) ck(!pd, "graph should not be Poisson-Dirac");
  ck(!induced_bivector_symbolic(spec, pi).has_value(),
     "symbolic induction should be inconsistent");
  return result(ck, "coisotropic graph, not Poisson-Dirac");
}

FixtureResult run_cotangent_projection() {
  Check ck;
  auto spec = cotangent_submersion();
  auto rep = fiber_report(spec, rational_grid(spec.p.source));
  ck(rep.poisson_map, "projection should be a Poisson map");
  ck(rep.coregular == Verdict::Fails, "fibres should not be coregular");
  for (const auto& fp : rep.points) {
    ck(!fp.fiber_pd, "fibres should not be Poisson-Dirac");
    ck(fp.fiber_kind == "none", "fiber kind should be none");
  }
  return result(ck, "Poisson map; no fibre is Poisson-Dirac");
}

FixtureResult run_couplings_over_leaves() {
  Check ck;
  auto spec = leaves_submersion();
  auto rep = fiber_report(spec, rational_grid(spec.p.source, 3));
  ck(rep.poisson_map, "not a Poisson map");
  ck(rep.coregular == Verdict::Holds, "not coregular");
  for (const auto& fp : rep.points) {
    ck(fp.fiber_pd, "fibre not Poisson-Dirac");
    ck(fp.coupling, "fibre not a Poisson transversal");
    ck(fp.fiber_kind == "trivial", "fiber kind should be trivial");
  }
  return result(ck, "coregular coupling; one-dimensional trivial fibres");
}

FixtureResult run_disc_fibres() {
  Check ck;
  auto spec = disc_submersion();
  auto X = spec.p.source;
  std::vector<Point> grid;
  for (const Rat& s : {Rat(1), Rat(2)}) {
    grid.push_back(Point{X, {s, 0, 0, 0}});
    grid.push_back(Point{X, {s, 0, s, 0}});
    grid.push_back(Point{X, {s, 0, 0, s}});
    grid.push_back(Point{X, {2 * s, s, s, -s}});
  }
  auto rep = fiber_report(spec, grid);
  ck(rep.poisson_map, "not a Poisson map");
  ck(rep.coregular == Verdict::Holds, "not coregular");
  for (const auto& fp : rep.points) {
    ck(fp.fiber_pd, "fibre not Poisson-Dirac");
    bool axis = fp.at.coords[2] == 0 && fp.at.coords[3] == 0;
    ck(fp.fiber_rank == (axis ? 0 : 2), "fiber rank pattern mismatch");
    ck(fp.fiber_kind == (axis ? "symplectic" : "trivial"),
       "fiber kind pattern mismatch");
  }
  auto res = pencil_decompose(spec, grid);
  ck(std::holds_alternative<PencilObstruction>(res),
     "pencil decomposition should be obstructed");
  if (auto* obs = std::get_if<PencilObstruction>(&res)) {
    bool on_axis = false, off_axis = false;
    for (const auto& w : obs->witnesses) {
      bool axis = w.coords[2] == 0 && w.coords[3] == 0;
      (axis ? on_axis : off_axis) = true;
    }
    ck(on_axis && off_axis, "rank-jump witnesses should sit on and off the axis");
    ck(obs->ranks.size() >= 2, "obstruction should record at least two ranks");
  }
  return result(ck, "coregular; symplectic axis fibre vs trivial fibres; no pencil");
}

FixtureResult run_orthogonal_pencil() {
  Check ck;
  auto spec = pencil_submersion();
  ck(is_poisson(spec.pi_total).holds(), "total bivector not Poisson");
  auto res = pencil_decompose(spec, rational_grid(spec.p.source, 3));
  ck(std::holds_alternative<PencilDecomposition>(res), "no pencil decomposition");
  if (auto* dec = std::get_if<PencilDecomposition>(&res)) {
    ck(dec->pi_v.is_zero(), "vertical part should vanish");
    ck(dec->pi_h == spec.pi_total, "horizontal part should be the whole bivector");
    ck(schouten(dec->pi_v, dec->pi_v).is_zero(), "[pi_v, pi_v] != 0");
    ck(schouten(dec->pi_v, dec->pi_h).is_zero(), "[pi_v, pi_h] != 0");
    ck(schouten(dec->pi_h, dec->pi_h).is_zero(), "[pi_h, pi_h] != 0");
    ck(dec->ok(), "decomposition certificates incomplete");
  }
  return result(ck, "orthogonal pencil with pi_v = 0; Schouten certificates zero");
}

FixtureResult run_vertical_pencil() {
  Check ck;
  auto spec = vertical_submersion();
  auto res = pencil_decompose(spec, rational_grid(spec.p.source, 3));
  ck(std::holds_alternative<PencilDecomposition>(res), "no pencil decomposition");
  if (auto* dec = std::get_if<PencilDecomposition>(&res)) {
    ck(dec->pi_v == spec.pi_total, "vertical part should be the whole bivector");
    ck(dec->pi_h.is_zero(), "horizontal part should vanish");
    ck(dec->ok(), "decomposition certificates incomplete");
  }
  for (const auto& g : horizontal_generators(spec)) ck(g.is_zero(), "nonzero horizontal generator");
  return result(ck, "vertical pencil pi_v = pi; horizontal generators vanish");
}

FixtureResult run_flow_leaf() {
  Check ck;
  auto spec = leaves_submersion();
  auto sigma = spec.p.source;
  auto traj = ham_flow(spec.pi_total, S(sigma, "y"), Point{sigma, {Rat(0), Rat(0), Rat(0)}},
                       1.3, 1e-3);
  ck(traj.completed, "integration did not complete");
  double max_x = 0.0, max_dev = 0.0;
  for (const auto& st : traj.states) {
    max_x = std::max(max_x, std::abs(st[0]));
    max_dev = std::max(max_dev, std::abs(st[0] - std::atan(st[2])));
  }
  ck(max_dev < 1e-6, "trajectory leaves the graph x = arctan(z)");
  ck(max_x < std::acos(-1.0) / 2, "x coordinate escapes (-pi/2, pi/2)");
  ck(traj.conservation_error < 1e-9, "Hamiltonian drifts along the flow");
  ck(traj.richardson_error < 1e-6, "step-halving cross-check failed");
  return result(ck, "RK4 flow stays on x = arctan(z) within 1e-6");
}

// two affine charts of the same structure glued by inversion
FixtureResult run_cp1_charts() {
  Check ck;
  auto c0 = make_chart({"u", "v"});
  auto c1 = make_chart({"u", "v"});
  Multivector pi0(c0, 2);
  pi0.add({0, 1}, S(c0, "u^2 + v^2"));
  Multivector pi1(c1, 2);
  pi1.add({0, 1}, S(c1, "u^2 + v^2"));
  ck(is_poisson(pi0).holds(), "chart bivector not Poisson");
  SmoothMap inv(c0, c1,
                {S(c0, "u / (u^2 + v^2)"), S(c0, "-v / (u^2 + v^2)")});
  ck(map_related(inv, pi0, pi1).holds(), "transition map not Poisson");
  return result(ck, "chart form (u^2+v^2) du^dv glued by z -> 1/z");
}

FixtureResult run_holomorphic_actions() {
  Check ck;
  auto c = make_chart({"x", "y"});
  // translations: rho(1) = d/dx, rho(i) = d/dy
  auto trans = induced_from_action(
      bivector2(Rat(1)),
      {basis_multivector(c, {0}), basis_multivector(c, {1})});
  Multivector flat(c, 2);
  flat.add({0, 1}, S(c, "1"));
  ck(trans.pi == flat, "translation action should induce dx^dy");
  ck(trans.generators_commute && trans.jacobi.holds(), "translation certificates");
  // w . z = e^w z: rho(1) = E, rho(i) = V
  auto exp_act = induced_from_action(
      bivector2(Rat(1)), {euler_field(c, 0, 1), rotation_field(c, 0, 1)});
  Multivector scaled(c, 2);
  scaled.add({0, 1}, S(c, "x^2 + y^2"));
  ck(exp_act.pi == scaled, "exponential action should induce (x^2+y^2) dx^dy");
  ck(exp_act.generators_commute && exp_act.jacobi.holds(), "exponential certificates");
  return result(ck, "induced products dx^dy and (x^2+y^2) dx^dy");
}

FixtureResult run_toric_counts(const DelzantPolytope& dp, std::size_t want,
                               const std::vector<Int>& kernel_vec) {
  Check ck;
  ck(leaf_count_toric(dp) == want, "leaf count mismatch");
  auto kl = kernel_lattice(dp);
  ck(kl.surjective, "weight map should be surjective");
  if (!kernel_vec.empty()) {
    ck(kl.basis.size() == 1, "kernel lattice should have rank one");
    if (kl.basis.size() == 1)
      ck(kl.basis[0] == kernel_vec || [&] {
           auto neg = kernel_vec;
           for (auto& x : neg) x = -x;
           return kl.basis[0] == neg;
         }(),
         "kernel lattice basis mismatch");
  }
  ck(is_delzant(dp).delzant, "polytope should be Delzant");
  std::ostringstream os;
  os << want << " symplectic leaves; Delzant";
  return result(ck, os.str());
}

FixtureResult run_toric_det2() {
  Check ck;
  DelzantPolytope bad{2, {{1, 0}, {0, 1}, {-2, -1}}, {Rat(0), Rat(0), Rat(-2)}};
  auto chk = is_delzant(bad);
  ck(!chk.delzant, "determinant-2 triangle must be rejected");
  ck(chk.failing_vertex.has_value(), "missing failing vertex");
  if (chk.failing_vertex)
    ck(*chk.failing_vertex == std::vector<Rat>{Rat(1), Rat(0)},
       "failing vertex should be (1, 0)");
  return result(ck, "det-2 triangle rejected at vertex (1, 0)");
}

FixtureResult run_toric_git_strata() {
  Check ck;
  auto dp = triangle_polytope();
  // nondegenerate positive bivector on C^3: dx_i ^ dy_i on every factor
  Mat<Rat> pos(6, std::vector<Rat>(6, Rat(0)));
  for (unsigned i = 0; i < 3; ++i) {
    pos[2 * i][2 * i + 1] = Rat(1);
    pos[2 * i + 1][2 * i] = Rat(-1);
  }
  auto chart = make_chart({"x1", "y1", "x2", "y2", "x3", "y3"});
  for (const auto& I : faces(dp)) {
    std::vector<Rat> coords(6, Rat(0));
    for (unsigned i = 0; i < 3; ++i) {
      bool zero = std::find(I.begin(), I.end(), i) != I.end();
      coords[2 * i] = zero ? Rat(0) : Rat(1 + static_cast<int>(i));
    }
    ck(git_coregular_sample(dp, pos, Point{chart, coords}),
       "orbit sample fails the coregular test");
  }
  // conjugation flips the rotation generators, so the induced structure is
  // totally real exactly when built from E^V pairs
  Multivector mixed = wedge(euler_field(chart, 0, 1), rotation_field(chart, 2, 3)) +
                      wedge(rotation_field(chart, 0, 1), euler_field(chart, 2, 3));
  ck(totally_real(mixed), "E0^V1 + V0^E1 should be totally real");
  ck(!totally_real(wedge(euler_field(chart, 0, 1), euler_field(chart, 2, 3))),
     "E0^E1 should not be totally real");
  return result(ck, "every stratum sample coregular; totally-real verdicts");
}

FixtureResult run_lie_standard(SeriesType type, const char* name) {
  Check ck;
  auto st = standard_triple(type);
  auto rep = manin_check(st.triple);
  ck(rep.all(), "Manin triple certificate incomplete");
  ck(validate_algebra(st.triple.d).valid(), "double is not a Lie algebra");
  std::ostringstream os;
  os << name << " standard triple passes all Manin checks";
  return result(ck, os.str());
}

FixtureResult run_quotient_torus() {
  Check ck;
  auto st = standard_triple(SeriesType::A1);
  auto rep = quotient_conditions(st, st.t, unitary_samples());
  ck(rep.a, "[k, h] not inside h");
  ck(rep.b, "k-perp not an ideal of h");
  ck(rep.c, "k-perp not a subalgebra");
  ck(rep.d_pd, "Poisson-Dirac sample condition fails");
  ck(rep.d_trivial, "trivial-structure sample condition fails");
  return result(ck, "maximal torus quotient: a, b, c and both sample conditions");
}

FixtureResult run_positivity_plane() {
  Check ck;
  auto J = standard_J2();
  auto plus = positivity(J, bivector2(Rat(1)));
  ck(plus.positive, "+dx^dy should be positive");
  auto minus = positivity(J, bivector2(Rat(-1)));
  ck(!minus.positive, "-dx^dy should not be positive");
  ck(!minus.witness.empty(), "missing negativity witness");
  auto zero = positivity(J, bivector2(Rat(0)));
  ck(zero.positive, "the zero bivector should be positive");
  return result(ck, "positivity verdicts +1 / -1 / 0 on the plane");
}

FixtureResult run_flag_base_counts() {
  Check ck;
  std::size_t flag = weyl_order('A', 1);  // Bruhat cells of the SU(2) flag
  std::size_t cp1 = leaf_count_toric(interval_polytope());
  ck(flag == 2, "SU(2) flag should have two Bruhat cells");
  ck(cp1 == 3, "CP^1 should have three leaves");
  ck(associated_leaf_count({flag, flag, "principal-fibers-zero"}) == 4,
     "flag-fibre bundle should have four leaves");
  ck(associated_leaf_count({flag, cp1, "principal-fibers-zero"}) == 6,
     "toric-fibre bundle should have six leaves");
  return result(ck, "flag-base associated bundles: 4 and 6 leaves");
}

FixtureResult run_toric_base_counts() {
  Check ck;
  std::size_t flag = weyl_order('A', 1);
  std::size_t cp1 = leaf_count_toric(interval_polytope());
  ck(associated_leaf_count({cp1, flag, "isotropic-orbits"}) == 6,
     "flag-fibre bundle should have six leaves");
  ck(associated_leaf_count({cp1, cp1, "isotropic-orbits"}) == 9,
     "toric-fibre bundle should have nine leaves");
  return result(ck, "toric-base associated bundles: 6 and 9 leaves");
}

}  // namespace

std::vector<NamedBivector> catalogue_bivectors() {
  std::vector<NamedBivector> out;
  out.push_back({"ambient-intersections", ambient_mixed()});
  out.push_back({"ambient-no-clean", ambient_mixed()});
  out.push_back({"ambient-disk-product", disk_product()});
  out.push_back({"ambient-clean-not-split", clean_not_split_ambient()});
  out.push_back({"so3-dual", so3_dual()});
  out.push_back({"couplings-over-leaves", leaves_submersion().pi_total});
  out.push_back({"orthogonal-pencil", pencil_submersion().pi_total});
  out.push_back({"disc-fibres", disc_submersion().pi_total});
  {
    auto c = make_chart({"u", "v"});
    Multivector pi(c, 2);
    pi.add({0, 1}, S(c, "u^2 + v^2"));
    out.push_back({"cp1-chart", pi});
  }
  out.push_back({"vertical-pencil", vertical_submersion().pi_total});
  {
    auto c = make_chart({"x", "y"});
    Multivector flat(c, 2);
    flat.add({0, 1}, S(c, "1"));
    out.push_back({"translations-product", flat});
    Multivector scaled(c, 2);
    scaled.add({0, 1}, S(c, "x^2 + y^2"));
    out.push_back({"exponential-product", scaled});
  }
  return out;
}

const std::vector<Fixture>& catalogue() {
  static const std::vector<Fixture> fixtures = {
      {"ex-intersections-numeric",
       "pullback family of a flat embedding equals graph(dx^dy) numerically",
       run_intersections_numeric},
      {"ex-no-clean-intersection",
       "graph (x, y, x, xy): induced (1/2) dx^dy, degenerate on x = 0",
       run_no_clean_intersection},
      {"ex-disk-diagonal",
       "diagonal of the twisted disk product: induced family with origin pole",
       run_disk_diagonal},
      {"ex-clean-not-split",
       "surface (t^2, 0, t, s): induced t dt^ds, not coregular",
       run_clean_not_split},
      {"ex-so3-axis", "coordinate axis in so(3)*: PD everywhere, not coregular",
       run_so3_axis},
      {"ex-point-coregular", "a point of the symplectic plane is coregular",
       run_point_coregular},
      {"ex-symplectomorphism-graph",
       "graph of a symplectomorphism: coisotropic, not Poisson-Dirac",
       run_symplectomorphism_graph},
      {"ex-cotangent-projection",
       "cotangent projection: Poisson map without Poisson-Dirac fibres",
       run_cotangent_projection},
      {"ex-couplings-over-leaves",
       "coupling over the symplectic plane with trivial fibres",
       run_couplings_over_leaves},
      {"ex-disc-fibres",
       "coregular submersion with symplectic axis fibre and trivial generic fibres",
       run_disc_fibres},
      {"ex-orthogonal-pencil", "orthogonal pencil with vanishing vertical part",
       run_orthogonal_pencil},
      {"ex-vertical-pencil", "vertical Poisson structure splits as pi_v = pi",
       run_vertical_pencil},
      {"ex-flow-leaf", "Hamiltonian flow probe along the leaf x = arctan(z)",
       run_flow_leaf},
      {"ex-cp1-charts", "two affine charts glued by inversion", run_cp1_charts},
      {"ex-holomorphic-actions",
       "translation and exponential actions of the complex line",
       run_holomorphic_actions},
      {"ex-toric-interval", "interval: 3 leaves, kernel (1, 1)",
       [] { return run_toric_counts(interval_polytope(), 3, {Int(1), Int(1)}); }},
      {"ex-toric-triangle", "triangle: 7 leaves, kernel (1, 1, 1)",
       [] {
         return run_toric_counts(triangle_polytope(), 7, {Int(1), Int(1), Int(1)});
       }},
      {"ex-toric-square", "square: 9 leaves",
       [] { return run_toric_counts(square_polytope(), 9, {}); }},
      {"ex-toric-det2", "determinant-2 triangle rejected with a named vertex",
       run_toric_det2},
      {"ex-toric-git-strata",
       "every stratum of the triangle passes the coregular orbit test",
       run_toric_git_strata},
      {"ex-lie-a1", "rank-one standard Manin triple",
       [] { return run_lie_standard(SeriesType::A1, "A1"); }},
      {"ex-lie-a2", "rank-two standard Manin triple",
       [] { return run_lie_standard(SeriesType::A2, "A2"); }},
      {"ex-quotient-torus",
       "maximal torus quotient conditions on exact unitary samples",
       run_quotient_torus},
      {"ex-positivity-plane", "positivity of constant bivectors on the plane",
       run_positivity_plane},
      {"ex-flag-base-counts", "associated bundles over the flag base: 4 and 6",
       run_flag_base_counts},
      {"ex-toric-base-counts", "associated bundles over the toric base: 6 and 9",
       run_toric_base_counts},
  };
  return fixtures;
}

const Fixture* find_fixture(const std::string& id) {
  for (const auto& f : catalogue())
    if (f.id == id) return &f;
  return nullptr;
}

// --- DSL ---

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

[[noreturn]] void dsl_fail(std::size_t line, const std::string& msg) {
  std::ostringstream os;
  os << "line " << line << ": " << msg;
  throw parse_error(os.str(), line);
}

std::pair<unsigned, unsigned> parse_pair(std::size_t line, const std::string& tok,
                                         unsigned dim) {
  if (tok.size() < 5 || tok.front() != '[' || tok.back() != ']')
    dsl_fail(line, "expected an index pair like [1,2]");
  auto comma = tok.find(',');
  if (comma == std::string::npos) dsl_fail(line, "expected an index pair like [1,2]");
  long i = 0, j = 0;
  try {
    i = std::stol(tok.substr(1, comma - 1));
    j = std::stol(tok.substr(comma + 1, tok.size() - comma - 2));
  } catch (const std::exception&) {
    dsl_fail(line, "malformed index pair '" + tok + "'");
  }
  if (i < 1 || j < 1 || i > static_cast<long>(dim) || j > static_cast<long>(dim))
    dsl_fail(line, "bivector index out of range for the chart");
  if (i == j) dsl_fail(line, "bivector indices must differ");
  return {static_cast<unsigned>(i - 1), static_cast<unsigned>(j - 1)};
}

Scalar parse_entry_expr(std::size_t line, const std::string& text,
                        const ChartPtr& chart) {
  try {
    return parse_scalar(text, chart);
  } catch (const parse_error& e) {
    dsl_fail(line, std::string(e.what()));
  }
}

}  // namespace

DslInput parse_dsl(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;

  ChartPtr chart, sub_source, subm_target;
  std::vector<std::tuple<std::size_t, std::string, std::string>> biv, base_biv;
  std::vector<std::pair<std::size_t, std::string>> sub_comps, subm_comps;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> grid_rows;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    auto rest_after = [&](std::size_t ntok) {
      // text after the ntok-th token, preserving spaces inside expressions
      std::size_t pos = 0;
      for (std::size_t k = 0; k < ntok; ++k) {
        pos = line.find(toks[k], pos) + toks[k].size();
      }
      auto s = line.substr(pos);
      auto b = s.find_first_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b);
    };

    if (kw == "chart") {
      if (chart) dsl_fail(lineno, "duplicate chart declaration");
      if (toks.size() < 2) dsl_fail(lineno, "chart needs at least one variable");
      chart = make_chart({toks.begin() + 1, toks.end()});
      continue;
    }
    if (!chart) dsl_fail(lineno, kw + " before the chart declaration");
    if (kw == "bivector" || kw == "base_bivector") {
      if (toks.size() < 3) dsl_fail(lineno, kw + " needs an index pair and an expression");
      (kw == "bivector" ? biv : base_biv)
          .emplace_back(lineno, toks[1], rest_after(2));
    } else if (kw == "submanifold") {
      if (toks.size() < 2) dsl_fail(lineno, "submanifold needs 'source' or 'component'");
      if (toks[1] == "source") {
        if (sub_source) dsl_fail(lineno, "duplicate submanifold source");
        sub_source = make_chart({toks.begin() + 2, toks.end()});
      } else if (toks[1] == "component") {
        sub_comps.emplace_back(lineno, rest_after(2));
      } else {
        dsl_fail(lineno, "unknown submanifold directive '" + toks[1] + "'");
      }
    } else if (kw == "submersion" || kw == "map") {
      if (toks.size() < 2) dsl_fail(lineno, kw + " needs 'target' or 'component'");
      if (toks[1] == "target") {
        if (subm_target) dsl_fail(lineno, "duplicate submersion target");
        if (toks.size() < 3) dsl_fail(lineno, "target needs at least one variable");
        subm_target = make_chart({toks.begin() + 2, toks.end()});
      } else if (toks[1] == "component") {
        subm_comps.emplace_back(lineno, rest_after(2));
      } else {
        dsl_fail(lineno, "unknown " + kw + " directive '" + toks[1] + "'");
      }
    } else if (kw == "grid") {
      grid_rows.emplace_back(lineno,
                             std::vector<std::string>{toks.begin() + 1, toks.end()});
    } else {
      dsl_fail(lineno, "unknown keyword '" + kw + "'");
    }
  }

  if (!chart) throw parse_error("missing chart declaration", 0);

  DslInput out;
  out.chart = chart;

  if (!biv.empty()) {
    Multivector pi(chart, 2);
    for (const auto& [ln, idx, expr] : biv) {
      auto [i, j] = parse_pair(ln, idx, chart->dim());
      pi.add({i, j}, parse_entry_expr(ln, expr, chart));
    }
    out.bivector = pi;
  }

  if (sub_source || !sub_comps.empty()) {
    if (!sub_source)
      dsl_fail(sub_comps.front().first, "submanifold component before source");
    if (sub_comps.size() != chart->dim())
      throw parse_error("submanifold needs one component per chart variable", 0);
    std::vector<Scalar> comps;
    for (const auto& [ln, expr] : sub_comps)
      comps.push_back(parse_entry_expr(ln, expr, sub_source));
    out.submanifold = SmoothMap(sub_source, chart, comps);
  }

  if (subm_target || !subm_comps.empty()) {
    if (!subm_target)
      dsl_fail(subm_comps.front().first, "map component before target");
    if (subm_comps.size() != subm_target->dim())
      throw parse_error("map needs one component per target variable", 0);
    std::vector<Scalar> comps;
    for (const auto& [ln, expr] : subm_comps)
      comps.push_back(parse_entry_expr(ln, expr, chart));
    out.submersion = SmoothMap(chart, subm_target, comps);
  }

  if (!base_biv.empty()) {
    if (!subm_target)
      dsl_fail(std::get<0>(base_biv.front()), "base_bivector before submersion target");
    Multivector pi(subm_target, 2);
    for (const auto& [ln, idx, expr] : base_biv) {
      auto [i, j] = parse_pair(ln, idx, subm_target->dim());
      pi.add({i, j}, parse_entry_expr(ln, expr, subm_target));
    }
    out.base_bivector = pi;
  }

  ChartPtr grid_chart = sub_source ? sub_source : chart;
  for (const auto& [ln, toks] : grid_rows) {
    if (toks.size() != grid_chart->dim())
      dsl_fail(ln, "grid point has the wrong number of coordinates");
    std::vector<Rat> coords;
    for (const auto& t : toks) {
      try {
        coords.push_back(parse_rational(t));
      } catch (const std::exception&) {
        dsl_fail(ln, "malformed rational '" + t + "'");
      }
    }
    out.grid.push_back(Point{grid_chart, coords});
  }

  return out;
}

std::string input_digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace pk
