#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pk/submersions.hpp"

#include <cmath>
#include <random>

using namespace pk;

namespace {

Scalar S(const ChartPtr& c, const std::string& t) { return parse_scalar(t, c); }

// Sigma = R^3 with pi = dx^dy + (1+z^2) dz^dy over (R^2, dx^dy)
SubmersionSpec leaves_example() {
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
SubmersionSpec pencil_example() {
  auto c4 = make_chart({"a0", "b0", "a1", "b1"});
  auto c2 = make_chart({"a0", "b0"});
  Multivector piS = wedge(euler_field(c4, 0, 1) + euler_field(c4, 2, 3),
                          rotation_field(c4, 0, 1) + rotation_field(c4, 2, 3)) *
                    S(c4, "a0^2 + b0^2");
  Multivector piM = wedge(euler_field(c2, 0, 1), rotation_field(c2, 0, 1)) *
                    S(c2, "(a0^2 + b0^2)");
  return {SmoothMap(c4, c2, {S(c4, "a0"), S(c4, "b0")}), piS, piM};
}

// Sigma = C^2 \ 0 with (1/4)(E0-E1)^(V0-V1) over CP^1 in the affine chart
SubmersionSpec discontinuous_example() {
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

Mat<Rat> field_columns_at(const std::vector<Multivector>& fields, const Point& p) {
  unsigned n = p.chart->dim();
  Mat<Rat> m(n, std::vector<Rat>(fields.size(), Rat(0)));
  for (std::size_t c = 0; c < fields.size(); ++c)
    for (unsigned i = 0; i < n; ++i) m[i][c] = fields[c].coefficient({i}).evaluate(p);
  return m;
}

}  // namespace

TEST_CASE("vertical_frame: coordinate projections and the CP^1 quotient") {
  auto spec = leaves_example();
  Mat<RatFunc> V = vertical_frame(spec);
  REQUIRE(mat_cols(V) == 1);
  CHECK(V[0][0].is_zero());
  CHECK(V[1][0].is_zero());
  CHECK(V[2][0] == RatFunc::constant(3, 1));

  auto disc = discontinuous_example();
  Mat<RatFunc> Vq = vertical_frame(disc);
  REQUIRE(mat_cols(Vq) == 2);
  // span must equal <E0+E1, V0+V1>
  auto c4 = disc.p.source;
  Multivector e = euler_field(c4, 0, 1) + euler_field(c4, 2, 3);
  Multivector r = rotation_field(c4, 0, 1) + rotation_field(c4, 2, 3);
  Mat<RatFunc> target(4, std::vector<RatFunc>(2, RatFunc(4)));
  for (unsigned i = 0; i < 4; ++i) {
    target[i][0] = e.coefficient({i}).rat();
    target[i][1] = r.coefficient({i}).rat();
  }
  CHECK(rank(Vq) == 2);
  CHECK(rank(hcat(Vq, target)) == 2);
}

TEST_CASE("fiber_report: couplings-over-leaves example is a coupling") {
  auto spec = leaves_example();
  auto rep = fiber_report(spec, rational_grid(spec.p.source, 3));
  CHECK(rep.poisson_map);
  CHECK(rep.coregular == Verdict::Holds);
  for (const auto& fp : rep.points) {
    CHECK(fp.fiber_pd);
    CHECK(fp.fiber_rank == 2);
    CHECK(fp.coupling);
    CHECK(fp.fiber_kind == "trivial");  // one-dimensional fibers
  }
}

TEST_CASE("fiber_report: cotangent projection has no Poisson fibres") {
  auto sigma = make_chart({"q", "p"});
  auto base = make_chart({"q"});
  Multivector piS(sigma, 2);
  piS.add({0, 1}, S(sigma, "1"));
  Multivector piM(base, 2);
  SubmersionSpec spec{SmoothMap(sigma, base, {S(sigma, "q")}), piS, piM};
  auto rep = fiber_report(spec, rational_grid(sigma));
  CHECK(rep.poisson_map);
  CHECK(rep.coregular == Verdict::Fails);
  for (const auto& fp : rep.points) {
    CHECK_FALSE(fp.fiber_pd);
    CHECK(fp.fiber_kind == "none");
  }
}

TEST_CASE("fiber_report: discontinuous fibres are trivial or symplectic, yet coregular") {
  auto spec = discontinuous_example();
  auto X = spec.p.source;
  // scaled pairs lie on common fibers; the a1=b1=0 points sit on the axis fiber
  std::vector<Point> grid;
  for (const Rat& s : {Rat(1), Rat(2)}) {
    grid.push_back(Point{X, {s, 0, 0, 0}});
    grid.push_back(Point{X, {s, 0, s, 0}});
    grid.push_back(Point{X, {s, 0, 0, s}});
    grid.push_back(Point{X, {2 * s, s, s, -s}});
  }
  auto rep = fiber_report(spec, grid);
  CHECK(rep.poisson_map);
  CHECK(rep.coregular == Verdict::Holds);
  for (const auto& fp : rep.points) {
    CHECK(fp.fiber_pd);
    bool axis = fp.at.coords[2] == 0 && fp.at.coords[3] == 0;
    CHECK(fp.fiber_rank == (axis ? 0 : 2));
    CHECK(fp.fiber_kind == (axis ? "symplectic" : "trivial"));
  }
}

TEST_CASE("pencil_decompose: orthogonal pencil with zero vertical part") {
  auto spec = pencil_example();
  CHECK(is_poisson(spec.pi_total).holds());
  auto res = pencil_decompose(spec, rational_grid(spec.p.source, 3));
  REQUIRE(std::holds_alternative<PencilDecomposition>(res));
  const auto& dec = std::get<PencilDecomposition>(res);
  CHECK(dec.pi_v.is_zero());
  CHECK(dec.pi_h == spec.pi_total);
  CHECK(dec.ok());
}

TEST_CASE("pencil_decompose: vertical Poisson structure splits as pi_v = pi") {
  auto sigma = make_chart({"x", "y", "t"});
  auto base = make_chart({"t"});
  Multivector piS(sigma, 2);
  piS.add({0, 1}, S(sigma, "t"));
  Multivector piM(base, 2);
  SubmersionSpec spec{SmoothMap(sigma, base, {S(sigma, "t")}), piS, piM};
  auto res = pencil_decompose(spec, rational_grid(sigma, 3));
  REQUIRE(std::holds_alternative<PencilDecomposition>(res));
  const auto& dec = std::get<PencilDecomposition>(res);
  CHECK(dec.pi_v == piS);
  CHECK(dec.pi_h.is_zero());
  CHECK(dec.ok());

  // generators of the horizontal foliation all vanish
  for (const auto& g : horizontal_generators(spec)) CHECK(g.is_zero());

  // the symbolic vertical part agrees with pointwise fiber induction
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-6, 6);
  for (int k = 0; k < 20; ++k) {
    Point p{sigma, {Rat(num(rng), 3), Rat(num(rng), 3), Rat(num(rng), 3)}};
    auto Bv = vertical_bivector_at(spec, p);
    REQUIRE(Bv.has_value());
    CHECK((*Bv)[0][1] == dec.pi_v.coefficient({0, 1}).evaluate(p));
  }
}

TEST_CASE("pencil_decompose: discontinuous fibres give a rank-jump obstruction") {
  auto spec = discontinuous_example();
  auto X = spec.p.source;
  std::vector<Point> grid{Point{X, {1, 0, 1, 1}},    // off the axes
                          Point{X, {1, 0, 0, 0}},    // on the z1 = 0 axis
                          Point{X, {2, 1, 1, -1}}};
  auto res = pencil_decompose(spec, grid);
  REQUIRE(std::holds_alternative<PencilObstruction>(res));
  const auto& obs = std::get<PencilObstruction>(res);
  REQUIRE(obs.ranks.size() == 2);
  CHECK(obs.ranks[0] == 0);
  CHECK(obs.ranks[1] == 2);
  CHECK(obs.witnesses[1].coords[2] == 0);  // the on-axis witness
}

TEST_CASE("horizontal_generators: span and closure") {
  auto spec = leaves_example();
  auto gens = horizontal_generators(spec);
  REQUIRE(gens.size() == 2);
  auto sigma = spec.p.source;
  Multivector expected0 = vector_field(sigma, {S(sigma, "0"), S(sigma, "1"), S(sigma, "0")});
  Multivector expected1 =
      vector_field(sigma, {S(sigma, "-1"), S(sigma, "0"), S(sigma, "-(1 + z^2)")});
  CHECK(gens[0] == expected0);
  CHECK(gens[1] == expected1);
  CHECK(horizontal_closure(spec));
  for (const auto& p : rational_grid(sigma, 3))
    CHECK(rank(field_columns_at(gens, p)) == 2);

  // identity submersion: closure is the Hamiltonian bracket relation
  auto so3 = make_chart({"x1", "x2", "x3"});
  Multivector pi(so3, 2);
  pi.add({1, 2}, S(so3, "x1"));
  pi.add({2, 0}, S(so3, "x2"));
  pi.add({0, 1}, S(so3, "x3"));
  SubmersionSpec ident{SmoothMap(so3, so3, {S(so3, "x1"), S(so3, "x2"), S(so3, "x3")}),
                       pi, pi};
  CHECK(horizontal_closure(ident));

  // pencil example: generator rank 2 off a0=b0=0, rank 0 there
  auto pen = pencil_example();
  auto pgens = horizontal_generators(pen);
  auto c4 = pen.p.source;
  CHECK(rank(field_columns_at(pgens, Point{c4, {1, 0, 1, 1}})) == 2);
  CHECK(rank(field_columns_at(pgens, Point{c4, {0, 0, 1, 1}})) == 0);
}

TEST_CASE("property: horizontal image lies in the leaf tangent space") {
  for (auto spec : {leaves_example(), pencil_example()}) {
    for (const auto& pt : rational_grid(spec.p.source, 3)) {
      unsigned n = spec.p.source->dim();
      Mat<Rat> V = vertical_frame_at(spec, pt);
      Mat<Rat> Vt = mat_transpose(V);
      auto ann = kernel(Vt, Rat(1));
      Mat<Rat> P = bivector_matrix_at(spec.pi_total, pt);
      Mat<Rat> leaf = column_space(mat_transpose(P));  // image of pi^sharp
      for (const auto& xi : ann) {
        Mat<Rat> v(n, std::vector<Rat>(1, Rat(0)));
        for (unsigned b = 0; b < n; ++b)
          for (unsigned a = 0; a < n; ++a) v[b][0] += xi[a] * P[a][b];
        CHECK(subspace_contains(leaf, column_space(v)));
      }
    }
  }
}

TEST_CASE("coupling_data_verify: flat product passes all four conditions") {
  auto sigma = make_chart({"y1", "y2", "u", "v"});
  auto base = make_chart({"y1", "y2"});
  Multivector piS(sigma, 2);
  piS.add({0, 1}, S(sigma, "1"));
  piS.add({2, 3}, S(sigma, "1"));
  Multivector piM(base, 2);
  piM.add({0, 1}, S(base, "1"));
  SubmersionSpec spec{SmoothMap(sigma, base, {S(sigma, "y1"), S(sigma, "y2")}), piS,
                      piM};
  Multivector piF(sigma, 2);
  piF.add({2, 3}, S(sigma, "1"));
  Form om(sigma, 2);
  om.add({0, 1}, S(sigma, "1"));
  CouplingData cd{{basis_multivector(sigma, {0}), basis_multivector(sigma, {1})}, piF,
                  om};
  auto v = coupling_data_verify(cd, spec, rational_grid(sigma, 2));
  CHECK(v.all());

  // a lift inside the vertical bundle violates complementarity
  CouplingData badcd{{basis_multivector(sigma, {0}), basis_multivector(sigma, {2})},
                     piF, om};
  CHECK_THROWS_AS(coupling_data_verify(badcd, spec, rational_grid(sigma, 2)),
                  mode_error);
}

TEST_CASE("coupling_data_verify: couplings-over-leaves connection passes") {
  auto spec = leaves_example();
  auto sigma = spec.p.source;
  Multivector hx =
      vector_field(sigma, {S(sigma, "1"), S(sigma, "0"), S(sigma, "1 + z^2")});
  Multivector hy = basis_multivector(sigma, {1});
  Multivector piF(sigma, 2);  // fibers carry the trivial structure
  Form om(sigma, 2);
  om.add({0, 1}, S(sigma, "1"));
  CouplingData cd{{hx, hy}, piF, om};
  auto v = coupling_data_verify(cd, spec, rational_grid(sigma, 3));
  CHECK(v.all());
}

TEST_CASE("coupling_data_verify: non-closed form fails only condition (c)") {
  auto sigma = make_chart({"y1", "y2", "y3", "w"});
  auto base = make_chart({"y1", "y2", "y3"});
  Multivector piS(sigma, 2);
  Multivector piM(base, 2);
  SubmersionSpec spec{
      SmoothMap(sigma, base, {S(sigma, "y1"), S(sigma, "y2"), S(sigma, "y3")}), piS,
      piM};
  Multivector zero(sigma, 2);
  Form om(sigma, 2);
  om.add({1, 2}, S(sigma, "y1"));  // d omega = dy1 ^ dy2 ^ dy3
  CouplingData cd{{basis_multivector(sigma, {0}), basis_multivector(sigma, {1}),
                   basis_multivector(sigma, {2})},
                  zero, om};
  auto v = coupling_data_verify(cd, spec, rational_grid(sigma, 2));
  CHECK(v.pi_poisson);
  CHECK(v.lifts_preserve);
  CHECK_FALSE(v.omega_closed_h);
  CHECK(v.curvature_matches);

  Form closed(sigma, 2);
  closed.add({1, 2}, S(sigma, "1"));
  CouplingData good{cd.horizontal, zero, closed};
  CHECK(coupling_data_verify(good, spec, rational_grid(sigma, 2)).all());
}

TEST_CASE("ham_flow: linear flow of x1 under d1^d2") {
  auto c = make_chart({"x1", "x2"});
  Multivector pi(c, 2);
  pi.add({0, 1}, S(c, "1"));
  auto traj = ham_flow(pi, S(c, "x1"), Point{c, {Rat(0), Rat(0)}}, 1.0, 1e-3);
  REQUIRE(traj.completed);
  const auto& last = traj.states.back();
  CHECK(std::abs(last[0]) < 1e-12);
  CHECK(std::abs(last[1] - 1.0) < 1e-9);  // H_{x1} = d/dx2
  CHECK(traj.conservation_error < 1e-12);
  CHECK(traj.richardson_error < 1e-9);
}

TEST_CASE("ham_flow: constant Hamiltonian is stationary") {
  auto c = make_chart({"x1", "x2"});
  Multivector pi(c, 2);
  pi.add({0, 1}, S(c, "x1"));
  auto traj = ham_flow(pi, S(c, "5"), Point{c, {Rat(1), Rat(2)}}, 1.0, 1e-2);
  REQUIRE(traj.completed);
  for (const auto& x : traj.states) {
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 2.0);
  }
}

TEST_CASE("ham_flow: leaf through the origin is the arctan graph") {
  auto spec = leaves_example();
  auto sigma = spec.p.source;
  auto traj = ham_flow(spec.pi_total, S(sigma, "y"),
                       Point{sigma, {Rat(0), Rat(0), Rat(0)}}, 1.3, 1e-3);
  REQUIRE(traj.completed);
  for (const auto& x : traj.states) {
    CHECK(std::abs(x[0] - std::atan(x[2])) < 1e-6);
    CHECK(std::abs(x[0]) < M_PI / 2);
  }
  CHECK(traj.conservation_error < 1e-12);
  CHECK(traj.richardson_error < 1e-8);
}

TEST_CASE("ham_flow: energy conservation on so(3)*") {
  auto c = make_chart({"x1", "x2", "x3"});
  Multivector pi(c, 2);
  pi.add({1, 2}, S(c, "x1"));
  pi.add({2, 0}, S(c, "x2"));
  pi.add({0, 1}, S(c, "x3"));
  auto traj = ham_flow(pi, S(c, "x1 + x2^2"), Point{c, {Rat(1), Rat(1, 2), Rat(-1)}},
                       2.0, 1e-3);
  REQUIRE(traj.completed);
  CHECK(traj.conservation_error < 1e-6);
  // the Casimir |x|^2 is conserved by any Hamiltonian flow
  auto cas = [](const std::vector<double>& x) {
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  };
  double c0 = cas(traj.states.front());
  for (const auto& x : traj.states) CHECK(std::abs(cas(x) - c0) < 1e-6);
}
