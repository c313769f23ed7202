#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pk/toric.hpp"

using namespace pk;

namespace {

DelzantPolytope interval() {
  DelzantPolytope dp;
  dp.rank = 1;
  dp.normals = {{Int(1)}, {Int(-1)}};
  dp.offsets = {Rat(0), Rat(-1)};
  return dp;
}

DelzantPolytope triangle() {
  DelzantPolytope dp;
  dp.rank = 2;
  dp.normals = {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(-1)}};
  dp.offsets = {Rat(0), Rat(0), Rat(-1)};
  return dp;
}

DelzantPolytope square() {
  DelzantPolytope dp;
  dp.rank = 2;
  dp.normals = {{Int(1), Int(0)}, {Int(-1), Int(0)}, {Int(0), Int(1)},
                {Int(0), Int(-1)}};
  dp.offsets = {Rat(0), Rat(-1), Rat(0), Rat(-1)};
  return dp;
}

// integer membership of target in the Z-span of basis vectors
bool in_lattice(const std::vector<std::vector<Int>>& basis,
                const std::vector<Int>& target) {
  std::size_t d = target.size();
  Mat<Rat> A(d, std::vector<Rat>(basis.size(), Rat(0)));
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (std::size_t r = 0; r < d; ++r) A[r][c] = Rat(basis[c][r]);
  std::vector<Rat> rhs(d);
  for (std::size_t r = 0; r < d; ++r) rhs[r] = Rat(target[r]);
  auto x = solve(A, rhs, Rat(1));
  if (!x) return false;
  std::vector<Rat> back(d, Rat(0));
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (std::size_t r = 0; r < d; ++r) back[r] += A[r][c] * (*x)[c];
  if (back != rhs) return false;
  for (const auto& e : *x)
    if (denominator(e) != 1) return false;
  return true;
}

Mat<Rat> standard_positive(std::size_t d) {
  Mat<Rat> pi(2 * d, std::vector<Rat>(2 * d, Rat(0)));
  for (std::size_t i = 0; i < d; ++i) {
    pi[2 * i][2 * i + 1] = 1;
    pi[2 * i + 1][2 * i] = -1;
  }
  return pi;
}

Point stratum_point(const ChartPtr& chart, const std::vector<unsigned>& zeros,
                    std::size_t d) {
  std::vector<Rat> coords(2 * d, Rat(0));
  for (std::size_t i = 0; i < d; ++i) coords[2 * i] = Rat(1) + Rat(i);
  for (unsigned i : zeros) coords[2 * i] = 0;
  return Point{chart, coords};
}

}  // namespace

TEST_CASE("vertices of the basic polytopes") {
  auto iv = vertices(interval());
  REQUIRE(iv.size() == 2);
  CHECK(iv[0] == std::vector<Rat>{Rat(0)});
  CHECK(iv[1] == std::vector<Rat>{Rat(1)});

  auto tv = vertices(triangle());
  REQUIRE(tv.size() == 3);
  CHECK(tv[0] == std::vector<Rat>{Rat(0), Rat(0)});
  CHECK(tv[1] == std::vector<Rat>{Rat(0), Rat(1)});
  CHECK(tv[2] == std::vector<Rat>{Rat(1), Rat(0)});

  CHECK(vertices(square()).size() == 4);
}

TEST_CASE("degenerate polytopes are rejected") {
  DelzantPolytope half;
  half.rank = 1;
  half.normals = {{Int(1)}};
  half.offsets = {Rat(0)};
  CHECK_THROWS_WITH_AS(vertices(half), "polytope is unbounded", mode_error);

  DelzantPolytope empty;
  empty.rank = 1;
  empty.normals = {{Int(1)}, {Int(-1)}};
  empty.offsets = {Rat(0), Rat(1)};  // x >= 0 and x <= -1
  CHECK_THROWS_WITH_AS(vertices(empty), "polytope is empty", mode_error);

  DelzantPolytope pointy;  // three facets through the origin
  pointy.rank = 2;
  pointy.normals = {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(1), Int(1)},
                    {Int(-1), Int(-1)}};
  pointy.offsets = {Rat(0), Rat(0), Rat(0), Rat(-2)};
  CHECK_THROWS_WITH_AS(vertices(pointy), "polytope is not simple", mode_error);
}

TEST_CASE("Delzant condition") {
  CHECK(is_delzant(interval()).delzant);
  CHECK(is_delzant(triangle()).delzant);
  CHECK(is_delzant(square()).delzant);

  DelzantPolytope bad;
  bad.rank = 2;
  bad.normals = {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-2), Int(-1)}};
  bad.offsets = {Rat(0), Rat(0), Rat(-2)};
  auto rep = is_delzant(bad);
  CHECK_FALSE(rep.delzant);
  REQUIRE(rep.failing_vertex.has_value());
  CHECK(*rep.failing_vertex == std::vector<Rat>{Rat(1), Rat(0)});

  DelzantPolytope coarse = interval();
  coarse.normals[0] = {Int(2)};
  auto rep2 = is_delzant(coarse);
  CHECK_FALSE(rep2.delzant);
  CHECK(rep2.reason == "facet normal is not primitive");
}

TEST_CASE("kernel lattice") {
  auto ik = kernel_lattice(interval());
  CHECK(ik.surjective);
  REQUIRE(ik.basis.size() == 1);
  CHECK(in_lattice(ik.basis, {Int(1), Int(1)}));
  CHECK(in_lattice({{Int(1), Int(1)}}, ik.basis[0]));

  auto tk = kernel_lattice(triangle());
  CHECK(tk.surjective);
  REQUIRE(tk.basis.size() == 1);
  CHECK(in_lattice(tk.basis, {Int(1), Int(1), Int(1)}));

  auto sk = kernel_lattice(square());
  CHECK(sk.surjective);
  REQUIRE(sk.basis.size() == 2);
  CHECK(in_lattice(sk.basis, {Int(1), Int(1), Int(0), Int(0)}));
  CHECK(in_lattice(sk.basis, {Int(0), Int(0), Int(1), Int(1)}));
  CHECK(in_lattice({{Int(1), Int(1), Int(0), Int(0)},
                    {Int(0), Int(0), Int(1), Int(1)}},
                   sk.basis[0]));

  // exactness: every kernel vector pairs to zero with every normal
  for (DelzantPolytope dp : {interval(), triangle(), square()}) {
    auto k = kernel_lattice(dp);
    for (const auto& v : k.basis)
      for (unsigned c = 0; c < dp.rank; ++c) {
        Int acc(0);
        for (std::size_t i = 0; i < dp.facet_count(); ++i)
          acc += v[i] * dp.normals[i][c];
        CHECK(acc == 0);
      }
  }

  DelzantPolytope doubled;
  doubled.rank = 1;
  doubled.normals = {{Int(2)}, {Int(-2)}};
  doubled.offsets = {Rat(0), Rat(-2)};
  CHECK_FALSE(kernel_lattice(doubled).surjective);
}

TEST_CASE("faces and toric leaf counts") {
  auto fs = faces(interval());
  REQUIRE(fs.size() == 3);
  CHECK(fs[0].empty());
  CHECK(fs[1] == std::vector<unsigned>{0});
  CHECK(fs[2] == std::vector<unsigned>{1});
  CHECK(leaf_count_toric(interval()) == 3);
  CHECK(leaf_count_toric(triangle()) == 7);
  CHECK(leaf_count_toric(square()) == 9);

  // face lattice sanity: subsets of a nonempty face index set stay feasible
  // once the complementary inequalities are relaxed to non-strict
  for (DelzantPolytope dp : {interval(), triangle(), square()}) {
    for (const auto& I : faces(dp)) {
      for (std::size_t drop = 0; drop < I.size(); ++drop) {
        std::vector<unsigned> J;
        for (std::size_t k = 0; k < I.size(); ++k)
          if (k != drop) J.push_back(I[k]);
        CHECK(face_feasible(dp, J, false));
      }
    }
  }
}

TEST_CASE("moment map") {
  auto dp = interval();
  auto mu = moment_map(dp, {Rat(2), Rat(0)});
  CHECK(mu == std::vector<Rat>{Rat(1), Rat(-1)});
  CHECK(moment_map_N(dp, {Rat(2), Rat(0)}) == std::vector<Rat>{Rat(0)});

  CHECK(moment_map(dp, {Rat(0), Rat(0)}) == dp.offsets);

  // the mu_N = 0 level is the sphere |z0|^2 + |z1|^2 = 2
  CHECK(moment_map_N(dp, {Rat(1), Rat(1)}) == std::vector<Rat>{Rat(0)});
  CHECK(moment_map_N(dp, {Rat(3), Rat(0)}) != std::vector<Rat>{Rat(0)});
  CHECK(moment_map_N(dp, {Rat(3, 2), Rat(1, 2)}) == std::vector<Rat>{Rat(0)});
}

TEST_CASE("GIT quotient sampling is pointwise Poisson-Dirac") {
  auto dp = interval();
  auto chart = make_chart({"x1", "y1", "x2", "y2"});
  Mat<Rat> piA = standard_positive(2);

  CHECK(git_coregular_sample(dp, piA, Point{chart, {Rat(1), Rat(0), Rat(1), Rat(0)}}));
  CHECK(git_coregular_sample(dp, piA, Point{chart, {Rat(1), Rat(0), Rat(0), Rat(0)}}));
  CHECK_THROWS_AS(
      git_coregular_sample(dp, piA, Point{chart, {Rat(0), Rat(0), Rat(0), Rat(0)}}),
      eval_error);

  Mat<Rat> neg = standard_positive(2);
  neg[0][1] = -1;
  neg[1][0] = 1;
  CHECK_THROWS_AS(
      git_coregular_sample(dp, neg, Point{chart, {Rat(1), Rat(0), Rat(1), Rat(0)}}),
      mode_error);
}

TEST_CASE("GIT sampling across every stratum of the basic polytopes") {
  for (DelzantPolytope dp : {interval(), triangle(), square()}) {
    std::size_t d = dp.facet_count();
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= d; ++i) {
      names.push_back("x" + std::to_string(i));
      names.push_back("y" + std::to_string(i));
    }
    auto chart = make_chart(names);
    Mat<Rat> piA = standard_positive(d);
    for (const auto& I : faces(dp))
      CHECK(git_coregular_sample(dp, piA, stratum_point(chart, I, d)));
  }
}

TEST_CASE("totally real bivectors") {
  auto c1 = make_chart({"x", "y"});
  CHECK(totally_real(basis_multivector(c1, {0, 1})));
  Multivector scaled(c1, 2);
  scaled.add({0, 1}, parse_scalar("x^2 + y^2", c1));
  CHECK(totally_real(scaled));

  auto c2 = make_chart({"x1", "y1", "x2", "y2"});
  Multivector mixed = wedge(euler_field(c2, 0, 1), rotation_field(c2, 2, 3)) +
                      wedge(rotation_field(c2, 0, 1), euler_field(c2, 2, 3));
  Multivector ee = wedge(euler_field(c2, 0, 1), euler_field(c2, 2, 3));
  Multivector vv = wedge(rotation_field(c2, 0, 1), rotation_field(c2, 2, 3));

  // oracle: conjugation relates pi to -pi as a smooth map
  auto conj_oracle = [](const Multivector& pi) {
    const ChartPtr& ch = pi.chart();
    std::vector<Scalar> comps;
    for (unsigned k = 0; k < ch->dim(); ++k) {
      Scalar v = Scalar::variable(ch, k);
      comps.push_back(k % 2 == 0 ? v : -v);
    }
    SmoothMap conj(ch, ch, comps);
    return map_related(conj, pi, -pi).holds();
  };
  for (const auto& pi : {mixed, ee, vv, scaled}) {
    INFO("oracle agreement");
    CHECK(totally_real(pi) == conj_oracle(pi));
  }
  CHECK(totally_real(mixed));
  CHECK_FALSE(totally_real(ee));
  CHECK_FALSE(totally_real(vv));
}

TEST_CASE("associated leaf counts") {
  CHECK(associated_leaf_count({2, 2, "isotropic-orbits"}) == 4);
  CHECK(associated_leaf_count({2, 3, "principal-fibers-zero"}) == 6);
  CHECK(associated_leaf_count({3, 2, "isotropic-orbits"}) == 6);
  CHECK(associated_leaf_count({3, 3, "principal-fibers-zero"}) == 9);
  CHECK(associated_leaf_count({5, 1, "isotropic-orbits"}) == 5);
  CHECK_THROWS_AS(associated_leaf_count({2, 2, ""}), mode_error);
  CHECK_THROWS_AS(associated_leaf_count({0, 2, "isotropic-orbits"}), mode_error);
}

TEST_CASE("polytope JSON input") {
  auto dp = polytope_from_json(
      R"({"rank": 1, "facets": [{"u": [1], "c": 0}, {"u": [-1], "c": "-1"}]})");
  CHECK(dp.rank == 1);
  CHECK(dp.facet_count() == 2);
  CHECK(dp.offsets[1] == Rat(-1));
  CHECK(leaf_count_toric(dp) == 3);

  CHECK_THROWS_AS(polytope_from_json("{"), parse_error);
  CHECK_THROWS_AS(polytope_from_json(R"({"rank": 2, "facets": [{"u": [1], "c": 0}]})"),
                  parse_error);
  CHECK_THROWS_AS(
      polytope_from_json(R"({"rank": 1, "facets": [{"u": [0.5], "c": 0}]})"),
      parse_error);
}
