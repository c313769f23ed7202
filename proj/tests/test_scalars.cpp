#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pk/scalar.hpp"

#include <random>

using namespace pk;

static ChartPtr xy = make_chart({"x", "y"});
static ChartPtr ts = make_chart({"t", "s"});

TEST_CASE("parse: exact polynomial with 2 terms") {
  auto c = make_chart({"x1", "x2"});
  Scalar s = parse_scalar("x1*x2 + 3/2", c);
  REQUIRE(s.exact());
  CHECK(s.rat().den().is_constant());
  CHECK(s.rat().num().terms().size() == 2);
}

TEST_CASE("parse: gcd cancellation to x+1") {
  auto c = make_chart({"x"});
  Scalar s = parse_scalar("(x^2-1)/(x-1)", c);
  Scalar expect = parse_scalar("x+1", c);
  CHECK(s == expect);
}

TEST_CASE("parse: flat function goes NUMERIC with enough structure") {
  Scalar s = parse_scalar("exp(-1/x^2)*(y - sin(1/x))", xy);
  REQUIRE(s.mode() == Scalar::Mode::NUMERIC);
  CHECK(s.expr()->internal_nodes() >= 4);
  // sanity value: at x where 1/x = pi it should be exp(-1/x^2)*y approx
  double v = s.evaluate_double({2.0, 1.0});
  double expect = std::exp(-0.25) * (1.0 - std::sin(0.5));
  CHECK(v == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("parse errors carry position") {
  CHECK_THROWS_AS(parse_scalar("x +* y", xy), parse_error);
  CHECK_THROWS_AS(parse_scalar("(x + y", xy), parse_error);
  CHECK_THROWS_AS(parse_scalar("z + 1", xy), parse_error);
  CHECK_THROWS_AS(parse_scalar("1/0", xy), eval_error);
  CHECK_THROWS_AS(parse_scalar("sin(x)/(2-2)", xy), eval_error);
}

TEST_CASE("normalize: (2x)/2 and factor cancellation") {
  CHECK(parse_scalar("(2*x)/2", xy) == parse_scalar("x", xy));
  CHECK(parse_scalar("(x^2*y - x*y^2)/(x - y)", xy) == parse_scalar("x*y", xy));
}

TEST_CASE("normalize: induced-coefficient fixture is already reduced") {
  Scalar s = parse_scalar("((t^2+s^2)^2 - t^2)/(2*t^2 + 2*s^2)", ts);
  Poly g = poly_gcd(s.rat().num(), s.rat().den());
  CHECK(g.is_constant());
  // denominator monic: leading coefficient 1 (so num picked up the 1/2)
  CHECK(s.rat().den().leading().second == 1);
  // value checks
  CHECK(s.evaluate(Point{ts, {Rat(1), Rat(1)}}) == Rat(3, 4));
  CHECK(s.evaluate(Point{ts, {Rat(1), Rat(0)}}) == Rat(0));
}

TEST_CASE("differentiate basics") {
  Scalar s = parse_scalar("x^2*y", xy);
  CHECK(s.differentiate(0) == parse_scalar("2*x*y", xy));
  CHECK(s.differentiate(1) == parse_scalar("x^2", xy));
  auto z = make_chart({"z"});
  CHECK(parse_scalar("1+z^2", z).differentiate(0) == parse_scalar("2*z", z));
  // v-free scalar
  CHECK(parse_scalar("y^3", xy).differentiate(0).is_zero());
}

TEST_CASE("differentiate matches central finite differences") {
  Scalar s = parse_scalar("((t^2+s^2)^2 - t^2)/(2*t^2 + 2*s^2)", ts);
  Scalar dt = s.differentiate(0);
  double h = 1e-5;
  double fd = (s.evaluate_double({1 + h, 1.0}) - s.evaluate_double({1 - h, 1.0})) / (2 * h);
  CHECK(std::abs(dt.evaluate_double({1.0, 1.0}) - fd) < 1e-8);
}

TEST_CASE("evaluate: exact rational and pole errors") {
  auto c = make_chart({"x1", "x2"});
  Scalar s = parse_scalar("x1*x2", c);
  CHECK(s.evaluate(Point{c, {Rat(3), Rat(1, 2)}}) == Rat(3, 2));
  Scalar inv = parse_scalar("1/x", xy);
  CHECK_THROWS_AS(inv.evaluate(Point{xy, {Rat(0), Rat(0)}}), eval_error);
  Scalar numeric_inv = parse_scalar("sin(1/x)", xy);
  CHECK_THROWS_AS(numeric_inv.evaluate_double({0.0, 0.0}), eval_error);
}

namespace {

Scalar random_poly_scalar(const ChartPtr& chart, std::mt19937_64& rng,
                          unsigned max_deg = 3) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<unsigned> deg(0, max_deg);
  Poly p(chart->dim());
  for (int t = 0; t < 4; ++t) {
    Monomial m(chart->dim(), 0);
    unsigned budget = deg(rng);
    for (unsigned i = 0; i < chart->dim() && budget; ++i) {
      std::uniform_int_distribution<unsigned> e(0, budget);
      m[i] = e(rng);
      budget -= m[i];
    }
    p.add_term(m, Rat(coeff(rng)));
  }
  return Scalar(chart, RatFunc(p));
}

}  // namespace

TEST_CASE("property: commutativity and multiplicative cancellation") {
  std::mt19937_64 rng(12345);
  auto c = make_chart({"a", "b", "c", "d"});
  for (int k = 0; k < 50; ++k) {
    Scalar a = random_poly_scalar(c, rng);
    Scalar b = random_poly_scalar(c, rng);
    CHECK(a + b == b + a);
    if (!b.is_zero()) CHECK((a * b) / b == a);
  }
}

TEST_CASE("property: Leibniz rule on 200 randomized EXACT pairs") {
  std::mt19937_64 rng(777);
  auto c = make_chart({"a", "b", "c", "d"});
  int failures = 0;
  for (int k = 0; k < 200; ++k) {
    Scalar f = random_poly_scalar(c, rng);
    Scalar g = random_poly_scalar(c, rng);
    unsigned v = k % 4;
    Scalar lhs = (f * g).differentiate(v);
    Scalar rhs = f.differentiate(v) * g + f * g.differentiate(v);
    if (!(lhs == rhs)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("property: derivative vs finite differences on random points") {
  std::mt19937_64 rng(31337);
  auto c = make_chart({"a", "b"});
  std::uniform_real_distribution<double> pt(0.5, 2.0);
  for (int k = 0; k < 100; ++k) {
    Scalar f = random_poly_scalar(c, rng);
    Scalar df = f.differentiate(0);
    double x = pt(rng), y = pt(rng), h = 1e-5;
    double fd = (f.evaluate_double({x + h, y}) - f.evaluate_double({x - h, y})) / (2 * h);
    double sym = df.evaluate_double({x, y});
    double scale = std::max({1.0, std::abs(sym), std::abs(fd)});
    CHECK(std::abs(sym - fd) / scale < 1e-6);
  }
}

TEST_CASE("property: parser round-trip through printer") {
  std::mt19937_64 rng(99);
  auto c = make_chart({"x", "y", "z"});
  for (int k = 0; k < 60; ++k) {
    Scalar a = random_poly_scalar(c, rng);
    Scalar b = random_poly_scalar(c, rng);
    if (b.is_zero()) continue;
    Scalar f = a / b;
    Scalar back = parse_scalar(f.to_string(), c);
    CHECK(f == back);
  }
  // numeric round-trip: same tree structure up to printing
  Scalar n = parse_scalar("exp(-1/x^2)*(y - sin(1/x))", c);
  Scalar n2 = parse_scalar(n.to_string(), c);
  CHECK(n.evaluate_double({1.7, 0.3, 0.0}) ==
        doctest::Approx(n2.evaluate_double({1.7, 0.3, 0.0})).epsilon(1e-15));
}

TEST_CASE("rational grid: deterministic, seeded, capped") {
  auto g = rational_grid(ts);
  REQUIRE(g.size() == 25);
  CHECK(g[0].coords == std::vector<Rat>{Rat(-1), Rat(-1)});
  // default per-dim values are -1,-1/2,0,1/2,1
  std::vector<Rat> firsts;
  for (int i = 0; i < 5; ++i) firsts.push_back(g[i].coords[0]);
  CHECK(firsts == std::vector<Rat>{Rat(-1), Rat(-1, 2), Rat(0), Rat(1, 2), Rat(1)});
  auto seeded = rational_grid(ts, 5, 3);
  CHECK(seeded[0].coords[0] == Rat(-1) + Rat(3, 97));
  auto big = rational_grid(make_chart({"a", "b", "c", "d", "e"}));
  CHECK(big.size() == 625);
}
