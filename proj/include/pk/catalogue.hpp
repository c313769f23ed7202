#pragma once

#include "pk/submanifolds.hpp"
#include "pk/submersions.hpp"

#include <functional>
#include <optional>
#include <string>

namespace pk {

/// Named Poisson bivector from the built-in example catalogue.
struct NamedBivector {
  std::string id;
  Multivector pi;
};

/// The catalogue bivectors that must all satisfy the Jacobi identity.
std::vector<NamedBivector> catalogue_bivectors();

struct FixtureResult {
  bool pass = false;
  std::string detail;  // human-readable summary of what was checked
};

struct Fixture {
  std::string id;
  std::string note;  // one-line description of the configuration
  std::function<FixtureResult()> run;
};

const std::vector<Fixture>& catalogue();
const Fixture* find_fixture(const std::string& id);

/// Line-oriented DSL:
///   chart <names...>
///   bivector [i,j] <expr>          (1-based indices, expr over chart vars)
///   submanifold source <names...>
///   submanifold component <expr>   (one per chart variable, over source vars)
///   submersion target <names...>
///   submersion component <expr>    (one per target variable, over chart vars)
///   base_bivector [i,j] <expr>     (over target vars)
///   grid <rationals...>            (a point: on the submanifold source when
///                                   one is declared, else on the chart)
/// Lines may be empty or start with '#'.
struct DslInput {
  ChartPtr chart;
  std::optional<Multivector> bivector;
  std::optional<SmoothMap> submanifold;
  std::optional<SmoothMap> submersion;
  std::optional<Multivector> base_bivector;
  std::vector<Point> grid;
};

DslInput parse_dsl(const std::string& text);

/// 64-bit FNV-1a digest of an input, as fixed-width hex.
std::string input_digest(const std::string& text);

}  // namespace pk
