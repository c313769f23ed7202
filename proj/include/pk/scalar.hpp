#pragma once

#include "pk/expr.hpp"
#include "pk/ratfunc.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pk {

/// Ordered coordinate chart. Shared by every value living on it.
class Chart {
public:
  explicit Chart(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i)
      for (std::size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j])
          throw mode_error("duplicate chart variable: " + names_[i]);
  }

  unsigned dim() const { return static_cast<unsigned>(names_.size()); }
  const std::string& name(unsigned i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  /// Index of a variable name, or -1 if absent.
  int index_of(const std::string& n) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == n) return static_cast<int>(i);
    return -1;
  }
  bool operator==(const Chart& o) const { return names_ == o.names_; }

private:
  std::vector<std::string> names_;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline ChartPtr make_chart(std::vector<std::string> names) {
  return std::make_shared<Chart>(std::move(names));
}

/// A point of a chart with exact rational coordinates. Numeric-mode callers
/// evaluate at double vectors directly.
struct Point {
  ChartPtr chart;
  std::vector<Rat> coords;

  std::vector<double> to_double() const {
    std::vector<double> x;
    x.reserve(coords.size());
    for (const auto& c : coords) x.push_back(static_cast<double>(c));
    return x;
  }
};

/// Scalar function on a chart: exact rational function or numeric
/// expression tree. Immutable.
class Scalar {
public:
  enum class Mode { EXACT, NUMERIC };

  Scalar() = default;
  Scalar(ChartPtr chart, RatFunc f)
      : chart_(std::move(chart)), mode_(Mode::EXACT), exact_(std::move(f)) {}
  Scalar(ChartPtr chart, Expr::Ptr e)
      : chart_(std::move(chart)), mode_(Mode::NUMERIC), numeric_(std::move(e)) {}

  static Scalar constant(ChartPtr chart, const Rat& c) {
    unsigned n = chart->dim();
    return Scalar(std::move(chart), RatFunc::constant(n, c));
  }
  static Scalar variable(ChartPtr chart, unsigned i) {
    unsigned n = chart->dim();
    return Scalar(std::move(chart), RatFunc::variable(n, i));
  }

  const ChartPtr& chart() const { return chart_; }
  Mode mode() const { return mode_; }
  bool exact() const { return mode_ == Mode::EXACT; }
  const RatFunc& rat() const {
    if (!exact()) throw mode_error("operation requires an EXACT scalar");
    return exact_;
  }
  /// Expression view; EXACT scalars are converted on demand.
  Expr::Ptr expr() const;

  bool is_zero() const { return exact() && exact_.is_zero(); }

  Scalar operator+(const Scalar& o) const { return combine(o, '+'); }
  Scalar operator-(const Scalar& o) const { return combine(o, '-'); }
  Scalar operator*(const Scalar& o) const { return combine(o, '*'); }
  Scalar operator/(const Scalar& o) const { return combine(o, '/'); }
  Scalar operator-() const {
    if (exact()) return Scalar(chart_, -exact_);
    return Scalar(chart_, Expr::neg(numeric_));
  }
  Scalar operator*(const Rat& c) const {
    if (exact()) return Scalar(chart_, exact_ * c);
    return Scalar(chart_, Expr::mul(Expr::constant(c), numeric_));
  }
  bool operator==(const Scalar& o) const {
    if (!exact() || !o.exact())
      throw mode_error("NUMERIC scalar equality is not decided");
    return exact_ == o.exact_;
  }

  Scalar differentiate(unsigned v) const {
    if (exact()) return Scalar(chart_, exact_.derivative(v));
    return Scalar(chart_, numeric_->differentiate(v));
  }

  Rat evaluate(const Point& p) const { return rat().evaluate(p.coords); }
  double evaluate_double(const std::vector<double>& x) const {
    if (exact()) return exact_.evaluate_double(x);
    return numeric_->evaluate(x);
  }
  bool defined_at(const Point& p) const {
    return exact() && exact_.defined_at(p.coords);
  }

  /// Compose with a map given by per-variable substitutes on a new chart.
  Scalar substitute(const ChartPtr& src, const std::vector<Scalar>& images) const;

  std::string to_string() const;

private:
  Scalar combine(const Scalar& o, char op) const;

  ChartPtr chart_;
  Mode mode_ = Mode::EXACT;
  RatFunc exact_;
  Expr::Ptr numeric_;
};

inline Scalar operator*(const Rat& c, const Scalar& s) { return s * c; }

/// Parse a DSL expression on the chart. EXACT unless an elementary function
/// appears. Throws parse_error with position on malformed input.
Scalar parse_scalar(const std::string& text, const ChartPtr& chart);

/// Deterministic rational sample grid: `per_dim` values per coordinate
/// (default 5: -1, -1/2, 0, 1/2, 1), offset by a seed, total capped at 625.
std::vector<Point> rational_grid(const ChartPtr& chart, unsigned per_dim = 5,
                                 std::uint64_t seed = 0, std::size_t cap = 625);

/// Expression tree for a rational function (used to evaluate EXACT scalars
/// inside NUMERIC combinations).
Expr::Ptr ratfunc_to_expr(const RatFunc& f);

}  // namespace pk
