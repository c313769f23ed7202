#include "pk/scalar.hpp"

namespace pk {

namespace {

Expr::Ptr poly_to_expr(const Poly& p) {
  Expr::Ptr acc;
  for (const auto& [m, c] : p.terms()) {
    Expr::Ptr t = Expr::constant(c);
    for (unsigned i = 0; i < p.arity(); ++i) {
      if (m[i] == 0) continue;
      Expr::Ptr v = Expr::variable(i);
      t = Expr::mul(t, m[i] == 1 ? v : Expr::pow(v, static_cast<int>(m[i])));
    }
    acc = acc ? Expr::add(acc, t) : t;
  }
  return acc ? acc : Expr::constant(Rat(0));
}

}  // namespace

Expr::Ptr ratfunc_to_expr(const RatFunc& f) {
  if (f.den().is_constant() && f.den().constant_value() == 1)
    return poly_to_expr(f.num());
  return Expr::div(poly_to_expr(f.num()), poly_to_expr(f.den()));
}

Expr::Ptr Scalar::expr() const {
  if (mode_ == Mode::NUMERIC) return numeric_;
  return ratfunc_to_expr(exact_);
}

Scalar Scalar::combine(const Scalar& o, char op) const {
  if (!(*chart_ == *o.chart_)) throw mode_error("scalars on different charts");
  if (exact() && o.exact()) {
    switch (op) {
      case '+': return Scalar(chart_, exact_ + o.exact_);
      case '-': return Scalar(chart_, exact_ - o.exact_);
      case '*': return Scalar(chart_, exact_ * o.exact_);
      case '/': return Scalar(chart_, exact_ / o.exact_);
    }
  }
  Expr::Ptr a = expr(), b = o.expr();
  switch (op) {
    case '+': return Scalar(chart_, Expr::add(a, b));
    case '-': return Scalar(chart_, Expr::sub(a, b));
    case '*': return Scalar(chart_, Expr::mul(a, b));
    case '/': return Scalar(chart_, Expr::div(a, b));
  }
  throw mode_error("unknown operation");
}

Scalar Scalar::substitute(const ChartPtr& src, const std::vector<Scalar>& images) const {
  if (images.size() != chart_->dim())
    throw mode_error("substitution image count does not match chart dimension");
  bool all_exact = exact();
  for (const auto& s : images) all_exact = all_exact && s.exact();
  if (all_exact) {
    std::vector<RatFunc> fs;
    fs.reserve(images.size());
    for (const auto& s : images) fs.push_back(s.rat());
    if (fs.empty()) {
      // constant function of no variables: reinterpret on the new chart
      return Scalar(src, RatFunc::constant(src->dim(), exact_.constant_value()));
    }
    return Scalar(src, exact_.substitute(fs));
  }
  // numeric composition: substitute expression trees for variables
  std::vector<Expr::Ptr> imgs;
  imgs.reserve(images.size());
  for (const auto& s : images) imgs.push_back(s.expr());
  struct Sub {
    const std::vector<Expr::Ptr>& imgs;
    Expr::Ptr walk(const Expr::Ptr& e) {
      switch (e->kind) {
        case Expr::Kind::Const: return e;
        case Expr::Kind::Var: return imgs.at(e->var);
        default: {
          std::vector<Expr::Ptr> ch;
          for (const auto& c : e->children) ch.push_back(walk(c));
          auto n = std::make_shared<Expr>(*e);
          n->children = std::move(ch);
          return n;
        }
      }
    }
  } sub{imgs};
  return Scalar(src, sub.walk(expr()));
}

std::string Scalar::to_string() const {
  if (!exact()) return numeric_->to_string(chart_->names());
  const RatFunc& f = exact_;
  std::string num = poly_to_string(f.num(), chart_->names());
  if (f.den().is_constant() && f.den().constant_value() == 1) return num;
  return "(" + num + ")/(" + poly_to_string(f.den(), chart_->names()) + ")";
}

std::vector<Point> rational_grid(const ChartPtr& chart, unsigned per_dim,
                                 std::uint64_t seed, std::size_t cap) {
  unsigned n = chart->dim();
  if (per_dim == 0) per_dim = 1;
  Rat offset(seed % 89, 97);
  std::vector<Rat> values;
  int half = static_cast<int>(per_dim) / 2;
  for (unsigned k = 0; k < per_dim; ++k)
    values.push_back(Rat(static_cast<int>(k) - half, std::max(half, 1)) + offset);

  std::vector<Point> out;
  if (n == 0) {
    out.push_back(Point{chart, {}});
    return out;
  }
  std::vector<unsigned> idx(n, 0);
  while (out.size() < cap) {
    Point p{chart, {}};
    p.coords.reserve(n);
    for (unsigned i = 0; i < n; ++i) p.coords.push_back(values[idx[i]]);
    out.push_back(std::move(p));
    unsigned i = 0;
    for (; i < n; ++i) {
      if (++idx[i] < per_dim) break;
      idx[i] = 0;
    }
    if (i == n) break;
  }
  return out;
}

}  // namespace pk
