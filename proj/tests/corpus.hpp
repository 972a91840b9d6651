#pragma once

#include <string>
#include <vector>

#include "liesym/geometry/tensor.hpp"
#include "liesym/symexpr/parse.hpp"
#include "random_expr.hpp"

namespace liesym::testing {

inline ExprMatrix parse_matrix(const std::vector<std::vector<std::string>>& rows) {
  ExprMatrix m;
  for (const auto& r : rows) {
    std::vector<Expr> row;
    for (const auto& s : r) row.push_back(parse(s));
    m.push_back(row);
  }
  return m;
}

inline VectorField parse_vector(const std::vector<std::string>& comps) {
  VectorField v;
  for (const auto& s : comps) v.push_back(parse(s));
  return v;
}

inline MetricField flat_metric(const std::vector<std::string>& names) {
  return euclidean_metric(Coordinates::of(names));
}

inline MetricField wave_metric() {
  return MetricField::from_lower(Coordinates::of({"x", "y"}), parse_matrix({{"x^(-2)", "0"}, {"0", "-1"}}));
}

inline MetricField conformal_exp_metric() {
  return MetricField::from_lower(Coordinates::of({"x", "y"}), parse_matrix({{"exp(2*x)", "0"}, {"0", "exp(2*x)"}}));
}

inline std::string desitter_denominator() { return "(1 + K/4*(-tau^2 + x^2 + y^2 + z^2))^2"; }

inline MetricField desitter_metric_symbolic() {
  const std::string d = desitter_denominator();
  return MetricField::from_lower(Coordinates::of({"tau", "x", "y", "z"}),
                                 parse_matrix({{"-1/" + d, "0", "0", "0"},
                                               {"0", "1/" + d, "0", "0"},
                                               {"0", "0", "1/" + d, "0"},
                                               {"0", "0", "0", "1/" + d}}));
}

/// Metric with components of degree <= 2 in x only, so d/dy is a KV.
inline MetricField random_x_metric(unsigned seed) {
  const AtomId x = symbol("x");
  RandomExpr gen({x}, seed);
  for (;;) {
    ExprMatrix g{{gen.poly(3, 2) + Expr(5), gen.poly(2, 2)}, {Expr(0), gen.poly(3, 2) - Expr(5)}};
    g[1][0] = g[0][1];
    if (!determinant(g).is_zero()) return MetricField::from_lower(Coordinates::of({"x", "y"}), g);
  }
}

}  // namespace liesym::testing
