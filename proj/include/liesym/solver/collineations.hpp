#pragma once

#include <string>
#include <vector>

#include "liesym/geometry/tensor.hpp"

namespace liesym {

struct AlgebraElement {
  std::string label;
  VectorField field;
  CollineationClass cls;
};

/// A basis of (part of) a collineation algebra. Elements are linearly
/// independent over the constants.
struct AlgebraBasis {
  Coordinates coords;
  std::vector<AlgebraElement> elements;
  /// False when the basis came from a bounded ansatz and completeness is unknown.
  bool complete = false;
  int degree = 0;

  std::size_t count(CollineationTag tag) const;
  std::size_t kv_count() const;
  std::size_t hv_count() const;
};

/// Polynomial ansatz of the given degree for L_X g = 2 psi g with psi an
/// unknown constant. Returns KVs first (gradient ones leading), then at most
/// one HV normalized to psi = 1. Every returned vector is re-verified.
AlgebraBasis solve_homothetic(const MetricField& g, int degree);

/// Table of Euclidean collineations S_I, X_IJ, H, A_IJ, P_I.
AlgebraBasis euclidean_catalog(std::size_t n);
/// Coordinate names used by the catalogs: x, y, z for n <= 3, else x1..xn.
std::vector<std::string> euclidean_names(std::size_t n);

/// de Sitter metric (-dtau^2 + dx^2 + dy^2 + dz^2) / (1 + K/4 (-tau^2 + x^2 + y^2 + z^2))^2.
MetricField desitter_metric(const Expr& k);
/// The ten KVs X_1..X_10; throws GeometryError when K is zero.
AlgebraBasis desitter_catalog(const Expr& k);

/// True when v is a constant linear combination of `span`.
bool in_span(const VectorField& v, const std::vector<VectorField>& span, const Coordinates& coords);
/// Dimension of the constant span of the given fields.
std::size_t span_dimension(const std::vector<VectorField>& fields, const Coordinates& coords);

}  // namespace liesym
