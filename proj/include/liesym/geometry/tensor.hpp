#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "liesym/symexpr/expr.hpp"
#include "liesym/symexpr/linear.hpp"

namespace liesym {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered coordinate symbols. When `time` is set it is not part of `vars`.
struct Coordinates {
  std::vector<AtomId> vars;
  std::optional<AtomId> time;

  static Coordinates of(const std::vector<std::string>& names);
  std::size_t size() const { return vars.size(); }
  std::vector<std::string> names() const;
};

using ExprMatrix = Matrix<Expr>;
/// Components X^i over a coordinate list.
using VectorField = std::vector<Expr>;
/// Rank (1,2) object T[i][j][k] = T^i_{jk}.
using Rank3 = std::vector<std::vector<std::vector<Expr>>>;

ExprMatrix identity_matrix(std::size_t n);
/// Exact inverse by fraction-free Gauss-Jordan; throws when singular.
ExprMatrix inverse(const ExprMatrix& m);
Expr determinant(const ExprMatrix& m);

class MetricField {
 public:
  static MetricField from_lower(Coordinates coords, ExprMatrix g);
  static MetricField from_upper(Coordinates coords, ExprMatrix a);

  const Coordinates& coords() const { return coords_; }
  const ExprMatrix& lower() const { return lower_; }
  const ExprMatrix& upper() const { return upper_; }
  std::size_t dim() const { return lower_.size(); }

  /// X_i = g_ij X^j.
  std::vector<Expr> lower_index(const VectorField& x) const;
  /// S^{,i} = g^ij S_{,j}.
  VectorField gradient(const Expr& s) const;

 private:
  Coordinates coords_;
  ExprMatrix lower_, upper_;
};

MetricField euclidean_metric(const Coordinates& coords);

struct Connection {
  Rank3 gamma;
  /// Gamma^i = g^jk Gamma^i_jk.
  std::vector<Expr> contracted;
};

Connection christoffel(const MetricField& g);

ExprMatrix lie_derivative_metric(const VectorField& x, const MetricField& g);
/// Lie derivative of a contravariant symmetric tensor A^ij.
ExprMatrix lie_derivative_upper(const VectorField& x, const Coordinates& coords, const ExprMatrix& a);
Rank3 lie_derivative_connection(const VectorField& x, const Coordinates& coords, const Connection& c);
VectorField commutator(const VectorField& x, const VectorField& y, const Coordinates& coords);

/// g_ij;k for every index triple; all zero for a Levi-Civita connection.
Rank3 metric_covariant_derivative(const MetricField& g, const Connection& c);

/// Hessian S_{;ij}.
ExprMatrix covariant_hessian(const Expr& s, const MetricField& g, const Connection& c);

bool is_zero(const ExprMatrix& m);
bool is_zero(const Rank3& t);
bool is_zero(const std::vector<Expr>& v);
/// True when e does not depend on any coordinate.
bool is_constant_on(const Expr& e, const Coordinates& coords);

/// Antiderivative in one variable within the representable fragment.
std::optional<Expr> antiderivative(const Expr& e, AtomId var);

struct Potential {
  bool closed = false;
  /// Set when closed and an antiderivative exists in the fragment.
  std::optional<Expr> value;
};

/// Potential S with S_{,i} = w_i when the covector w is closed.
Potential integrate_covector(const std::vector<Expr>& w, const Coordinates& coords);

enum class CollineationTag { None, KV, GradientKV, HV, GradientHV, SCKV, ProperCKV, AC, PC, SPC };
std::string to_string(CollineationTag t);

struct CollineationClass {
  CollineationTag tag = CollineationTag::None;
  bool conformal = false;
  /// L_X g = 2 psi g when conformal.
  Expr psi;
  bool projective = false;
  /// phi_{,j} with L_X Gamma^i_jk = phi_{,j} delta^i_k + phi_{,k} delta^i_j.
  std::vector<Expr> phi_gradient;
  std::optional<Expr> phi;
  bool gradient = false;
  /// Gradient potential; unset when closed but not representable.
  std::optional<Expr> potential;

  bool is_kv() const { return tag == CollineationTag::KV || tag == CollineationTag::GradientKV; }
  bool is_hv() const { return tag == CollineationTag::HV || tag == CollineationTag::GradientHV; }
};

CollineationClass classify_collineation(const VectorField& x, const MetricField& g);

/// g^jk L_X Gamma^i_jk as a vector.
std::vector<Expr> contracted_lie_connection(const VectorField& x, const MetricField& g, const Connection& c);

/// Requires L_X g = factor * g (throws otherwise); checks
/// g^jk L_X Gamma^i_jk = ((2 - n)/2) factor^{,i}.
bool lemma2_check(const VectorField& x, const MetricField& g, const Expr& factor);
/// Same precondition; checks g^jk L_X Gamma^i_jk = g^jk X^i_{,jk} + Gamma^i_{,l} X^l
/// - X^i_{,l} Gamma^l + factor Gamma^i.
bool lemma1b_check(const VectorField& x, const MetricField& g, const Expr& factor);

}  // namespace liesym
