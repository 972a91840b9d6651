#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liesym/geometry/tensor.hpp"

namespace liesym {

/// Independent variables x^i, the dependent variable u and the formal jet
/// symbols u_i and u_ij (u_ij and u_ji are the same atom).
struct JetSpace {
  std::vector<AtomId> vars;
  AtomId u = 0;
  std::vector<AtomId> u1;
  std::vector<std::vector<AtomId>> u2;

  static JetSpace make(const std::vector<AtomId>& vars, std::string_view dependent = "u");
  std::size_t dim() const { return vars.size(); }
  /// u_ij for i <= j.
  std::vector<AtomId> second_order() const;
  /// Total derivative D_i of an expression in (x, u, u_j); throws when e
  /// involves second-order jets.
  Expr total_derivative(const Expr& e, std::size_t i) const;
};

/// X = xi^i(x,u) d/dx^i + eta(x,u) d/du.
struct GeneratorPDE {
  std::vector<Expr> xi;
  Expr eta;
};

struct Prolongation {
  std::vector<Expr> eta1;
  ExprMatrix eta2;
};

/// Explicit second prolongation formula.
Prolongation prolong2(const JetSpace& jet, const GeneratorPDE& x);
/// Total-derivative recursion eta_i = D_i eta - u_k D_i xi^k,
/// eta_ij = D_j eta_i - u_ik D_j xi^k.
Prolongation prolong2_recursive(const JetSpace& jet, const GeneratorPDE& x);

/// A^ij u_ij - F = 0 with F either opaque F(x,u,u_i) or B^k u_k + f.
struct PDEProblem {
  enum class Kind { GeneralF, LinearF };
  JetSpace jet;
  ExprMatrix a;
  Kind kind = Kind::LinearF;
  std::vector<Expr> b;
  Expr f;
  /// Opaque F atom for the general kind.
  std::string f_name;
  /// Index of the evolution variable t (A^tt = A^ti = 0 expected).
  std::optional<std::size_t> time_index;

  static PDEProblem linear(JetSpace jet, ExprMatrix a, std::vector<Expr> b, Expr f);
  /// F is declared as an opaque function named `name` of (x, u, u_i).
  static PDEProblem general(JetSpace jet, ExprMatrix a, std::string_view name = "F");

  Expr F() const;
  /// H = A^ij u_ij - F.
  Expr operator_expr() const;
  /// True when A^tt = A^ti = 0 and the spatial block is nondegenerate.
  bool has_time_split() const;
};

class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// g^ij u_ij - Gamma^i u_i - u_t - q = 0 over (t, x^i).
PDEProblem heat_problem(const MetricField& g, const Expr& q, std::string_view time = "t");

/// X^[2](H).
Expr apply_prolonged(const PDEProblem& p, const GeneratorPDE& x);

struct SymmetryCheck {
  bool is_symmetry = false;
  Expr lambda;
  /// Nonzero coefficients of X^[2]H - lambda H by jet monomial.
  std::vector<std::pair<std::string, Expr>> residuals;
};

SymmetryCheck verify_symmetry(const PDEProblem& p, const GeneratorPDE& x);

struct DeterminingEquation {
  std::string tag;
  /// Jet or velocity monomial the equation was read off from, or an index label.
  std::string source;
  Expr residual;
};

struct DeterminingSystem {
  std::vector<DeterminingEquation> equations;
  std::optional<Expr> lambda;

  bool vanishes() const;
  std::vector<Expr> with_tag(std::string_view tag) const;
  std::vector<const DeterminingEquation*> nonzero() const;
};

/// Opaque xi^k and eta with arguments x (and u when requested).
GeneratorPDE generic_generator(const JetSpace& jet, bool depends_on_u = true);
/// Opaque xi^k(x) with eta = a(x) u + b(x).
GeneratorPDE generic_linear_generator(const JetSpace& jet);

/// Split of X^[2]H - lambda H with lambda an opaque lambda(x,u).
/// Tags: Po.1 (u_ij u_k), Po.2 (u_ij, per ordered pair), Po.2a (cubic in
/// u_k, F-free part), GPE.30 (remainder).
DeterminingSystem determining_general(const PDEProblem& p, const GeneratorPDE& x);

enum class LambdaMode { Solve, Opaque };

/// Determining equations for A^ij u_ij - B^k u_k - f = 0, tags GPE.42 .. GPE.47
/// and GPE.46a under the time split. In Solve mode lambda is read off the
/// first nonzero A^ij entry of GPE.44.
DeterminingSystem determining_linear(const PDEProblem& p, const GeneratorPDE& x,
                                     LambdaMode mode = LambdaMode::Solve);

/// True when the equations, linear and homogeneous in `atoms`, force all of
/// them to vanish (full column rank over the coefficient field).
bool implies_zero(const std::vector<Expr>& eqs, const std::vector<AtomId>& atoms);

// ---- second order ODE systems ----------------------------------------------

/// Time t, positions x^i and velocity symbols x^i_dot.
struct OdeJet {
  AtomId t = 0;
  std::vector<AtomId> x;
  std::vector<AtomId> v;

  static OdeJet make(const Coordinates& coords, std::string_view time = "t");
  /// Total time derivative along x'' = acc.
  Expr total_derivative(const Expr& e, const std::vector<Expr>& acc) const;
};

/// X = xi(t,x) d/dt + eta^i(t,x) d/dx^i.
struct GeneratorODE {
  Expr xi;
  std::vector<Expr> eta;
};

/// P^i_{j1..jm}, stored as (i, j1..jm) -> component for nonzero entries.
struct ForceTensor {
  int order = 0;
  std::vector<std::pair<std::vector<std::size_t>, Expr>> entries;

  static ForceTensor vector(const std::vector<Expr>& p);
  static ForceTensor matrix(const ExprMatrix& p);
};

/// x''^i = -Gamma^i_jk x'^j x'^k - sum P^i_J x'^J.
std::vector<Expr> ode_acceleration(const OdeJet& jet, const Connection& c, const std::vector<ForceTensor>& forces);

/// Prolonged condition split by velocity monomials. When every force has
/// order zero the degree 0..3 groups carry the tags de.13 .. de.16; otherwise
/// the groups are tagged "deg<k>".
DeterminingSystem determining_ode(const OdeJet& jet, const Connection& c, const std::vector<ForceTensor>& forces,
                                  const GeneratorODE& x);

}  // namespace liesym
