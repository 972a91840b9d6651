#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liesym/prolongation/prolong.hpp"
#include "liesym/solver/collineations.hpp"

namespace liesym {

// ---- Noether symmetries ------------------------------------------------------

/// Opaque T(t) and W(t) with W' = T, and T'' = m T when m is set.
struct TimeFunctions {
  AtomId t = 0;
  std::string T, W;
  std::optional<Expr> m;

  static TimeFunctions make(AtomId t, std::optional<Expr> m);
  Expr T_expr() const { return Expr::func(T); }
  Expr W_expr() const { return Expr::func(W); }
  /// Rewrites W^(k) -> T^(k-1) and T^(k) -> m T^(k-2) until neither applies.
  Expr reduce(const Expr& e) const;
};

struct NoetherResult {
  std::string label;
  GeneratorODE generator;
  Expr gauge;
  /// Constraint after the constants were solved; zero when admitted.
  Expr residual;
  Expr integral;
  bool admitted = false;
  Expr psi;
  /// Case II only.
  std::optional<Expr> m;
  std::optional<TimeFunctions> time;
};

/// E = 1/2 g_ij x'^i x'^j + V.
Expr hamiltonian(const MetricField& g, const OdeJet& jet, const Expr& v);

/// Case I: X = 2 psi t d/dt + Y, G = p t, constraint L_Y V + 2 psi V + p = 0.
NoetherResult noether_case1(const MetricField& g, const VectorField& y, const Expr& v);
/// Case II from a potential S whose gradient is a gradient KV/HV:
/// X = 2 psi W d/dt + T S^{,i} d/dx^i, G = T' S + p W, with
/// L_{grad S} V + 2 psi V + m S + p = 0. When m is solved as 0 the concrete
/// choices T = 1 and T = t are returned; otherwise a single result with
/// opaque T.
std::vector<NoetherResult> noether_case2(const MetricField& g, const Expr& s, const Expr& v);

/// dI/dt along x'' = -Gamma x' x' - grad V, reduced by the T rules.
Expr noether_integral_derivative(const MetricField& g, const Expr& v, const NoetherResult& r);
/// X^[1]L + L D(xi) - D(G) for L = 1/2 g_ij x'^i x'^j - V, reduced by the T rules.
Expr noether_condition(const MetricField& g, const Expr& v, const NoetherResult& r);

struct NoetherAlgebra {
  std::vector<NoetherResult> results;
  /// Admitted generators, d/dt included; an opaque T(t) family counts twice.
  std::size_t dimension = 0;
};

/// Runs both cases over a homothetic basis and adds d/dt.
NoetherAlgebra noether_algebra(const MetricField& g, const AlgebraBasis& basis, const Expr& v);

// ---- Lie symmetries of x'' + Gamma x' x' = F -----------------------------------

struct OdeAlgebra {
  std::vector<GeneratorODE> generators;
};

/// Solves the determining system with eta^i = sum t^d c Y^i over the supplied
/// vectors and xi = sum t^d e s over 1 and the potentials of gradient KVs in
/// `vectors`, for d <= t_degree.
OdeAlgebra lie_ode_from_projective(const MetricField& g, const std::vector<Expr>& force,
                                   const std::vector<VectorField>& vectors, int t_degree);

// ---- heat equation with flux ----------------------------------------------------

struct HeatSymmetry {
  std::string label;
  /// "nongradient KV", "nongradient HV", "gradient KV" or "gradient HV".
  std::string case_tag;
  Expr q;
  GeneratorPDE generator;
  Expr residual;
  std::vector<AtomId> constants;
  /// a, or T and F; W is tied to T through `time`.
  std::vector<std::string> time_functions;
  std::string b;
  std::optional<TimeFunctions> time;
};

/// g^ij u_ij - Gamma^i u_i - u_t applied to e (a function of t and x).
Expr heat_operator(const MetricField& g, AtomId t, const Expr& e);

/// X = (2 c2 psi t + c1) d/dt + c2 Y + (a(t) u + b(t,x)) d/du.
HeatSymmetry heat_symmetry_nongradient(const MetricField& g, const VectorField& y, const Expr& q);
/// X = (2 psi W + c1) d/dt + T S^{,i} d/dx^i + ((-1/2 T' S + F(t)) u + b) d/du.
HeatSymmetry heat_symmetry_gradient(const MetricField& g, const Expr& s, const Expr& q);

/// Substitutes values for the free functions and constants of a heat symmetry.
GeneratorPDE instantiate(const HeatSymmetry& h, const AtomMap& constants, const std::vector<std::pair<std::string, Expr>>& functions);

/// Time ansatz: polynomials in t up to `degree`, optionally with exp(t) and exp(-t).
struct TimeAnsatz {
  int degree = 2;
  bool exponential = false;
  /// b an unknown constant instead of b = 0.
  bool constant_b = false;
};

/// Solves the constraint of a heat symmetry for a(t) (nongradient) or T, F
/// (gradient) within the ansatz. Returns a basis of generators.
std::vector<GeneratorPDE> solve_heat_ansatz(const MetricField& g, const HeatSymmetry& h, const TimeAnsatz& ansatz);

enum class FluxRow { Linear, Power, LogLinear, Exponential };
std::string to_string(FluxRow r);

/// One row of the flux table on a flat metric with Y = S^{,i} = x^i d/dx^i
/// (psi = 1) or, for the log row, a gradient KV K^{,i} = d/dx^1.
struct FluxTableRow {
  FluxRow row;
  Expr q;
  GeneratorPDE generator;
  std::string side_condition;
};

FluxTableRow flux_table_row(const MetricField& flat, FluxRow row, int power = 2);

struct SymmetryCount {
  std::string space;
  std::size_t n = 0;
  std::size_t formula = 0;
  /// Count of verified constructed generators, b d/du counted once.
  std::optional<std::size_t> enumerated;
  std::string convention;
};

/// space is "flat", "constcurv" or "1d".
SymmetryCount heat_symmetry_counts(const std::string& space, std::size_t n, bool enumerate = true);
/// n-dimensional constant curvature metric delta / (1 + K/4 r^2)^2.
MetricField constant_curvature_metric(std::size_t n, const Expr& k);

// ---- wave equation -------------------------------------------------------------

struct WaveGenerator {
  std::string label;
  GeneratorPDE generator;
  Expr lambda;
  bool verified = false;
};

struct WaveSymmetries {
  MetricField metric;
  PDEProblem problem;
  AlgebraBasis algebra;
  std::vector<WaveGenerator> generators;
};

/// c^2 u_xx - u_yy = 0 with c = c(x). Uses solve_homothetic at `degree` plus
/// any extra vectors that classify as KV/HV.
WaveSymmetries wave_symmetries(const Expr& c, int degree = 2, const std::vector<VectorField>& extra = {});

}  // namespace liesym
