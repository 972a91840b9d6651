#include "liesym/prolongation/prolong.hpp"

#include <algorithm>
#include <set>

namespace liesym {

namespace {

bool single_char_names(const std::vector<AtomId>& vars) {
  for (AtomId v : vars)
    if (atom_info(v).name.size() != 1) return false;
  return true;
}

Expr at(AtomId a) { return Expr::atom(a); }

}  // namespace

JetSpace JetSpace::make(const std::vector<AtomId>& vars, std::string_view dependent) {
  JetSpace j;
  j.vars = vars;
  j.u = symbol(dependent);
  const std::string base = std::string(dependent) + "_";
  const bool compact = single_char_names(vars);
  const std::size_t n = vars.size();
  j.u2.assign(n, std::vector<AtomId>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string ni = atom_info(vars[i]).name;
    j.u1.push_back(symbol(base + ni));
    for (std::size_t k = i; k < n; ++k) {
      const std::string nk = atom_info(vars[k]).name;
      const AtomId a = symbol(compact ? base + ni + nk : base + ni + "_" + nk);
      j.u2[i][k] = a;
      j.u2[k][i] = a;
    }
  }
  return j;
}

std::vector<AtomId> JetSpace::second_order() const {
  std::vector<AtomId> out;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t k = i; k < dim(); ++k) out.push_back(u2[i][k]);
  return out;
}

Expr JetSpace::total_derivative(const Expr& e, std::size_t i) const {
  for (AtomId a : second_order())
    if (e.contains_atom(a)) throw std::invalid_argument("total derivative of a second order expression");
  Expr out = diff(e, vars[i]) + at(u1[i]) * diff(e, u);
  for (std::size_t k = 0; k < dim(); ++k) {
    Expr d = diff(e, u1[k]);
    if (!d.is_zero()) out += at(u2[i][k]) * d;
  }
  return out;
}

Prolongation prolong2(const JetSpace& jet, const GeneratorPDE& x) {
  const std::size_t n = jet.dim();
  const auto& v = jet.vars;
  const AtomId u = jet.u;
  std::vector<Expr> ui, xi_u(n), xi_uu(n);
  for (AtomId a : jet.u1) ui.push_back(at(a));
  auto uij = [&](std::size_t i, std::size_t j) { return at(jet.u2[i][j]); };
  // dxi[k][i] = xi^k_{,i}
  ExprMatrix dxi(n, std::vector<Expr>(n));
  for (std::size_t k = 0; k < n; ++k) {
    xi_u[k] = diff(x.xi[k], u);
    xi_uu[k] = diff(xi_u[k], u);
    for (std::size_t i = 0; i < n; ++i) dxi[k][i] = diff(x.xi[k], v[i]);
  }
  const Expr eta_u = diff(x.eta, u);
  const Expr eta_uu = diff(eta_u, u);
  std::vector<Expr> eta_i(n), eta_ui(n);
  for (std::size_t i = 0; i < n; ++i) {
    eta_i[i] = diff(x.eta, v[i]);
    eta_ui[i] = diff(eta_u, v[i]);
  }
  Expr uxi_u(0);  // u_k xi^k_u
  for (std::size_t k = 0; k < n; ++k) uxi_u += ui[k] * xi_u[k];

  Prolongation p;
  p.eta1.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Expr e = eta_i[i] + ui[i] * eta_u - ui[i] * uxi_u;
    for (std::size_t j = 0; j < n; ++j) e -= dxi[j][i] * ui[j];
    p.eta1[i] = e;
  }
  p.eta2.assign(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Expr e = diff(eta_i[i], v[j]) + eta_ui[i] * ui[j] + eta_ui[j] * ui[i] + eta_uu * ui[i] * ui[j] +
               eta_u * uij(i, j);
      Expr uxi_uu(0);
      for (std::size_t k = 0; k < n; ++k) {
        e -= diff(dxi[k][i], v[j]) * ui[k];
        e -= (diff(xi_u[k], v[i]) * ui[j] + diff(xi_u[k], v[j]) * ui[i]) * ui[k];
        e -= dxi[k][j] * uij(i, k) + dxi[k][i] * uij(k, j);
        e -= xi_u[k] * (uij(i, j) * ui[k] + ui[i] * uij(j, k) + uij(i, k) * ui[j]);
        uxi_uu += ui[k] * xi_uu[k];
      }
      e -= ui[i] * ui[j] * uxi_uu;
      p.eta2[i][j] = e;
      p.eta2[j][i] = e;
    }
  return p;
}

Prolongation prolong2_recursive(const JetSpace& jet, const GeneratorPDE& x) {
  const std::size_t n = jet.dim();
  Prolongation p;
  ExprMatrix dxi(n, std::vector<Expr>(n));  // D_i xi^k
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) dxi[k][i] = jet.total_derivative(x.xi[k], i);
  for (std::size_t i = 0; i < n; ++i) {
    Expr e = jet.total_derivative(x.eta, i);
    for (std::size_t k = 0; k < n; ++k) e -= at(jet.u1[k]) * dxi[k][i];
    p.eta1.push_back(e);
  }
  p.eta2.assign(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr e = jet.total_derivative(p.eta1[i], j);
      for (std::size_t k = 0; k < n; ++k) e -= at(jet.u2[i][k]) * dxi[k][j];
      p.eta2[i][j] = e;
    }
  return p;
}

// ---- problems ---------------------------------------------------------------

PDEProblem PDEProblem::linear(JetSpace jet, ExprMatrix a, std::vector<Expr> b, Expr f) {
  const std::size_t n = jet.dim();
  if (a.size() != n || b.size() != n) throw ProblemError("coefficient sizes do not match the variables");
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw ProblemError("A is not square");
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j] != a[j][i]) throw ProblemError("A is not symmetric");
      any = any || !a[i][j].is_zero();
    }
  }
  if (!any) throw ProblemError("every A^ij vanishes; the equation is not of second order");
  PDEProblem p;
  p.jet = std::move(jet);
  p.a = std::move(a);
  p.b = std::move(b);
  p.f = std::move(f);
  p.kind = Kind::LinearF;
  return p;
}

PDEProblem PDEProblem::general(JetSpace jet, ExprMatrix a, std::string_view name) {
  std::vector<Expr> zero(jet.dim(), Expr(0));
  PDEProblem p = linear(std::move(jet), std::move(a), zero, Expr(0));
  std::vector<AtomId> args = p.jet.vars;
  args.push_back(p.jet.u);
  args.insert(args.end(), p.jet.u1.begin(), p.jet.u1.end());
  p.f_name = declare_function_unique(name, args);
  p.kind = Kind::GeneralF;
  return p;
}

Expr PDEProblem::F() const {
  if (kind == Kind::GeneralF) return Expr::func(f_name);
  Expr out = f;
  for (std::size_t k = 0; k < jet.dim(); ++k)
    if (!b[k].is_zero()) out += b[k] * at(jet.u1[k]);
  return out;
}

Expr PDEProblem::operator_expr() const {
  Expr h = -F();
  for (std::size_t i = 0; i < jet.dim(); ++i)
    for (std::size_t j = 0; j < jet.dim(); ++j)
      if (!a[i][j].is_zero()) h += a[i][j] * at(jet.u2[i][j]);
  return h;
}

bool PDEProblem::has_time_split() const {
  if (!time_index) return false;
  const std::size_t t = *time_index;
  for (std::size_t i = 0; i < jet.dim(); ++i)
    if (!a[t][i].is_zero()) return false;
  ExprMatrix s;
  for (std::size_t i = 0; i < jet.dim(); ++i) {
    if (i == t) continue;
    std::vector<Expr> row;
    for (std::size_t j = 0; j < jet.dim(); ++j)
      if (j != t) row.push_back(a[i][j]);
    s.push_back(row);
  }
  return !s.empty() && !determinant(s).is_zero();
}

PDEProblem heat_problem(const MetricField& g, const Expr& q, std::string_view time) {
  const std::size_t n = g.dim();
  std::vector<AtomId> vars{symbol(time)};
  vars.insert(vars.end(), g.coords().vars.begin(), g.coords().vars.end());
  ExprMatrix a(n + 1, std::vector<Expr>(n + 1, Expr(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i + 1][j + 1] = g.upper()[i][j];
  const Connection c = christoffel(g);
  std::vector<Expr> b{Expr(1)};
  b.insert(b.end(), c.contracted.begin(), c.contracted.end());
  PDEProblem p = PDEProblem::linear(JetSpace::make(vars), a, b, q);
  p.time_index = 0;
  return p;
}

// ---- symmetry condition -------------------------------------------------------

Expr apply_prolonged(const PDEProblem& p, const GeneratorPDE& x) {
  const JetSpace& jet = p.jet;
  const Expr h = p.operator_expr();
  const Prolongation pr = prolong2(jet, x);
  Expr out = x.eta * diff(h, jet.u);
  for (std::size_t k = 0; k < jet.dim(); ++k) {
    if (!x.xi[k].is_zero()) out += x.xi[k] * diff(h, jet.vars[k]);
    Expr d = diff(h, jet.u1[k]);
    if (!d.is_zero()) out += pr.eta1[k] * d;
    for (std::size_t j = k; j < jet.dim(); ++j) {
      Expr d2 = diff(h, jet.u2[k][j]);
      if (!d2.is_zero()) out += pr.eta2[k][j] * d2;
    }
  }
  return out;
}

namespace {

std::vector<AtomId> jet_atoms(const JetSpace& jet) {
  std::vector<AtomId> out = jet.u1;
  auto s = jet.second_order();
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

// Solves the coefficient of the first nonzero u_ab in X^[2]H = lambda H.
Expr lambda_from_pivot(const PDEProblem& p, const Expr& xh) {
  const Expr h = p.operator_expr();
  for (AtomId a : p.jet.second_order()) {
    const Expr c = coefficient(h, a, 1);
    if (!c.is_zero()) return coefficient(xh, a, 1) / c;
  }
  throw ProblemError("every A^ij vanishes");
}

int multiplicity(const JetSpace& jet, AtomId a) {
  for (std::size_t i = 0; i < jet.dim(); ++i)
    for (std::size_t j = i + 1; j < jet.dim(); ++j)
      if (jet.u2[i][j] == a) return 2;
  return 1;
}

std::string pair_label(const JetSpace& jet, AtomId a) { return atom_info(a).name + " (" + std::to_string(multiplicity(jet, a)) + ")"; }

}  // namespace

SymmetryCheck verify_symmetry(const PDEProblem& p, const GeneratorPDE& x) {
  const Expr xh = apply_prolonged(p, x);
  SymmetryCheck out;
  out.lambda = lambda_from_pivot(p, xh);
  const Expr r = xh - out.lambda * p.operator_expr();
  out.is_symmetry = r.is_zero();
  if (!out.is_symmetry) {
    std::vector<AtomId> vars = jet_atoms(p.jet);
    try {
      for (auto& [m, c] : collect_monomials(r, vars))
        if (!c.is_zero()) out.residuals.emplace_back(m.is_one() ? "1" : m.to_string(), c);
    } catch (const NotPolynomialError&) {
      out.residuals.emplace_back("all", r);
    }
  }
  return out;
}

bool DeterminingSystem::vanishes() const {
  for (const auto& e : equations)
    if (!e.residual.is_zero()) return false;
  return true;
}

std::vector<Expr> DeterminingSystem::with_tag(std::string_view tag) const {
  std::vector<Expr> out;
  for (const auto& e : equations)
    if (e.tag == tag) out.push_back(e.residual);
  return out;
}

std::vector<const DeterminingEquation*> DeterminingSystem::nonzero() const {
  std::vector<const DeterminingEquation*> out;
  for (const auto& e : equations)
    if (!e.residual.is_zero()) out.push_back(&e);
  return out;
}

GeneratorPDE generic_generator(const JetSpace& jet, bool depends_on_u) {
  std::vector<AtomId> args = jet.vars;
  if (depends_on_u) args.push_back(jet.u);
  GeneratorPDE g;
  for (AtomId v : jet.vars) g.xi.push_back(Expr::func(declare_function_unique("xi_" + atom_info(v).name, args)));
  g.eta = Expr::func(declare_function_unique("eta", args));
  return g;
}

GeneratorPDE generic_linear_generator(const JetSpace& jet) {
  GeneratorPDE g = generic_generator(jet, false);
  const Expr a = Expr::func(declare_function_unique("a", jet.vars));
  const Expr b = Expr::func(declare_function_unique("b", jet.vars));
  g.eta = a * at(jet.u) + b;
  return g;
}

DeterminingSystem determining_general(const PDEProblem& p, const GeneratorPDE& x) {
  const JetSpace& jet = p.jet;
  std::vector<AtomId> largs = jet.vars;
  largs.push_back(jet.u);
  const Expr lambda = Expr::func(declare_function_unique("lambda", largs));
  const Expr r = apply_prolonged(p, x) - lambda * p.operator_expr();
  DeterminingSystem sys;
  sys.lambda = lambda;
  const auto second = jet.second_order();
  Expr rest(0);
  for (auto& [m, c] : collect_monomials(r, second)) {
    if (m.is_one()) {
      rest = c;
      continue;
    }
    const AtomId a = m.factors()[0].first;
    for (auto& [m1, c1] : collect_monomials(c, jet.u1)) {
      if (m1.is_one())
        sys.equations.push_back({"Po.2", pair_label(jet, a), c1 / Expr(multiplicity(jet, a))});
      else
        sys.equations.push_back({"Po.1", m.to_string() + "*" + m1.to_string(), c1});
    }
  }
  // F-free cubic part of the remainder.
  Expr with_f(0), free(0);
  for (const auto& t : rest.num().terms()) {
    bool has_f = false;
    for (const auto& [a, k] : t.mono.factors())
      has_f = has_f || (atom_info(a).kind == AtomKind::Function && atom_info(a).name == p.f_name);
    (has_f ? with_f : free) += Expr::fraction(Poly::monomial(t.mono, t.coef), rest.den());
  }
  Expr remainder = with_f;
  for (auto& [m, c] : collect_monomials(free, jet.u1)) {
    if (m.degree() == 3)
      sys.equations.push_back({"Po.2a", m.to_string(), c});
    else
      remainder += Expr::from_poly(Poly::monomial(m)) * c;
  }
  sys.equations.push_back({"GPE.30", "remainder", remainder});
  return sys;
}

DeterminingSystem determining_linear(const PDEProblem& p, const GeneratorPDE& x, LambdaMode mode) {
  if (p.kind != PDEProblem::Kind::LinearF) throw ProblemError("determining_linear needs B^k and f");
  const JetSpace& jet = p.jet;
  const std::size_t n = jet.dim();
  const Expr xh = apply_prolonged(p, x);
  DeterminingSystem sys;
  Expr lambda;
  if (mode == LambdaMode::Solve) {
    lambda = lambda_from_pivot(p, xh);
  } else {
    lambda = Expr::func(declare_function_unique("lambda", jet.vars));
  }
  sys.lambda = lambda;
  const Expr r = xh - lambda * p.operator_expr();
  const auto second = jet.second_order();
  for (auto& [m, c] : collect_monomials(r, second)) {
    if (m.is_one()) {
      for (auto& [m1, c1] : collect_monomials(c, jet.u1)) {
        const std::string src = m1.is_one() ? "1" : m1.to_string();
        switch (m1.degree()) {
          case 0: sys.equations.push_back({"GPE.42", src, c1}); break;
          case 1: sys.equations.push_back({"GPE.43", src, -c1}); break;
          case 2: sys.equations.push_back({"GPE.45", src, c1}); break;
          default: sys.equations.push_back({"GPE.46", src, c1}); break;
        }
      }
      continue;
    }
    const AtomId a = m.factors()[0].first;
    for (auto& [m1, c1] : collect_monomials(c, jet.u1)) {
      if (m1.is_one())
        sys.equations.push_back({"GPE.44", pair_label(jet, a), c1 / Expr(multiplicity(jet, a))});
      else
        sys.equations.push_back({"GPE.46", m.to_string() + "*" + m1.to_string(), c1});
    }
  }
  const Expr eta_u = diff(x.eta, jet.u);
  const Expr eta_uu = diff(eta_u, jet.u);
  sys.equations.push_back({"GPE.45", "eta_uu", eta_uu});
  bool xi_free_of_u = true;
  for (std::size_t k = 0; k < n; ++k) {
    Expr d = diff(x.xi[k], jet.u);
    xi_free_of_u = xi_free_of_u && d.is_zero();
    sys.equations.push_back({"GPE.46", "xi^" + atom_info(jet.vars[k]).name + "_u", d});
  }
  if (p.has_time_split()) {
    const std::size_t t = *p.time_index;
    for (std::size_t i = 0; i < n; ++i)
      if (i != t)
        sys.equations.push_back(
            {"GPE.46a", "xi^t_" + atom_info(jet.vars[i]).name, diff(x.xi[t], jet.vars[i])});
  }
  if (eta_uu.is_zero() && xi_free_of_u) {
    // A^ij xi^k_ij - 2 A^ik a_i + [xi, B]^k + (a - lambda) B^k + (a u + b) B^k_u
    const Expr a = eta_u;
    for (std::size_t k = 0; k < n; ++k) {
      Expr e = (a - lambda) * p.b[k] + x.eta * diff(p.b[k], jet.u);
      for (std::size_t i = 0; i < n; ++i) {
        e -= Expr(2) * p.a[i][k] * diff(a, jet.vars[i]);
        e += x.xi[i] * diff(p.b[k], jet.vars[i]) - p.b[i] * diff(x.xi[k], jet.vars[i]);
        for (std::size_t j = 0; j < n; ++j)
          if (!p.a[i][j].is_zero()) e += p.a[i][j] * diff(diff(x.xi[k], jet.vars[i]), jet.vars[j]);
      }
      sys.equations.push_back({"GPE.47", atom_info(jet.u1[k]).name, e});
    }
  }
  return sys;
}

bool implies_zero(const std::vector<Expr>& eqs, const std::vector<AtomId>& atoms) {
  Matrix<Expr> m;
  for (const Expr& e : eqs) {
    std::vector<Expr> row(atoms.size(), Expr(0));
    Expr rest = e;
    for (auto& [mono, c] : collect_monomials(e, atoms)) {
      if (mono.is_one()) {
        if (!c.is_zero()) throw NonlinearError("equation is not homogeneous in the given atoms");
        continue;
      }
      if (mono.degree() != 1) throw NonlinearError("equation is nonlinear in the given atoms");
      const AtomId a = mono.factors()[0].first;
      row[static_cast<std::size_t>(std::find(atoms.begin(), atoms.end(), a) - atoms.begin())] = c;
    }
    m.push_back(row);
  }
  if (m.empty()) return atoms.empty();
  return rank(m, atoms.size()) == atoms.size();
}

// ---- ODE branch ----------------------------------------------------------------

OdeJet OdeJet::make(const Coordinates& coords, std::string_view time) {
  OdeJet j;
  j.t = symbol(time);
  j.x = coords.vars;
  for (AtomId a : coords.vars) j.v.push_back(symbol(atom_info(a).name + "_dot"));
  return j;
}

Expr OdeJet::total_derivative(const Expr& e, const std::vector<Expr>& acc) const {
  Expr out = diff(e, t);
  for (std::size_t k = 0; k < x.size(); ++k) {
    Expr d = diff(e, x[k]);
    if (!d.is_zero()) out += at(v[k]) * d;
    Expr dv = diff(e, v[k]);
    if (!dv.is_zero()) out += acc[k] * dv;
  }
  return out;
}

ForceTensor ForceTensor::vector(const std::vector<Expr>& p) {
  ForceTensor f;
  f.order = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!p[i].is_zero()) f.entries.push_back({{i}, p[i]});
  return f;
}

ForceTensor ForceTensor::matrix(const ExprMatrix& p) {
  ForceTensor f;
  f.order = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p[i].size(); ++j)
      if (!p[i][j].is_zero()) f.entries.push_back({{i, j}, p[i][j]});
  return f;
}

std::vector<Expr> ode_acceleration(const OdeJet& jet, const Connection& c, const std::vector<ForceTensor>& forces) {
  const std::size_t n = jet.x.size();
  std::vector<Expr> acc(n, Expr(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!c.gamma[i][j][k].is_zero()) acc[i] -= c.gamma[i][j][k] * at(jet.v[j]) * at(jet.v[k]);
  for (const auto& f : forces)
    for (const auto& [idx, val] : f.entries) {
      Expr term = val;
      for (std::size_t r = 1; r < idx.size(); ++r) term *= at(jet.v[idx[r]]);
      acc[idx[0]] -= term;
    }
  return acc;
}

namespace {

Rational multinomial(const Monomial& m) {
  mpz_class num = 1, den = 1;
  int total = 0;
  for (const auto& [a, k] : m.factors()) {
    for (int r = 1; r <= k; ++r) {
      ++total;
      num *= total;
      den *= r;
    }
  }
  return Rational(num, den);
}

}  // namespace

DeterminingSystem determining_ode(const OdeJet& jet, const Connection& c, const std::vector<ForceTensor>& forces,
                                  const GeneratorODE& x) {
  const std::size_t n = jet.x.size();
  const std::vector<Expr> acc = ode_acceleration(jet, c, forces);
  const Expr dxi = jet.total_derivative(x.xi, acc);
  std::vector<Expr> eta1(n);
  for (std::size_t i = 0; i < n; ++i) eta1[i] = jet.total_derivative(x.eta[i], acc) - at(jet.v[i]) * dxi;
  bool classic = true;
  for (const auto& f : forces) classic = classic && f.order == 0;
  DeterminingSystem sys;
  for (std::size_t i = 0; i < n; ++i) {
    Expr cond = jet.total_derivative(eta1[i], acc) - acc[i] * dxi;
    cond -= x.xi * diff(acc[i], jet.t);
    for (std::size_t k = 0; k < n; ++k) {
      cond -= x.eta[k] * diff(acc[i], jet.x[k]);
      cond -= eta1[k] * diff(acc[i], jet.v[k]);
    }
    for (auto& [m, coef] : collect_monomials(cond, jet.v)) {
      const int d = m.degree();
      const std::string tag = classic && d <= 3 ? "de.1" + std::to_string(3 + d) : "deg" + std::to_string(d);
      const std::string src = atom_info(jet.x[i]).name + ": " + (m.is_one() ? std::string("1") : m.to_string());
      sys.equations.push_back({tag, src, coef / Expr(multinomial(m))});
    }
  }
  return sys;
}

}  // namespace liesym
