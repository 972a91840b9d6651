#include "liesym/builder/symmetries.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace liesym {

namespace {

Expr at(AtomId a) { return Expr::atom(a); }

const Rational kHalf(1, 2);

// Symbol `base` (or base_2, ...) not used by any of the given expressions.
AtomId fresh_symbol(const std::string& base, const std::vector<Expr>& avoid) {
  for (int k = 1;; ++k) {
    const std::string name = k == 1 ? base : base + "_" + std::to_string(k);
    const auto id = find_symbol(name);
    if (!id) return symbol(name);
    bool used = false;
    for (const Expr& e : avoid) used = used || e.contains_atom(*id);
    if (!used) return *id;
  }
}

// Atoms that are neither unknowns nor depend on any of `vars`.
std::vector<AtomId> parameters(const std::vector<Expr>& eqs, const std::vector<AtomId>& vars,
                               const std::vector<AtomId>& unknowns) {
  std::set<AtomId> out;
  for (const Expr& e : eqs)
    for (AtomId a : e.atoms()) {
      if (std::find(unknowns.begin(), unknowns.end(), a) != unknowns.end()) continue;
      bool dep = false;
      for (AtomId v : vars) dep = dep || atom_depends_on(a, v);
      if (!dep) out.insert(a);
    }
  return {out.begin(), out.end()};
}

Expr directional(const VectorField& y, const Expr& f, const Coordinates& coords) {
  Expr out(0);
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (!y[i].is_zero()) out += y[i] * diff(f, coords.vars[i]);
  return out;
}

std::vector<AtomId> with_time(AtomId t, const Coordinates& coords) {
  std::vector<AtomId> v{t};
  v.insert(v.end(), coords.vars.begin(), coords.vars.end());
  return v;
}

Coordinates coords_of(const std::vector<AtomId>& vars) {
  Coordinates c;
  c.vars = vars;
  return c;
}

AtomId time_symbol(const MetricField& g) {
  const AtomId t = symbol("t");
  for (AtomId v : g.coords().vars)
    if (v == t) throw ProblemError("the metric coordinates must not include t");
  return t;
}

std::optional<Integer> integer_sqrt(const Rational& r) {
  if (r <= 0 || r.get_den() != 1) return std::nullopt;
  const Integer n = r.get_num();
  if (!mpz_perfect_square_p(n.get_mpz_t())) return std::nullopt;
  Integer s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  return s;
}

Expr exp_t(AtomId t, long k) {
  Expr e = Expr::exp(t);
  return k >= 0 ? e.pow(static_cast<int>(k)) : e.inverse().pow(static_cast<int>(-k));
}

Expr noether_integral(const MetricField& g, const OdeJet& jet, const GeneratorODE& x, const Expr& gauge,
                      const Expr& v) {
  Expr out = x.xi * hamiltonian(g, jet, v) + gauge;
  const std::size_t n = g.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!x.eta[i].is_zero() && !g.lower()[i][j].is_zero()) out -= g.lower()[i][j] * x.eta[i] * at(jet.v[j]);
  return out;
}

}  // namespace

// ---- time functions ------------------------------------------------------------

TimeFunctions TimeFunctions::make(AtomId t, std::optional<Expr> m) {
  TimeFunctions tf;
  tf.t = t;
  tf.T = declare_function_unique("T", {t});
  tf.W = declare_function_unique("W", {t});
  tf.m = std::move(m);
  return tf;
}

Expr TimeFunctions::reduce(const Expr& e) const {
  auto t_deriv = [&](int k) -> Expr {
    if (!m || k < 2) return at(function_atom(T, {k}));
    return m->pow(k / 2) * at(function_atom(T, {k % 2}));
  };
  return substitute(e, [&](AtomId a) -> std::optional<Expr> {
    const AtomInfo& info = atom_info(a);
    if (info.kind != AtomKind::Function || info.orders.size() != 1) return std::nullopt;
    const int k = info.orders[0];
    if (info.name == W && k >= 1) return t_deriv(k - 1);
    if (info.name == T && m && k >= 2) return t_deriv(k);
    return std::nullopt;
  });
}

// ---- Noether -------------------------------------------------------------------

Expr hamiltonian(const MetricField& g, const OdeJet& jet, const Expr& v) {
  Expr out = v;
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = 0; j < g.dim(); ++j)
      if (!g.lower()[i][j].is_zero()) out += Expr(kHalf) * g.lower()[i][j] * at(jet.v[i]) * at(jet.v[j]);
  return out;
}

NoetherResult noether_case1(const MetricField& g, const VectorField& y, const Expr& v) {
  const CollineationClass cls = classify_collineation(y, g);
  if (!cls.is_kv() && !cls.is_hv()) throw GeometryError("Case I needs a KV or HV of the metric");
  const OdeJet jet = OdeJet::make(g.coords(), "t");
  const AtomId p = fresh_symbol("p", {v});
  const Expr r = directional(y, v, g.coords()) + Expr(2) * cls.psi * v + at(p);
  const LinearSolution sol =
      solve(linear_system({r}, {p}, parameters({r}, with_time(jet.t, g.coords()), {p})));
  const Expr pv = sol.consistent ? sol.particular[0] : at(p);

  NoetherResult out;
  out.label = "I";
  out.psi = cls.psi;
  out.generator.xi = Expr(2) * cls.psi * at(jet.t);
  out.generator.eta = y;
  out.gauge = pv * at(jet.t);
  out.residual = substitute(r, AtomMap{{p, pv}});
  out.admitted = out.residual.is_zero();
  out.integral = noether_integral(g, jet, out.generator, out.gauge, v);
  return out;
}

std::vector<NoetherResult> noether_case2(const MetricField& g, const Expr& s, const Expr& v) {
  const VectorField y = g.gradient(s);
  const CollineationClass cls = classify_collineation(y, g);
  if (!cls.is_kv() && !cls.is_hv()) throw GeometryError("Case II needs a gradient KV or gradient HV");
  const OdeJet jet = OdeJet::make(g.coords(), "t");
  const AtomId t = jet.t;
  const AtomId m = fresh_symbol("m", {v, s});
  const AtomId p = fresh_symbol("p", {v, s});
  const Expr r = directional(y, v, g.coords()) + Expr(2) * cls.psi * v + at(m) * s + at(p);
  const LinearSolution sol =
      solve(linear_system({r}, {m, p}, parameters({r}, with_time(t, g.coords()), {m, p})));

  auto build = [&](const std::string& label, const Expr& tv, const Expr& wv, const Expr& mv, const Expr& pv,
                   std::optional<TimeFunctions> tf) {
    NoetherResult out;
    out.label = label;
    out.psi = cls.psi;
    out.m = mv;
    out.time = std::move(tf);
    out.generator.xi = Expr(2) * cls.psi * wv;
    for (const Expr& c : y) out.generator.eta.push_back(tv * c);
    out.gauge = diff(tv, t) * s + pv * wv;
    out.residual = substitute(r, AtomMap{{m, mv}, {p, pv}});
    out.admitted = out.residual.is_zero();
    out.integral = noether_integral(g, jet, out.generator, out.gauge, v);
    return out;
  };

  std::vector<NoetherResult> out;
  if (!sol.consistent) {
    TimeFunctions tf = TimeFunctions::make(t, at(m));
    out.push_back(build("II", tf.T_expr(), tf.W_expr(), at(m), at(p), tf));
    return out;
  }
  const Expr mv = sol.particular[0];
  const Expr pv = sol.particular[1];
  const auto mr = mv.as_rational();
  if (mr && *mr == 0) {
    const Expr tt = at(t);
    out.push_back(build("II:T=1", Expr(1), tt, mv, pv, std::nullopt));
    out.push_back(build("II:T=t", tt, Expr(kHalf) * tt * tt, mv, pv, std::nullopt));
    return out;
  }
  if (mr) {
    if (const auto k = integer_sqrt(*mr); k && k->fits_slong_p()) {
      const long kk = k->get_si();
      for (long sgn : {1L, -1L}) {
        const Expr tv = exp_t(t, sgn * kk);
        const std::string name = "II:T=exp(" + std::string(sgn < 0 ? "-" : "") + (kk == 1 ? "" : std::to_string(kk)) + "t)";
        out.push_back(build(name, tv, tv / Expr(Rational(sgn * kk)), mv, pv, std::nullopt));
      }
      return out;
    }
  }
  TimeFunctions tf = TimeFunctions::make(t, mv);
  out.push_back(build("II", tf.T_expr(), tf.W_expr(), mv, pv, tf));
  return out;
}

Expr noether_integral_derivative(const MetricField& g, const Expr& v, const NoetherResult& r) {
  const OdeJet jet = OdeJet::make(g.coords(), "t");
  const std::vector<Expr> acc = ode_acceleration(jet, christoffel(g), {ForceTensor::vector(g.gradient(v))});
  const Expr d = jet.total_derivative(r.integral, acc);
  return r.time ? r.time->reduce(d) : d;
}

Expr noether_condition(const MetricField& g, const Expr& v, const NoetherResult& r) {
  const OdeJet jet = OdeJet::make(g.coords(), "t");
  const std::size_t n = g.dim();
  const std::vector<Expr> none(n, Expr(0));
  const Expr lag = hamiltonian(g, jet, -v);  // 1/2 g x'x' - V
  const Expr dxi = jet.total_derivative(r.generator.xi, none);
  Expr out = r.generator.xi * diff(lag, jet.t) + lag * dxi - jet.total_derivative(r.gauge, none);
  for (std::size_t i = 0; i < n; ++i) {
    const Expr eta1 = jet.total_derivative(r.generator.eta[i], none) - at(jet.v[i]) * dxi;
    out += r.generator.eta[i] * diff(lag, jet.x[i]) + eta1 * diff(lag, jet.v[i]);
  }
  return r.time ? r.time->reduce(out) : out;
}

NoetherAlgebra noether_algebra(const MetricField& g, const AlgebraBasis& basis, const Expr& v) {
  NoetherAlgebra out;
  const OdeJet jet = OdeJet::make(g.coords(), "t");
  NoetherResult dt;
  dt.label = "dt";
  dt.generator.xi = Expr(1);
  dt.generator.eta.assign(g.dim(), Expr(0));
  dt.gauge = Expr(0);
  dt.residual = Expr(0);
  dt.admitted = true;
  dt.psi = Expr(0);
  dt.integral = hamiltonian(g, jet, v);
  out.results.push_back(dt);
  for (const auto& el : basis.elements) {
    if (!el.cls.is_kv() && !el.cls.is_hv()) continue;
    NoetherResult r1 = noether_case1(g, el.field, v);
    r1.label = "I:" + el.label;
    out.results.push_back(std::move(r1));
    if (el.cls.gradient && el.cls.potential)
      for (NoetherResult& r2 : noether_case2(g, *el.cls.potential, v)) {
        r2.label = r2.label.substr(0, 2) + ":" + el.label + r2.label.substr(2);
        out.results.push_back(std::move(r2));
      }
  }
  std::vector<VectorField> concrete;
  std::size_t opaque = 0;
  for (const auto& r : out.results) {
    if (!r.admitted) continue;
    if (r.time) {
      opaque += 2;
      continue;
    }
    VectorField f{r.generator.xi};
    f.insert(f.end(), r.generator.eta.begin(), r.generator.eta.end());
    concrete.push_back(std::move(f));
  }
  out.dimension = span_dimension(concrete, coords_of(with_time(jet.t, g.coords()))) + opaque;
  return out;
}

// ---- Lie symmetries of the geodesic equations with force -------------------------

OdeAlgebra lie_ode_from_projective(const MetricField& g, const std::vector<Expr>& force,
                                   const std::vector<VectorField>& vectors, int t_degree) {
  const std::size_t n = g.dim();
  if (!force.empty() && force.size() != n) throw std::invalid_argument("force has the wrong number of components");
  const OdeJet jet = OdeJet::make(g.coords(), "t");
  const Expr tt = at(jet.t);
  std::vector<Expr> xi_basis{Expr(1)};
  for (const auto& y : vectors) {
    const CollineationClass cls = classify_collineation(y, g);
    if (cls.is_kv() && cls.gradient && cls.potential) xi_basis.push_back(*cls.potential);
  }
  std::vector<AtomId> unknowns;
  GeneratorODE x{Expr(0), std::vector<Expr>(n, Expr(0))};
  for (std::size_t a = 0; a < vectors.size(); ++a)
    for (int d = 0; d <= t_degree; ++d) {
      const AtomId c = symbol("ode_c" + std::to_string(a) + "_" + std::to_string(d));
      unknowns.push_back(c);
      for (std::size_t i = 0; i < n; ++i)
        if (!vectors[a][i].is_zero()) x.eta[i] += at(c) * tt.pow(d) * vectors[a][i];
    }
  for (std::size_t b = 0; b < xi_basis.size(); ++b)
    for (int d = 0; d <= t_degree; ++d) {
      const AtomId e = symbol("ode_e" + std::to_string(b) + "_" + std::to_string(d));
      unknowns.push_back(e);
      x.xi += at(e) * tt.pow(d) * xi_basis[b];
    }
  std::vector<ForceTensor> forces;
  if (!force.empty() && !is_zero(force)) {
    std::vector<Expr> p;
    for (const Expr& f : force) p.push_back(-f);
    forces.push_back(ForceTensor::vector(p));
  }
  const DeterminingSystem sys = determining_ode(jet, christoffel(g), forces, x);
  std::vector<Expr> eqs;
  for (const auto& e : sys.equations)
    if (!e.residual.is_zero()) eqs.push_back(e.residual);
  const LinearSolution sol = solve(linear_system(eqs, unknowns, parameters(eqs, with_time(jet.t, g.coords()), unknowns)));
  OdeAlgebra out;
  const Coordinates tc = coords_of(with_time(jet.t, g.coords()));
  std::vector<VectorField> seen;
  for (const auto& h : sol.homogeneous) {
    AtomMap map;
    for (std::size_t k = 0; k < unknowns.size(); ++k) map[unknowns[k]] = h[k];
    GeneratorODE gen{substitute(x.xi, map), {}};
    for (const Expr& e : x.eta) gen.eta.push_back(substitute(e, map));
    VectorField f{gen.xi};
    f.insert(f.end(), gen.eta.begin(), gen.eta.end());
    if (in_span(f, seen, tc)) continue;
    seen.push_back(f);
    out.generators.push_back(std::move(gen));
  }
  return out;
}

// ---- heat equation ---------------------------------------------------------------

Expr heat_operator(const MetricField& g, AtomId t, const Expr& e) {
  const Connection c = christoffel(g);
  const auto& vars = g.coords().vars;
  Expr out = -diff(e, t);
  for (std::size_t i = 0; i < g.dim(); ++i) {
    const Expr ei = diff(e, vars[i]);
    if (ei.is_zero()) continue;
    out -= c.contracted[i] * ei;
    for (std::size_t j = 0; j < g.dim(); ++j)
      if (!g.upper()[i][j].is_zero()) out += g.upper()[i][j] * diff(ei, vars[j]);
  }
  return out;
}

namespace {

// The builder residual must be the u-jet-free part of the determining system
// and every other group must vanish.
void check_against_determining(const MetricField& g, const HeatSymmetry& h) {
  const PDEProblem p = heat_problem(g, h.q, "t");
  const DeterminingSystem sys = determining_linear(p, h.generator);
  Expr gpe42(0);
  for (const auto& e : sys.equations) {
    const Expr r = h.time ? h.time->reduce(e.residual) : e.residual;
    if (e.tag == "GPE.42")
      gpe42 += r;
    else if (!r.is_zero())
      throw std::logic_error("heat symmetry leaves " + e.tag + " [" + e.source + "] nonzero: " + r.to_string());
  }
  if (gpe42 != h.residual) throw std::logic_error("heat residual differs from the determining system");
}

std::string case_tag(const CollineationClass& cls) {
  return std::string(cls.gradient ? "gradient " : "nongradient ") + (cls.is_kv() ? "KV" : "HV");
}

}  // namespace

HeatSymmetry heat_symmetry_nongradient(const MetricField& g, const VectorField& y, const Expr& q) {
  const CollineationClass cls = classify_collineation(y, g);
  if (!cls.is_kv() && !cls.is_hv()) throw GeometryError("Y is neither a KV nor an HV of the metric");
  if (cls.gradient) throw GeometryError("Y is a gradient vector; use the gradient construction");
  const AtomId t = time_symbol(g);
  const auto vars = with_time(t, g.coords());
  const Expr u = Expr::sym("u");
  const AtomId c1 = fresh_symbol("c1", {q});
  const AtomId c2 = fresh_symbol("c2", {q});
  HeatSymmetry h;
  h.case_tag = case_tag(cls);
  h.q = q;
  h.time_functions = {declare_function_unique("a", {t})};
  h.b = declare_function_unique("b", vars);
  h.constants = {c1, c2};
  const Expr a = Expr::func(h.time_functions[0]);
  const Expr b = Expr::func(h.b);
  const Expr xt = Expr(2) * at(c2) * cls.psi * at(t) + at(c1);
  h.generator.xi.push_back(xt);
  for (const Expr& c : y) h.generator.xi.push_back(at(c2) * c);
  h.generator.eta = a * u + b;
  const Expr qu = diff(q, symbol("u"));
  h.residual = -diff(a, t) * u + heat_operator(g, t, b) - h.generator.eta * qu + a * q -
               (Expr(2) * cls.psi * at(c2) * q + xt * diff(q, t)) - at(c2) * directional(y, q, g.coords());
  check_against_determining(g, h);
  return h;
}

HeatSymmetry heat_symmetry_gradient(const MetricField& g, const Expr& s, const Expr& q) {
  const VectorField y = g.gradient(s);
  const CollineationClass cls = classify_collineation(y, g);
  if (!cls.is_kv() && !cls.is_hv()) throw GeometryError("grad S is neither a gradient KV nor a gradient HV");
  const AtomId t = time_symbol(g);
  const auto vars = with_time(t, g.coords());
  const Expr u = Expr::sym("u");
  const AtomId c1 = fresh_symbol("c1", {q, s});
  HeatSymmetry h;
  h.case_tag = "gradient " + std::string(cls.is_kv() ? "KV" : "HV");
  h.q = q;
  h.time = TimeFunctions::make(t, std::nullopt);
  h.time_functions = {h.time->T, declare_function_unique("F", {t})};
  h.b = declare_function_unique("b", vars);
  h.constants = {c1};
  const Expr tv = h.time->T_expr();
  const Expr wv = h.time->W_expr();
  const Expr fv = Expr::func(h.time_functions[1]);
  const Expr b = Expr::func(h.b);
  const Expr a = -Expr(kHalf) * diff(tv, t) * s + fv;
  const Expr xt = Expr(2) * cls.psi * wv + at(c1);
  h.generator.xi.push_back(xt);
  for (const Expr& c : y) h.generator.xi.push_back(tv * c);
  h.generator.eta = a * u + b;
  const Expr qu = diff(q, symbol("u"));
  h.residual = h.time->reduce(u * heat_operator(g, t, a) + heat_operator(g, t, b) +
                              (a - Expr(2) * cls.psi * tv) * q - xt * diff(q, t) -
                              tv * directional(y, q, g.coords()) - h.generator.eta * qu);
  check_against_determining(g, h);
  return h;
}

GeneratorPDE instantiate(const HeatSymmetry& h, const AtomMap& constants,
                         const std::vector<std::pair<std::string, Expr>>& functions) {
  std::vector<std::pair<std::string, Expr>> fs = functions;
  if (h.time) {
    bool has_w = false;
    const Expr* tv = nullptr;
    for (const auto& [name, val] : fs) {
      has_w = has_w || name == h.time->W;
      if (name == h.time->T) tv = &val;
    }
    if (tv && !has_w) {
      const auto w = antiderivative(*tv, h.time->t);
      if (!w) throw std::invalid_argument("no antiderivative for T in the expression fragment");
      fs.emplace_back(h.time->W, *w);
    }
  }
  auto apply = [&](Expr e) {
    for (const auto& [name, val] : fs) e = substitute_function(e, name, val);
    return substitute(e, constants);
  };
  GeneratorPDE out;
  for (const Expr& e : h.generator.xi) out.xi.push_back(apply(e));
  out.eta = apply(h.generator.eta);
  return out;
}

std::vector<GeneratorPDE> solve_heat_ansatz(const MetricField& g, const HeatSymmetry& h, const TimeAnsatz& ansatz) {
  const AtomId t = time_symbol(g);
  const Expr tt = at(t);
  std::vector<Expr> basis;
  for (int d = 0; d <= ansatz.degree; ++d) basis.push_back(tt.pow(d));
  if (ansatz.exponential) {
    basis.push_back(Expr::exp(t));
    basis.push_back(Expr::exp(t).inverse());
  }
  std::vector<AtomId> unknowns = h.constants;
  std::vector<std::pair<std::string, Expr>> fs;
  for (const auto& name : h.time_functions) {
    Expr val(0), anti(0);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const AtomId c = symbol("ans_" + name + "_" + std::to_string(k));
      unknowns.push_back(c);
      val += at(c) * basis[k];
      if (h.time && name == h.time->T) {
        const auto w = antiderivative(basis[k], t);
        if (!w) throw std::logic_error("ansatz term without antiderivative");
        anti += at(c) * *w;
      }
    }
    fs.emplace_back(name, val);
    if (h.time && name == h.time->T) fs.emplace_back(h.time->W, anti);
  }
  if (ansatz.constant_b) {
    const AtomId beta = symbol("ans_" + h.b);
    unknowns.push_back(beta);
    fs.emplace_back(h.b, at(beta));
  } else {
    fs.emplace_back(h.b, Expr(0));
  }
  Expr res = h.residual;
  for (const auto& [name, val] : fs) res = substitute_function(res, name, val);
  std::vector<AtomId> vars = with_time(t, g.coords());
  vars.push_back(symbol("u"));
  const LinearSolution sol = solve(linear_system({res}, unknowns, parameters({res}, vars, unknowns)));
  const GeneratorPDE generic = instantiate(h, {}, fs);
  const PDEProblem p = heat_problem(g, h.q, "t");
  const Coordinates cs = coords_of(vars);
  std::vector<VectorField> seen;
  std::vector<GeneratorPDE> out;
  for (const auto& hv : sol.homogeneous) {
    AtomMap map;
    for (std::size_t k = 0; k < unknowns.size(); ++k) map[unknowns[k]] = hv[k];
    GeneratorPDE gen;
    for (const Expr& e : generic.xi) gen.xi.push_back(substitute(e, map));
    gen.eta = substitute(generic.eta, map);
    VectorField f = gen.xi;
    f.push_back(gen.eta);
    if (is_zero(f) || in_span(f, seen, cs)) continue;
    if (!verify_symmetry(p, gen).is_symmetry) throw std::logic_error("ansatz solution fails the symmetry condition");
    seen.push_back(f);
    out.push_back(std::move(gen));
  }
  return out;
}

std::string to_string(FluxRow r) {
  switch (r) {
    case FluxRow::Linear: return "q0 u";
    case FluxRow::Power: return "q0 u^n";
    case FluxRow::LogLinear: return "u ln u";
    case FluxRow::Exponential: return "e^u";
  }
  return "?";
}

FluxTableRow flux_table_row(const MetricField& flat, FluxRow row, int power) {
  if (!is_zero(christoffel(flat).gamma) || flat.lower() != identity_matrix(flat.dim()))
    throw GeometryError("the flux table uses the Euclidean metric");
  const std::size_t n = flat.dim();
  const auto& xs = flat.coords().vars;
  const AtomId t = time_symbol(flat);
  const Expr tt = at(t);
  const Expr u = Expr::sym("u");
  const Expr c = Expr::sym("c"), c1 = Expr::sym("c1"), a0 = Expr::sym("a0"), t0 = Expr::sym("T0"),
             q0 = Expr::sym("q0");
  Expr s(0);
  for (AtomId x : xs) s += Expr(kHalf) * at(x) * at(x);
  FluxTableRow out;
  out.row = row;
  GeneratorPDE& gen = out.generator;
  switch (row) {
    case FluxRow::Linear: {
      out.q = q0 * u;
      gen.xi.push_back(t0 * tt * tt + Expr(2) * c * tt + c1);
      for (AtomId x : xs) gen.xi.push_back((c + t0 * tt) * at(x));
      const Expr a = -Expr(2) * c * q0 * tt + a0 +
                     t0 * (-Expr(kHalf) * s - q0 * tt * tt - Expr(Rational(static_cast<long>(n), 2)) * tt);
      gen.eta = a * u;
      out.side_condition = "H(b) - b q0 = 0, b = 0";
      break;
    }
    case FluxRow::Power: {
      if (power == 1) throw std::invalid_argument("power row needs n != 1");
      out.q = q0 * u.pow(power);
      gen.xi.push_back(Expr(2) * c * tt + c1);
      for (AtomId x : xs) gen.xi.push_back(c * at(x));
      gen.eta = Expr(2) * c / Expr(1 - power) * u;
      out.side_condition = "b = 0";
      break;
    }
    case FluxRow::LogLinear: {
      out.q = u * Expr::log(symbol("u"));
      const Expr decay = Expr::exp(t).inverse();
      gen.xi.push_back(c1);
      for (std::size_t i = 0; i < n; ++i) {
        Expr e(0);
        if (i + 1 == n) e += c;
        if (i == 0) e += t0 * decay;
        gen.xi.push_back(e);
      }
      gen.eta = (a0 + Expr(kHalf) * t0 * at(xs[0])) * decay * u;
      out.side_condition = "b = 0, K = " + atom_info(xs[0]).name;
      break;
    }
    case FluxRow::Exponential: {
      out.q = Expr::exp(symbol("u"));
      gen.xi.push_back(Expr(2) * c * tt + c1);
      for (AtomId x : xs) gen.xi.push_back(c * at(x));
      gen.eta = -Expr(2) * c;
      out.side_condition = "b = 0";
      break;
    }
  }
  return out;
}

// ---- counts ------------------------------------------------------------------------

MetricField constant_curvature_metric(std::size_t n, const Expr& k) {
  const Coordinates coords = Coordinates::of(euclidean_names(n));
  Expr r2(0);
  for (AtomId x : coords.vars) r2 += at(x) * at(x);
  const Expr f = (Expr(1) + k * r2 / Expr(4)).pow(2).inverse();
  ExprMatrix g = identity_matrix(n);
  for (std::size_t i = 0; i < n; ++i) g[i][i] = f;
  return MetricField::from_lower(coords, g);
}

SymmetryCount heat_symmetry_counts(const std::string& space, std::size_t n, bool enumerate) {
  SymmetryCount out;
  out.space = space;
  out.n = n;
  out.convention = "b(t,x) d/du counted once (modulo a solution); d/dt and u d/du counted once";
  bool flat = true;
  if (space == "1d") {
    if (n != 1) throw std::invalid_argument("1d space has n = 1");
    out.formula = 7;
  } else if (space == "flat") {
    if (n < 1) throw std::invalid_argument("flat space needs n >= 1");
    out.formula = n * (n + 3) / 2 + 5;
  } else if (space == "constcurv") {
    if (n < 2) throw std::invalid_argument("constant curvature needs n >= 2");
    out.formula = (n + 3) + n * (n - 1) / 2;
    flat = false;
  } else {
    throw std::invalid_argument("unknown space '" + space + "'");
  }
  if (!enumerate) return out;

  const MetricField g = flat ? euclidean_metric(Coordinates::of(euclidean_names(n))) : constant_curvature_metric(n, Expr(1));
  const AlgebraBasis basis = flat ? euclidean_catalog(n) : solve_homothetic(g, 2);
  std::vector<GeneratorPDE> gens;
  for (const auto& el : basis.elements) {
    if (!el.cls.is_kv() && !el.cls.is_hv()) continue;
    std::vector<GeneratorPDE> found;
    if (el.cls.gradient && el.cls.potential)
      found = solve_heat_ansatz(g, heat_symmetry_gradient(g, *el.cls.potential, Expr(0)), {2, false});
    else
      found = solve_heat_ansatz(g, heat_symmetry_nongradient(g, el.field, Expr(0)), {1, false});
    gens.insert(gens.end(), found.begin(), found.end());
  }
  std::vector<AtomId> vars = with_time(symbol("t"), g.coords());
  vars.push_back(symbol("u"));
  std::vector<VectorField> fields;
  for (const auto& gen : gens) {
    VectorField f = gen.xi;
    f.push_back(gen.eta);
    fields.push_back(std::move(f));
  }
  out.enumerated = span_dimension(fields, coords_of(vars)) + 1;
  return out;
}

// ---- wave equation -----------------------------------------------------------------

WaveSymmetries wave_symmetries(const Expr& c, int degree, const std::vector<VectorField>& extra) {
  if (c.is_zero()) throw ProblemError("c vanishes identically");
  const Coordinates coords = Coordinates::of({"x", "y"});
  for (AtomId a : c.atoms())
    if (atom_depends_on(a, coords.vars[1])) throw ProblemError("c must depend on x only");
  ExprMatrix lower{{c.pow(2).inverse(), Expr(0)}, {Expr(0), Expr(-1)}};
  WaveSymmetries out{MetricField::from_lower(coords, lower), {}, {}, {}};
  out.problem = PDEProblem::linear(JetSpace::make(coords.vars), out.metric.upper(), {Expr(0), Expr(0)}, Expr(0));
  out.algebra = solve_homothetic(out.metric, degree);
  int k = 0;
  for (const auto& f : extra) {
    CollineationClass cls = classify_collineation(f, out.metric);
    if (!cls.is_kv() && !cls.is_hv()) throw GeometryError("supplied vector is neither a KV nor an HV");
    std::vector<VectorField> span;
    for (const auto& el : out.algebra.elements) span.push_back(el.field);
    if (in_span(f, span, coords)) continue;
    out.algebra.elements.push_back({"E" + std::to_string(++k), f, cls});
  }
  const Expr u = Expr::sym("u");
  const AtomId c1 = fresh_symbol("c1", {c});
  for (const auto& el : out.algebra.elements) {
    WaveGenerator w;
    w.label = el.label;
    w.generator = {el.field, at(c1) * u};
    const SymmetryCheck chk = verify_symmetry(out.problem, w.generator);
    w.lambda = chk.lambda;
    w.verified = chk.is_symmetry && chk.lambda == at(c1) - Expr(2) * el.cls.psi;
    out.generators.push_back(std::move(w));
  }
  auto push = [&](const std::string& label, const Expr& eta) {
    WaveGenerator w;
    w.label = label;
    w.generator = {{Expr(0), Expr(0)}, eta};
    const SymmetryCheck chk = verify_symmetry(out.problem, w.generator);
    w.lambda = chk.lambda;
    w.verified = chk.is_symmetry;
    out.generators.push_back(std::move(w));
  };
  push("u d/du", u);
  push("b d/du, b = y", Expr::sym("y"));
  return out;
}

}  // namespace liesym
