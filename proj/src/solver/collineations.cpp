#include "liesym/solver/collineations.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "liesym/symexpr/parse.hpp"

namespace liesym {

std::size_t AlgebraBasis::count(CollineationTag tag) const {
  return static_cast<std::size_t>(
      std::count_if(elements.begin(), elements.end(), [&](const AlgebraElement& e) { return e.cls.tag == tag; }));
}

std::size_t AlgebraBasis::kv_count() const {
  return count(CollineationTag::KV) + count(CollineationTag::GradientKV);
}

std::size_t AlgebraBasis::hv_count() const {
  return count(CollineationTag::HV) + count(CollineationTag::GradientHV);
}

namespace {

// Atoms of the fields that do not depend on any coordinate.
std::vector<AtomId> constant_atoms(const std::vector<const std::vector<Expr>*>& groups, const Coordinates& coords) {
  std::set<AtomId> out;
  for (const auto* g : groups)
    for (const Expr& e : *g)
      for (AtomId a : e.atoms()) {
        bool dep = false;
        for (AtomId v : coords.vars) dep = dep || atom_depends_on(a, v);
        if (!dep) out.insert(a);
      }
  return {out.begin(), out.end()};
}

std::vector<AtomId> fresh_unknowns(const std::string& prefix, std::size_t count) {
  std::vector<AtomId> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(symbol(prefix + std::to_string(k)));
  return out;
}

VectorField combine(const std::vector<VectorField>& fields, const std::vector<Expr>& coefs, std::size_t n) {
  VectorField out(n, Expr(0));
  for (std::size_t m = 0; m < fields.size(); ++m)
    if (!coefs[m].is_zero())
      for (std::size_t i = 0; i < n; ++i) out[i] += coefs[m] * fields[m][i];
  return out;
}

// Reduced row echelon rows with unit pivots.
std::vector<std::vector<Expr>> reduced_rows(std::vector<std::vector<Expr>> rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows[0].size();
  auto ff = fraction_free_gauss_jordan(std::move(rows), cols);
  for (std::size_t r = 0; r < ff.rows.size(); ++r) {
    const Expr piv = ff.rows[r][ff.pivots[r]];
    for (auto& e : ff.rows[r]) e /= piv;
  }
  return ff.rows;
}

std::vector<std::vector<int>> exponent_vectors(std::size_t n, int degree) {
  std::vector<std::vector<int>> out;
  for (int d = 0; d <= degree; ++d) {
    std::vector<int> e(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i + 1 == n) {
        e[i] = left;
        out.push_back(e);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[i] = k;
        rec(i + 1, left - k);
      }
    };
    if (n == 0) break;
    rec(0, d);
  }
  return out;
}

// Constant combinations of `fields` that are gradient fields of g.
std::vector<std::vector<Expr>> gradient_combinations(const std::vector<VectorField>& fields, const MetricField& g) {
  const std::size_t n = g.dim();
  const auto& v = g.coords().vars;
  auto a = fresh_unknowns("gradcomb_", fields.size());
  std::vector<Expr> ae;
  for (AtomId x : a) ae.push_back(Expr::atom(x));
  const auto low = g.lower_index(combine(fields, ae, n));
  std::vector<Expr> eqs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) eqs.push_back(diff(low[i], v[j]) - diff(low[j], v[i]));
  std::vector<const std::vector<Expr>*> groups;
  for (const auto& f : fields) groups.push_back(&f);
  groups.push_back(&g.lower()[0]);
  std::vector<AtomId> params = constant_atoms(groups, g.coords());
  for (const auto& row : g.lower()) {
    auto more = constant_atoms({&row}, g.coords());
    params.insert(params.end(), more.begin(), more.end());
  }
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  LinearSolution sol = solve(linear_system(eqs, a, params));
  return sol.homogeneous;
}

}  // namespace

AlgebraBasis solve_homothetic(const MetricField& g, int degree) {
  if (degree < 1) throw std::invalid_argument("ansatz degree must be at least 1");
  const std::size_t n = g.dim();
  const auto& v = g.coords().vars;
  const auto exps = exponent_vectors(n, degree);
  std::vector<Expr> monos;
  for (const auto& e : exps) {
    Expr m(1);
    for (std::size_t i = 0; i < n; ++i)
      if (e[i]) m *= Expr::atom(v[i]).pow(e[i]);
    monos.push_back(m);
  }
  const std::size_t per = monos.size();
  auto unknowns = fresh_unknowns("hcoef_", n * per);
  const AtomId psi = symbol("hpsi_");
  VectorField x(n, Expr(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < per; ++k) x[i] += Expr::atom(unknowns[i * per + k]) * monos[k];
  const ExprMatrix lg = lie_derivative_metric(x, g);
  std::vector<Expr> eqs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Expr e = lg[i][j] - Expr(2) * Expr::atom(psi) * g.lower()[i][j];
      if (!e.is_zero()) eqs.push_back(clear_denominator(e));
    }
  std::vector<AtomId> params;
  for (const auto& row : g.lower()) {
    auto more = constant_atoms({&row}, g.coords());
    params.insert(params.end(), more.begin(), more.end());
  }
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  std::vector<AtomId> all = unknowns;
  all.push_back(psi);
  LinearSolution sol = solve(linear_system(eqs, all, params));

  // Split into psi = 0 part and one HV with psi = 1.
  const std::size_t np = all.size() - 1;
  std::vector<std::vector<Expr>> kv_rows;
  std::optional<std::vector<Expr>> hv;
  for (const auto& h : sol.homogeneous)
    if (!h[np].is_zero() && !hv) {
      std::vector<Expr> r(h.begin(), h.end() - 1);
      for (auto& e : r) e /= h[np];
      hv = r;
    }
  for (const auto& h : sol.homogeneous) {
    std::vector<Expr> r(h.begin(), h.end() - 1);
    if (hv && !h[np].is_zero())
      for (std::size_t k = 0; k < np; ++k) r[k] -= h[np] * (*hv)[k];
    bool zero = true;
    for (const auto& e : r) zero = zero && e.is_zero();
    if (!zero) kv_rows.push_back(r);
  }
  kv_rows = reduced_rows(kv_rows);
  auto to_field = [&](const std::vector<Expr>& r) {
    VectorField f(n, Expr(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < per; ++k)
        if (!r[i * per + k].is_zero()) f[i] += r[i * per + k] * monos[k];
    return f;
  };
  if (hv) {
    // Reduce the HV against the KV pivots so the representative is canonical.
    auto ff = fraction_free_gauss_jordan(kv_rows, np);
    for (std::size_t r = 0; r < kv_rows.size(); ++r) {
      const Expr c = (*hv)[ff.pivots[r]];
      if (!c.is_zero())
        for (std::size_t k = 0; k < np; ++k) (*hv)[k] -= c * kv_rows[r][k];
    }
  }

  std::vector<VectorField> kvs;
  for (const auto& r : kv_rows) kvs.push_back(to_field(r));
  // Gradient KVs first, then a complement from the echelon basis.
  std::vector<VectorField> ordered;
  auto grads = gradient_combinations(kvs, g);
  std::vector<std::vector<Expr>> grad_rows;
  for (const auto& c : grads) {
    std::vector<Expr> row;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < per; ++k) row.push_back(Expr(0));
    for (std::size_t m = 0; m < kvs.size(); ++m)
      for (std::size_t k = 0; k < np; ++k)
        if (!c[m].is_zero()) row[k] += c[m] * kv_rows[m][k];
    grad_rows.push_back(row);
  }
  for (const auto& r : reduced_rows(grad_rows)) ordered.push_back(to_field(r));
  for (const auto& f : kvs)
    if (!in_span(f, ordered, g.coords())) ordered.push_back(f);

  AlgebraBasis out;
  out.coords = g.coords();
  out.degree = degree;
  out.complete = false;
  int kv_index = 0;
  for (const auto& f : ordered) {
    CollineationClass cls = classify_collineation(f, g);
    if (!cls.is_kv()) throw std::logic_error("solver returned a vector that is not a KV");
    out.elements.push_back({"K" + std::to_string(++kv_index), f, cls});
  }
  if (hv) {
    VectorField f = to_field(*hv);
    CollineationClass cls = classify_collineation(f, g);
    if (!cls.is_hv() || cls.psi != Expr(1)) throw std::logic_error("solver returned a vector that is not an HV");
    out.elements.push_back({"H", f, cls});
  }
  return out;
}

std::vector<std::string> euclidean_names(std::size_t n) {
  if (n <= 3) {
    std::vector<std::string> all{"x", "y", "z"};
    return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n)};
  }
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

AlgebraBasis euclidean_catalog(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  const Coordinates coords = Coordinates::of(euclidean_names(n));
  const MetricField g = euclidean_metric(coords);
  std::vector<Expr> x;
  for (AtomId a : coords.vars) x.push_back(Expr::atom(a));
  auto unit = [&](std::size_t i, const Expr& c) {
    VectorField f(n, Expr(0));
    f[i] = c;
    return f;
  };
  std::vector<std::pair<std::string, VectorField>> raw;
  for (std::size_t i = 0; i < n; ++i) raw.push_back({"S_" + std::to_string(i + 1), unit(i, Expr(1))});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      VectorField f(n, Expr(0));
      f[j] = x[i] * Expr(Rational(1, 2));
      f[i] = -x[j] * Expr(Rational(1, 2));
      raw.push_back({"X_" + std::to_string(i + 1) + std::to_string(j + 1), f});
    }
  raw.push_back({"H", x});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (n > 1 || i != j) raw.push_back({"A_" + std::to_string(i + 1) + std::to_string(j + 1), unit(i, x[j])});
  for (std::size_t i = 0; i < n; ++i) {
    VectorField f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = x[i] * x[k];
    raw.push_back({"P_" + std::to_string(i + 1), f});
  }
  AlgebraBasis out;
  out.coords = coords;
  out.complete = true;
  out.degree = 2;
  for (auto& [label, f] : raw) out.elements.push_back({label, f, classify_collineation(f, g)});
  return out;
}

MetricField desitter_metric(const Expr& k) {
  const Coordinates c = Coordinates::of({"tau", "x", "y", "z"});
  const Expr d = Expr(1) + k / Expr(4) * parse("-tau^2 + x^2 + y^2 + z^2");
  const Expr w = (d * d).inverse();
  ExprMatrix g(4, std::vector<Expr>(4, Expr(0)));
  g[0][0] = -w;
  for (std::size_t i = 1; i < 4; ++i) g[i][i] = w;
  return MetricField::from_lower(c, g);
}

AlgebraBasis desitter_catalog(const Expr& k) {
  if (k.is_zero()) throw GeometryError("curvature constant must be nonzero");
  const MetricField g = desitter_metric(k);
  const Expr c = Expr(2) / k;
  auto p = [](const char* s) { return parse(s); };
  std::vector<VectorField> raw{
      {p("-x*tau"), p("(-tau^2 - x^2 + y^2 + z^2)/2") - c, p("-y*x"), p("-z*x")},
      {p("y*tau"), p("y*x"), p("(-x^2 - z^2 + y^2 + tau^2)/2") + c, p("y*z")},
      {p("z*tau"), p("z*x"), p("z*y"), p("(-x^2 - y^2 + z^2 + tau^2)/2") + c},
      {p("(x^2 + y^2 + z^2 + tau^2)/2") - c, p("tau*x"), p("tau*y"), p("tau*z")},
      {p("x"), p("tau"), Expr(0), Expr(0)},
      {p("y"), Expr(0), p("tau"), Expr(0)},
      {p("z"), Expr(0), Expr(0), p("tau")},
      {Expr(0), p("y"), p("-x"), Expr(0)},
      {Expr(0), p("z"), Expr(0), p("-x")},
      {Expr(0), Expr(0), p("z"), p("-y")}};
  AlgebraBasis out;
  out.coords = g.coords();
  out.complete = true;
  out.degree = 2;
  for (std::size_t i = 0; i < raw.size(); ++i)
    out.elements.push_back({"X_" + std::to_string(i + 1), raw[i], classify_collineation(raw[i], g)});
  return out;
}

namespace {

LinearSystem membership_system(const VectorField& v, const std::vector<VectorField>& span, const Coordinates& coords,
                               std::vector<AtomId>& unknowns) {
  unknowns = fresh_unknowns("spancoef_", span.size());
  std::vector<Expr> a;
  for (AtomId u : unknowns) a.push_back(Expr::atom(u));
  const VectorField c = combine(span, a, coords.size());
  std::vector<Expr> eqs;
  for (std::size_t i = 0; i < coords.size(); ++i) eqs.push_back(clear_denominator(c[i] - v[i]));
  std::vector<const std::vector<Expr>*> groups{&v};
  for (const auto& f : span) groups.push_back(&f);
  return linear_system(eqs, unknowns, constant_atoms(groups, coords));
}

}  // namespace

bool in_span(const VectorField& v, const std::vector<VectorField>& span, const Coordinates& coords) {
  if (span.empty()) return is_zero(v);
  std::vector<AtomId> u;
  return solve(membership_system(v, span, coords, u)).consistent;
}

std::size_t span_dimension(const std::vector<VectorField>& fields, const Coordinates& coords) {
  if (fields.empty()) return 0;
  std::vector<AtomId> u;
  const LinearSystem sys = membership_system(VectorField(coords.size(), Expr(0)), fields, coords, u);
  return fields.size() - solve(sys).homogeneous.size();
}

}  // namespace liesym
