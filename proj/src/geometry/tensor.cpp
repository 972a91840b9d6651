#include "liesym/geometry/tensor.hpp"

#include <functional>

namespace liesym {

Coordinates Coordinates::of(const std::vector<std::string>& names) {
  Coordinates c;
  for (const auto& n : names) {
    AtomId a = symbol(n);
    for (AtomId b : c.vars)
      if (a == b) throw GeometryError("coordinate '" + n + "' listed twice");
    c.vars.push_back(a);
  }
  return c;
}

std::vector<std::string> Coordinates::names() const {
  std::vector<std::string> out;
  for (AtomId a : vars) out.push_back(atom_info(a).name);
  return out;
}

// ---- matrices --------------------------------------------------------------

ExprMatrix identity_matrix(std::size_t n) {
  ExprMatrix m(n, std::vector<Expr>(n, Expr(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Expr(1);
  return m;
}

ExprMatrix inverse(const ExprMatrix& m) {
  const std::size_t n = m.size();
  ExprMatrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    aug[i] = m[i];
    aug[i].resize(2 * n, Expr(0));
    aug[i][n + i] = Expr(1);
  }
  auto ff = fraction_free_gauss_jordan(std::move(aug), 2 * n);
  if (ff.pivots.size() < n || ff.pivots[n - 1] != n - 1) throw GeometryError("matrix is not invertible");
  ExprMatrix inv(n, std::vector<Expr>(n));
  const Expr d = ff.divisor;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < n; ++j) inv[r][j] = ff.rows[r][n + j] / d;
  return inv;
}

Expr determinant(const ExprMatrix& m0) {
  ExprMatrix m = m0;
  const std::size_t n = m.size();
  Expr prev(1);
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k].is_zero()) ++p;
    if (p == n) return Expr(0);
    if (p != k) {
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
      m[i][k] = Expr(0);
    }
    prev = m[k][k];
  }
  return sign > 0 ? prev : -prev;
}

// ---- metric ----------------------------------------------------------------

namespace {

void check_square_symmetric(const ExprMatrix& m, std::size_t n, const char* what) {
  if (m.size() != n) throw GeometryError(std::string(what) + " has wrong dimension");
  for (const auto& row : m)
    if (row.size() != n) throw GeometryError(std::string(what) + " is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m[i][j] != m[j][i]) throw GeometryError(std::string(what) + " is not symmetric");
}

}  // namespace

MetricField MetricField::from_lower(Coordinates coords, ExprMatrix g) {
  check_square_symmetric(g, coords.size(), "metric");
  MetricField m;
  m.upper_ = inverse(g);
  m.lower_ = std::move(g);
  m.coords_ = std::move(coords);
  return m;
}

MetricField MetricField::from_upper(Coordinates coords, ExprMatrix a) {
  check_square_symmetric(a, coords.size(), "metric");
  MetricField m;
  m.lower_ = inverse(a);
  m.upper_ = std::move(a);
  m.coords_ = std::move(coords);
  return m;
}

std::vector<Expr> MetricField::lower_index(const VectorField& x) const {
  std::vector<Expr> out(dim(), Expr(0));
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j)
      if (!lower_[i][j].is_zero()) out[i] += lower_[i][j] * x[j];
  return out;
}

VectorField MetricField::gradient(const Expr& s) const {
  VectorField out(dim(), Expr(0));
  std::vector<Expr> ds;
  for (AtomId v : coords_.vars) ds.push_back(diff(s, v));
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j)
      if (!upper_[i][j].is_zero()) out[i] += upper_[i][j] * ds[j];
  return out;
}

MetricField euclidean_metric(const Coordinates& coords) {
  return MetricField::from_lower(coords, identity_matrix(coords.size()));
}

// ---- connection ------------------------------------------------------------

Connection christoffel(const MetricField& g) {
  const std::size_t n = g.dim();
  const auto& x = g.coords().vars;
  // dg[r][j][k] = g_rj,k
  Rank3 dg(n, ExprMatrix(n, std::vector<Expr>(n)));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) dg[r][j][k] = r <= j ? diff(g.lower()[r][j], x[k]) : dg[j][r][k];
  Connection c;
  c.gamma.assign(n, ExprMatrix(n, std::vector<Expr>(n, Expr(0))));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j; k < n; ++k) {
      std::vector<Expr> low(n);
      for (std::size_t r = 0; r < n; ++r) low[r] = (dg[r][j][k] + dg[r][k][j] - dg[j][k][r]) * Expr(Rational(1, 2));
      for (std::size_t i = 0; i < n; ++i) {
        Expr s(0);
        for (std::size_t r = 0; r < n; ++r)
          if (!g.upper()[i][r].is_zero() && !low[r].is_zero()) s += g.upper()[i][r] * low[r];
        c.gamma[i][j][k] = s;
        c.gamma[i][k][j] = s;
      }
    }
  c.contracted.assign(n, Expr(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!g.upper()[j][k].is_zero() && !c.gamma[i][j][k].is_zero())
          c.contracted[i] += g.upper()[j][k] * c.gamma[i][j][k];
  return c;
}

namespace {

ExprMatrix jacobian(const VectorField& x, const std::vector<AtomId>& vars) {
  ExprMatrix d(x.size(), std::vector<Expr>(vars.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t l = 0; l < vars.size(); ++l) d[i][l] = diff(x[i], vars[l]);
  return d;
}

}  // namespace

ExprMatrix lie_derivative_metric(const VectorField& x, const MetricField& g) {
  const std::size_t n = g.dim();
  const auto& v = g.coords().vars;
  if (x.size() != n) throw GeometryError("vector field has wrong number of components");
  const ExprMatrix dx = jacobian(x, v);
  ExprMatrix out(n, std::vector<Expr>(n, Expr(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Expr s(0);
      for (std::size_t k = 0; k < n; ++k) {
        if (!x[k].is_zero()) s += x[k] * diff(g.lower()[i][j], v[k]);
        if (!dx[k][i].is_zero()) s += g.lower()[k][j] * dx[k][i];
        if (!dx[k][j].is_zero()) s += g.lower()[i][k] * dx[k][j];
      }
      out[i][j] = s;
      out[j][i] = s;
    }
  return out;
}

ExprMatrix lie_derivative_upper(const VectorField& x, const Coordinates& coords, const ExprMatrix& a) {
  const std::size_t n = coords.size();
  const ExprMatrix dx = jacobian(x, coords.vars);
  ExprMatrix out(n, std::vector<Expr>(n, Expr(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Expr s(0);
      for (std::size_t k = 0; k < n; ++k) {
        if (!x[k].is_zero()) s += x[k] * diff(a[i][j], coords.vars[k]);
        if (!dx[i][k].is_zero()) s -= a[k][j] * dx[i][k];
        if (!dx[j][k].is_zero()) s -= a[i][k] * dx[j][k];
      }
      out[i][j] = s;
      out[j][i] = s;
    }
  return out;
}

Rank3 lie_derivative_connection(const VectorField& x, const Coordinates& coords, const Connection& c) {
  const std::size_t n = coords.size();
  const auto& v = coords.vars;
  const ExprMatrix dx = jacobian(x, v);
  Rank3 out(n, ExprMatrix(n, std::vector<Expr>(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        Expr s = diff(dx[i][j], v[k]);
        for (std::size_t l = 0; l < n; ++l) {
          if (!x[l].is_zero() && !c.gamma[i][j][k].is_zero()) s += diff(c.gamma[i][j][k], v[l]) * x[l];
          if (!dx[i][l].is_zero() && !c.gamma[l][j][k].is_zero()) s -= dx[i][l] * c.gamma[l][j][k];
          if (!dx[l][j].is_zero() && !c.gamma[i][l][k].is_zero()) s += dx[l][j] * c.gamma[i][l][k];
          if (!dx[l][k].is_zero() && !c.gamma[i][j][l].is_zero()) s += dx[l][k] * c.gamma[i][j][l];
        }
        out[i][j][k] = s;
        out[i][k][j] = s;
      }
  return out;
}

VectorField commutator(const VectorField& x, const VectorField& y, const Coordinates& coords) {
  const std::size_t n = coords.size();
  VectorField out(n, Expr(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (!x[k].is_zero()) out[i] += x[k] * diff(y[i], coords.vars[k]);
      if (!y[k].is_zero()) out[i] -= y[k] * diff(x[i], coords.vars[k]);
    }
  return out;
}

Rank3 metric_covariant_derivative(const MetricField& g, const Connection& c) {
  const std::size_t n = g.dim();
  Rank3 out(n, ExprMatrix(n, std::vector<Expr>(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Expr s = diff(g.lower()[i][j], g.coords().vars[k]);
        for (std::size_t l = 0; l < n; ++l) {
          if (!c.gamma[l][k][i].is_zero()) s -= c.gamma[l][k][i] * g.lower()[l][j];
          if (!c.gamma[l][k][j].is_zero()) s -= c.gamma[l][k][j] * g.lower()[i][l];
        }
        out[i][j][k] = s;
      }
  return out;
}

ExprMatrix covariant_hessian(const Expr& s, const MetricField& g, const Connection& c) {
  const std::size_t n = g.dim();
  const auto& v = g.coords().vars;
  std::vector<Expr> ds;
  for (AtomId a : v) ds.push_back(diff(s, a));
  ExprMatrix h(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Expr e = diff(ds[i], v[j]);
      for (std::size_t k = 0; k < n; ++k)
        if (!c.gamma[k][i][j].is_zero()) e -= c.gamma[k][i][j] * ds[k];
      h[i][j] = e;
      h[j][i] = e;
    }
  return h;
}

bool is_zero(const ExprMatrix& m) {
  for (const auto& r : m)
    for (const auto& e : r)
      if (!e.is_zero()) return false;
  return true;
}

bool is_zero(const Rank3& t) {
  for (const auto& m : t)
    if (!is_zero(m)) return false;
  return true;
}

bool is_zero(const std::vector<Expr>& v) {
  for (const auto& e : v)
    if (!e.is_zero()) return false;
  return true;
}

bool is_constant_on(const Expr& e, const Coordinates& coords) {
  for (AtomId v : coords.vars)
    if (e.depends_on(v)) return false;
  if (coords.time && e.depends_on(*coords.time)) return false;
  return true;
}

// ---- integration -----------------------------------------------------------

namespace {

// Antiderivative in v of v^p exp(v)^k log(v)^q, or nullopt.
std::optional<Expr> integrate_basic(AtomId v, int p, int k, int q) {
  const Expr x = Expr::atom(v);
  if (k != 0 && q != 0) return std::nullopt;
  if (k != 0) {
    if (p < 0) return std::nullopt;
    // Repeated integration by parts on v^p e^{kv}.
    const Expr e = Expr::exp(v).pow(k);
    if (p == 0) return e / Expr(k);
    auto rest = integrate_basic(v, p - 1, k, 0);
    if (!rest) return std::nullopt;
    return x.pow(p) * e / Expr(k) - Expr(Rational(p, 1) / k) * *rest;
  }
  if (q == 0) {
    if (p == -1) return Expr::log(v);
    return x.pow(p + 1) / Expr(p + 1);
  }
  const Expr l = Expr::log(v);
  if (p == -1) return l.pow(q + 1) / Expr(q + 1);
  auto rest = integrate_basic(v, p, 0, q - 1);
  if (!rest) return std::nullopt;
  return x.pow(p + 1) * l.pow(q) / Expr(p + 1) - Expr(Rational(q, p + 1)) * *rest;
}

}  // namespace

std::optional<Expr> antiderivative(const Expr& e, AtomId var) {
  if (!e.depends_on(var)) return e * Expr::atom(var);
  int shift = 0, eshift = 0;
  const AtomId ex = exp_atom(var), lg = log_atom(var);
  Denominator rest_den;
  for (const auto& [f, k] : e.den()) {
    const Poly& fp = factor_poly(f);
    bool dep = false;
    for (AtomId a : fp.atoms()) dep = dep || atom_depends_on(a, var);
    if (!dep) {
      rest_den.emplace_back(f, k);
    } else if (fp == Poly::atom(var)) {
      shift = k;
    } else if (fp == Poly::atom(ex)) {
      eshift = k;
    } else {
      return std::nullopt;
    }
  }
  Expr total(0);
  for (const auto& t : e.num().terms()) {
    int p = -shift, k = -eshift, q = 0;
    Monomial other;
    for (const auto& [a, n] : t.mono.factors()) {
      if (a == var)
        p += n;
      else if (a == ex)
        k += n;
      else if (a == lg)
        q = n;
      else if (atom_depends_on(a, var))
        return std::nullopt;
      else
        other = other * Monomial::of(a, n);
    }
    auto base = integrate_basic(var, p, k, q);
    if (!base) return std::nullopt;
    total += Expr::from_poly(Poly::monomial(other, t.coef)) * *base;
  }
  return total * Expr::fraction(Poly(1), rest_den);
}

Potential integrate_covector(const std::vector<Expr>& w, const Coordinates& coords) {
  Potential out;
  const auto& v = coords.vars;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (diff(w[i], v[j]) != diff(w[j], v[i])) return out;
  out.closed = true;
  Expr s(0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    Expr r = w[k] - diff(s, v[k]);
    if (r.is_zero()) continue;
    auto a = antiderivative(r, v[k]);
    if (!a) return out;
    s += *a;
  }
  for (std::size_t k = 0; k < v.size(); ++k)
    if (diff(s, v[k]) != w[k]) return out;
  out.value = s;
  return out;
}

// ---- classification ---------------------------------------------------------

std::string to_string(CollineationTag t) {
  switch (t) {
    case CollineationTag::None: return "none";
    case CollineationTag::KV: return "KV";
    case CollineationTag::GradientKV: return "gradient-KV";
    case CollineationTag::HV: return "HV";
    case CollineationTag::GradientHV: return "gradient-HV";
    case CollineationTag::SCKV: return "SCKV";
    case CollineationTag::ProperCKV: return "proper-CKV";
    case CollineationTag::AC: return "AC";
    case CollineationTag::PC: return "PC";
    case CollineationTag::SPC: return "SPC";
  }
  return "none";
}

CollineationClass classify_collineation(const VectorField& x, const MetricField& g) {
  const std::size_t n = g.dim();
  const Coordinates& coords = g.coords();
  CollineationClass cls;
  const ExprMatrix lg = lie_derivative_metric(x, g);
  Expr trace(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!g.upper()[i][j].is_zero()) trace += g.upper()[i][j] * lg[i][j];
  const Expr psi = trace / Expr(static_cast<long>(2 * n));
  bool conformal = true;
  for (std::size_t i = 0; i < n && conformal; ++i)
    for (std::size_t j = i; j < n && conformal; ++j) conformal = (lg[i][j] - Expr(2) * psi * g.lower()[i][j]).is_zero();

  const Potential pot = integrate_covector(g.lower_index(x), coords);
  cls.gradient = pot.closed;
  cls.potential = pot.value;

  const Connection c = christoffel(g);
  if (conformal) {
    cls.conformal = true;
    cls.psi = psi;
    if (psi.is_zero())
      cls.tag = cls.gradient ? CollineationTag::GradientKV : CollineationTag::KV;
    else if (is_constant_on(psi, coords))
      cls.tag = cls.gradient ? CollineationTag::GradientHV : CollineationTag::HV;
    else if (is_zero(covariant_hessian(psi, g, c)))
      cls.tag = CollineationTag::SCKV;
    else
      cls.tag = CollineationTag::ProperCKV;
  }

  const Rank3 lc = lie_derivative_connection(x, coords, c);
  std::vector<Expr> phi(n, Expr(0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) phi[j] += lc[k][j][k];
    phi[j] /= Expr(static_cast<long>(n + 1));
  }
  bool projective = true;
  for (std::size_t i = 0; i < n && projective; ++i)
    for (std::size_t j = 0; j < n && projective; ++j)
      for (std::size_t k = j; k < n && projective; ++k) {
        Expr e = lc[i][j][k];
        if (i == k) e -= phi[j];
        if (i == j) e -= phi[k];
        projective = e.is_zero();
      }
  if (projective) {
    cls.projective = true;
    cls.phi_gradient = phi;
    cls.phi = integrate_covector(phi, coords).value;
    // In one dimension every field is conformal; the projective tag is the informative one.
    const bool degenerate = n == 1 && !cls.is_kv() && !cls.is_hv();
    if (!conformal || degenerate) {
      if (is_zero(phi)) {
        cls.tag = CollineationTag::AC;
      } else {
        bool special = true;
        for (std::size_t j = 0; j < n && special; ++j)
          for (std::size_t k = 0; k < n && special; ++k) {
            Expr e = diff(phi[j], coords.vars[k]);
            for (std::size_t l = 0; l < n; ++l)
              if (!c.gamma[l][j][k].is_zero()) e -= c.gamma[l][j][k] * phi[l];
            special = e.is_zero();
          }
        cls.tag = special ? CollineationTag::SPC : CollineationTag::PC;
      }
    }
  }
  return cls;
}

std::vector<Expr> contracted_lie_connection(const VectorField& x, const MetricField& g, const Connection& c) {
  const std::size_t n = g.dim();
  const Rank3 lc = lie_derivative_connection(x, g.coords(), c);
  std::vector<Expr> out(n, Expr(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!g.upper()[j][k].is_zero() && !lc[i][j][k].is_zero()) out[i] += g.upper()[j][k] * lc[i][j][k];
  return out;
}

namespace {

void require_conformal(const VectorField& x, const MetricField& g, const Expr& factor) {
  const ExprMatrix lg = lie_derivative_metric(x, g);
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = 0; j < g.dim(); ++j)
      if (!(lg[i][j] - factor * g.lower()[i][j]).is_zero())
        throw GeometryError("precondition violated: L_X g is not factor * g");
}

}  // namespace

bool lemma2_check(const VectorField& x, const MetricField& g, const Expr& factor) {
  require_conformal(x, g, factor);
  const std::size_t n = g.dim();
  const Connection c = christoffel(g);
  const auto lhs = contracted_lie_connection(x, g, c);
  const auto grad = g.gradient(factor);
  const Expr coef(Rational(2 - static_cast<long>(n), 2));
  for (std::size_t i = 0; i < n; ++i)
    if (!(lhs[i] - coef * grad[i]).is_zero()) return false;
  return true;
}

bool lemma1b_check(const VectorField& x, const MetricField& g, const Expr& factor) {
  require_conformal(x, g, factor);
  const std::size_t n = g.dim();
  const auto& v = g.coords().vars;
  const Connection c = christoffel(g);
  const auto lhs = contracted_lie_connection(x, g, c);
  for (std::size_t i = 0; i < n; ++i) {
    Expr rhs = factor * c.contracted[i];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!g.upper()[j][k].is_zero()) rhs += g.upper()[j][k] * diff(diff(x[i], v[j]), v[k]);
    for (std::size_t l = 0; l < n; ++l) {
      rhs += diff(c.contracted[i], v[l]) * x[l];
      rhs -= diff(x[i], v[l]) * c.contracted[l];
    }
    if (!(lhs[i] - rhs).is_zero()) return false;
  }
  return true;
}

}  // namespace liesym
