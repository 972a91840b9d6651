#include "liesym/symexpr/linear.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace liesym {
namespace {

Matrix<Integer> integer_rows(const Matrix<Rational>& a, std::size_t cols) {
  Matrix<Integer> m;
  m.reserve(a.size());
  for (const auto& row : a) {
    Integer l = 1;
    bool zero = true;
    for (std::size_t j = 0; j < cols; ++j) {
      if (row[j] == 0) continue;
      zero = false;
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), row[j].get_den_mpz_t());
    }
    if (zero) continue;
    std::vector<Integer> r(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      Rational v = row[j] * l;
      r[j] = v.get_num();
    }
    m.push_back(std::move(r));
  }
  return m;
}

template <class T, class Out, class Conv>
std::vector<std::vector<Out>> free_form_basis(const FractionFreeForm<T>& ff, std::size_t cols, Conv conv) {
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : ff.pivots) is_pivot[c] = true;
  std::vector<std::vector<Out>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Out> v(cols, Out(0));
    v[f] = Out(1);
    for (std::size_t r = 0; r < ff.pivots.size(); ++r) v[ff.pivots[r]] = -conv(ff.rows[r][f], ff.divisor);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

std::vector<std::vector<Rational>> nullspace(const Matrix<Rational>& a, std::size_t cols) {
  auto ff = fraction_free_gauss_jordan(integer_rows(a, cols), cols);
  return free_form_basis<Integer, Rational>(ff, cols, [](const Integer& x, const Integer& d) {
    Rational q(x, d);
    q.canonicalize();
    return q;
  });
}

std::vector<std::vector<Expr>> nullspace(const Matrix<Expr>& a, std::size_t cols) {
  auto ff = fraction_free_gauss_jordan(a, cols);
  return free_form_basis<Expr, Expr>(ff, cols, [](const Expr& x, const Expr& d) { return x / d; });
}

std::size_t rank(const Matrix<Rational>& a, std::size_t cols) {
  return fraction_free_gauss_jordan(integer_rows(a, cols), cols).pivots.size();
}

std::size_t rank(const Matrix<Expr>& a, std::size_t cols) { return fraction_free_gauss_jordan(a, cols).pivots.size(); }

std::vector<std::vector<Rational>> nullspace_rational_gj(Matrix<Rational> a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    const Rational inv = 1 / a[r][c];
    for (std::size_t j = 0; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -a[k][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

bool LinearSystem::is_rational() const {
  for (const auto& row : coef)
    for (const auto& c : row)
      if (!c.is_rational()) return false;
  for (const auto& c : rhs)
    if (!c.is_rational()) return false;
  return true;
}

LinearSystem linear_system(const std::vector<Expr>& equations, const std::vector<AtomId>& unknowns,
                           const std::vector<AtomId>& parameters) {
  std::map<AtomId, std::size_t> index;
  for (std::size_t k = 0; k < unknowns.size(); ++k) index[unknowns[k]] = k;
  const std::set<AtomId> params(parameters.begin(), parameters.end());
  LinearSystem sys;
  sys.unknowns = unknowns;
  const std::size_t n = unknowns.size();
  for (const Expr& eq : equations) {
    for (const auto& [f, e] : eq.den())
      for (AtomId a : factor_poly(f).atoms())
        if (index.count(a)) throw NonlinearError("unknown " + atom_to_string(a) + " appears in a denominator");
    // Row key: monomial in the independent atoms. Entries: polynomials in parameters.
    std::map<Monomial, std::vector<std::vector<Term>>> rows;
    for (const auto& t : eq.num().terms()) {
      std::size_t slot = n;
      int udeg = 0;
      Monomial key, par;
      for (const auto& [a, k] : t.mono.factors()) {
        if (auto it = index.find(a); it != index.end()) {
          udeg += k;
          slot = it->second;
        } else if (params.count(a)) {
          par = par * Monomial::of(a, k);
        } else {
          key = key * Monomial::of(a, k);
        }
      }
      if (udeg > 1) throw NonlinearError("equation is nonlinear in the unknowns: " + eq.to_string());
      auto& row = rows[key];
      if (row.empty()) row.resize(n + 1);
      row[slot].push_back({par, slot == n ? Rational(-t.coef) : t.coef});
    }
    for (auto& [key, row] : rows) {
      std::vector<Expr> r(n);
      bool any = false;
      for (std::size_t j = 0; j < n; ++j) {
        r[j] = Expr::from_poly(Poly::from_terms(std::move(row[j])));
        any = any || !r[j].is_zero();
      }
      Expr b = Expr::from_poly(Poly::from_terms(std::move(row[n])));
      if (!any && b.is_zero()) continue;
      sys.coef.push_back(std::move(r));
      sys.rhs.push_back(std::move(b));
    }
  }
  return sys;
}

LinearSolution solve(const LinearSystem& sys) {
  const std::size_t n = sys.unknowns.size();
  LinearSolution sol;
  std::vector<std::vector<Expr>> basis;
  if (sys.is_rational()) {
    Matrix<Rational> m;
    m.reserve(sys.coef.size());
    for (std::size_t i = 0; i < sys.coef.size(); ++i) {
      std::vector<Rational> row(n + 1);
      for (std::size_t j = 0; j < n; ++j) row[j] = sys.coef[i][j].rational();
      row[n] = -sys.rhs[i].rational();
      m.push_back(std::move(row));
    }
    for (auto& v : nullspace(m, n + 1)) {
      std::vector<Expr> ev;
      ev.reserve(v.size());
      for (auto& x : v) ev.emplace_back(x);
      basis.push_back(std::move(ev));
    }
  } else {
    Matrix<Expr> m;
    for (std::size_t i = 0; i < sys.coef.size(); ++i) {
      auto row = sys.coef[i];
      row.push_back(-sys.rhs[i]);
      m.push_back(std::move(row));
    }
    basis = nullspace(m, n + 1);
  }
  for (auto& v : basis) {
    const Expr s = v[n];
    v.pop_back();
    if (s.is_zero()) {
      sol.homogeneous.push_back(std::move(v));
    } else {
      // Free-variable form: at most one vector has a nonzero last entry.
      sol.consistent = true;
      sol.particular = std::move(v);
    }
  }
  if (!sol.consistent && sys.rhs.empty()) sol.consistent = true;
  if (sol.consistent && sol.particular.empty()) sol.particular.assign(n, Expr(0));
  if (!sol.consistent) {
    bool homogeneous = true;
    for (const auto& b : sys.rhs) homogeneous = homogeneous && b.is_zero();
    if (homogeneous) {
      sol.consistent = true;
      sol.particular.assign(n, Expr(0));
    }
  }
  return sol;
}

AtomMap solution_map(const LinearSystem& sys, const std::vector<Expr>& values) {
  AtomMap m;
  for (std::size_t k = 0; k < sys.unknowns.size(); ++k) m[sys.unknowns[k]] = values[k];
  return m;
}

}  // namespace liesym
