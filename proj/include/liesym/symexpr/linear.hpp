#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "liesym/symexpr/expr.hpp"

namespace liesym {

template <class T>
using Matrix = std::vector<std::vector<T>>;

inline bool elem_is_zero(const Integer& a) { return a == 0; }
inline bool elem_is_zero(const Expr& a) { return a.is_zero(); }
inline Integer elem_divexact(const Integer& a, const Integer& b) {
  Integer q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
inline Expr elem_divexact(const Expr& a, const Expr& b) { return a / b; }

/// Reduced form produced by fraction-free Gauss-Jordan elimination. Every
/// pivot entry equals `divisor` and every other entry of a pivot column is
/// zero. Rows past `pivots.size()` are zero and dropped.
template <class T>
struct FractionFreeForm {
  Matrix<T> rows;
  std::vector<std::size_t> pivots;
  T divisor;
};

/// One-step Bareiss update applied to all rows, so all intermediate entries
/// are minors of the input and every division is exact.
template <class T>
FractionFreeForm<T> fraction_free_gauss_jordan(Matrix<T> m, std::size_t cols) {
  T prev(1);
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && elem_is_zero(m[p][c])) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    const T piv = m[r][c];
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r) continue;
      const T f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) {
        if (j == c) continue;
        if (elem_is_zero(f)) {
          if (!elem_is_zero(m[i][j])) m[i][j] = elem_divexact(piv * m[i][j], prev);
        } else {
          m[i][j] = elem_divexact(piv * m[i][j] - f * m[r][j], prev);
        }
      }
      m[i][c] = T(0);
    }
    pivots.push_back(c);
    prev = piv;
    ++r;
    // Rows that became zero carry no information.
    for (std::size_t i = m.size(); i-- > r;) {
      bool zero = true;
      for (std::size_t j = 0; j < cols && zero; ++j) zero = elem_is_zero(m[i][j]);
      if (zero) m.erase(m.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  m.resize(r);
  return {std::move(m), std::move(pivots), prev};
}

/// Nullspace basis in free-variable form: basis vector k has a 1 in the k-th
/// free column and 0 in every other free column. Ordered by free column.
std::vector<std::vector<Rational>> nullspace(const Matrix<Rational>& a, std::size_t cols);
std::vector<std::vector<Expr>> nullspace(const Matrix<Expr>& a, std::size_t cols);
std::size_t rank(const Matrix<Rational>& a, std::size_t cols);
std::size_t rank(const Matrix<Expr>& a, std::size_t cols);

/// Plain Gauss-Jordan over the rationals; kept as an independent route.
std::vector<std::vector<Rational>> nullspace_rational_gj(Matrix<Rational> a, std::size_t cols);

class NonlinearError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear equations sum_j coef[i][j]*x_j = rhs[i] obtained by requiring each
/// input expression to vanish identically in every atom that is neither an
/// unknown nor a parameter. Coefficients are expressions in the parameters.
struct LinearSystem {
  std::vector<AtomId> unknowns;
  Matrix<Expr> coef;
  std::vector<Expr> rhs;

  bool is_rational() const;
};

LinearSystem linear_system(const std::vector<Expr>& equations, const std::vector<AtomId>& unknowns,
                           const std::vector<AtomId>& parameters = {});

struct LinearSolution {
  bool consistent = false;
  std::vector<Expr> particular;
  std::vector<std::vector<Expr>> homogeneous;
};

LinearSolution solve(const LinearSystem& sys);

/// Substitutes `particular + sum t_k homogeneous_k` for the unknowns.
AtomMap solution_map(const LinearSystem& sys, const std::vector<Expr>& values);

}  // namespace liesym
