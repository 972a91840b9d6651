#include <random>

#include "doctest.h"
#include "liesym/symexpr/linear.hpp"
#include "liesym/symexpr/parse.hpp"

using namespace liesym;

namespace {

Matrix<Rational> random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, std::size_t rank) {
  std::uniform_int_distribution<int> d(-4, 4);
  Matrix<Rational> left(rows, std::vector<Rational>(rank)), right(rank, std::vector<Rational>(cols));
  for (auto& r : left)
    for (auto& x : r) x = Rational(d(rng), 1 + (d(rng) + 4) % 3), x.canonicalize();
  for (auto& r : right)
    for (auto& x : r) x = d(rng);
  Matrix<Rational> m(rows, std::vector<Rational>(cols, Rational(0)));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t k = 0; k < rank; ++k) m[i][j] += left[i][k] * right[k][j];
  return m;
}

}  // namespace

TEST_CASE("fraction-free nullspace matches rational Gauss-Jordan") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 3 + trial % 5, cols = 4 + trial % 6, r = 1 + trial % 4;
    auto m = random_matrix(rng, rows, cols, std::min({r, rows, cols}));
    auto ff = nullspace(m, cols);
    auto gj = nullspace_rational_gj(m, cols);
    REQUIRE(ff.size() == gj.size());
    for (std::size_t k = 0; k < ff.size(); ++k)
      for (std::size_t j = 0; j < cols; ++j) CHECK(ff[k][j] == gj[k][j]);
    for (const auto& v : ff)
      for (const auto& row : m) {
        Rational s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += row[j] * v[j];
        CHECK(s == 0);
      }
  }
}

TEST_CASE("fraction-free elimination keeps integer entries") {
  Matrix<Integer> m{{2, 3, 4}, {4, 6, 9}, {1, 1, 1}};
  auto ff = fraction_free_gauss_jordan(m, 3);
  CHECK(ff.pivots.size() == 3);
  // The final divisor is the determinant up to sign.
  CHECK(abs(ff.divisor) == 1);
}

TEST_CASE("symbolic nullspace over a parameter field") {
  Expr k = parse("K");
  Matrix<Expr> m{{Expr(1), k, k * k}, {k, k * k, k * k * k}};
  auto ns = nullspace(m, 3);
  CHECK(ns.size() == 2);
  for (const auto& v : ns) CHECK((v[0] + k * v[1] + k * k * v[2]).is_zero());
  CHECK(rank(Matrix<Expr>{{k, Expr(1)}, {Expr(1), k}}, 2) == 2);
}

TEST_CASE("linear systems from identically vanishing expressions") {
  AtomId a = symbol("a0"), b = symbol("b0");
  // (a0 - 2) x^2 + (a0 + b0) x = 0 for all x.
  auto sys = linear_system({parse("(a0 - 2)*x^2 + (a0 + b0)*x")}, {a, b});
  auto sol = solve(sys);
  REQUIRE(sol.consistent);
  CHECK(sol.homogeneous.empty());
  CHECK(sol.particular[0] == Expr(2));
  CHECK(sol.particular[1] == Expr(-2));
  auto bad = solve(linear_system({parse("a0*x + x"), parse("a0 - 3")}, {a}));
  CHECK_FALSE(bad.consistent);
  CHECK_THROWS_AS(linear_system({parse("a0*b0")}, {a, b}), NonlinearError);
  auto par = solve(linear_system({parse("K*a0*x + b0*x")}, {a, b}, {symbol("K")}));
  REQUIRE(par.homogeneous.size() == 1);
  CHECK((parse("K") * par.homogeneous[0][0] + par.homogeneous[0][1]).is_zero());
}
