#include <cmath>
#include <random>

#include "doctest.h"
#include "liesym/symexpr/expr.hpp"
#include "liesym/symexpr/parse.hpp"
#include "random_expr.hpp"

using namespace liesym;

namespace {
Expr P(const char* s) { return parse(s); }
}  // namespace

TEST_CASE("parse builds canonical polynomials") {
  Expr e = P("x^2 + 2*x*y");
  CHECK(e.is_polynomial());
  CHECK(e.num().terms().size() == 2);
  CHECK(e == P("x*(x + 2*y)"));
  CHECK(e.to_string() == "x^2 + 2*x*y");
  CHECK(P("x*y - y*x").is_zero());
  CHECK(P("3/6*x").to_string() == "1/2*x");
}

TEST_CASE("parse accepts rational functions") {
  Expr ds = P("(1 + (K/4)*(-t^2+x^2+y^2+z^2))^(-2)");
  CHECK_FALSE(ds.is_polynomial());
  CHECK(ds * P("(1 + (K/4)*(-t^2+x^2+y^2+z^2))^2") == Expr(1));
  CHECK(parse(ds.to_string()) == ds);
  CHECK(P("(x^2 - 1)/(x - 1)") == P("x + 1"));
  CHECK(P("(x^2 - 1)/(x - 1)").is_polynomial());
}

TEST_CASE("function applications and formal derivatives") {
  declare_function("q", std::vector<std::string>{"t", "x", "u"});
  Expr qu = P("D[q,u]");
  CHECK(qu == Expr::atom(function_atom("q", {0, 0, 1})));
  CHECK(P("q(t,x,u)") == P("q"));
  CHECK(diff(P("q*u"), "u") == P("D[q,u]*u + q"));
  CHECK(P("D[q,x,u] - D[q,u,x]").is_zero());
  declare_function("f", std::vector<std::string>{"x", "y"});
  CHECK(diff(diff(P("f(x,y)"), "x"), "y") == diff(diff(P("f(x,y)"), "y"), "x"));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(P("x +"), ParseError);
  CHECK_THROWS_AS(P("x ^ y"), ParseError);
  CHECK_THROWS_AS(P("1.5*x"), ParseError);
  CHECK_THROWS_AS(P("g(x)"), ParseError);
  CHECK_THROWS_AS(P("x/0"), ParseError);
  try {
    P("x + * y");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  declare_function("h", std::vector<std::string>{"x"});
  CHECK_THROWS_AS(P("h(y)"), ParseError);
  CHECK_THROWS_AS(P("D[h,y]"), ParseError);
}

TEST_CASE("diff basics") {
  CHECK(diff(P("x^2"), "x") == P("2*x"));
  CHECK(diff(P("(x^2+y^2)/2"), "x") == P("x"));
  CHECK(diff(P("1/x"), "x") == P("-1/x^2"));
  CHECK(diff(P("exp(2*t)"), "t") == P("2*exp(2*t)"));
  CHECK(diff(P("exp(-t)"), "t") == P("-exp(-t)"));
  CHECK(diff(P("u*log(u)"), "u") == P("log(u) + 1"));
  CHECK(diff(P("7"), "x").is_zero());
}

TEST_CASE("collect_monomials splits by jet monomials") {
  Expr e = P("a*ux^2 + b*ux + c");
  auto groups = collect_monomials(e, {symbol("ux")});
  REQUIRE(groups.size() == 3);
  CHECK(groups[0].first.is_one());
  CHECK(groups[0].second == P("c"));
  CHECK(groups[1].first == Monomial::of(symbol("ux")));
  CHECK(groups[1].second == P("b"));
  CHECK(groups[2].second == P("a"));
  Expr rebuilt(0);
  for (auto& [m, c] : groups) rebuilt += Expr::from_poly(Poly::monomial(m)) * c;
  CHECK(rebuilt == e);
  CHECK_THROWS_AS(collect_monomials(P("1/(ux + 1)"), {symbol("ux")}), NotPolynomialError);
}

TEST_CASE("substitution") {
  CHECK(substitute(P("x^2 + y"), AtomMap{{symbol("x"), P("y + 1")}}) == P("y^2 + 3*y + 1"));
  declare_function("T", std::vector<std::string>{"t"});
  Expr e = P("D[T,t,t] + T");
  CHECK(substitute_function(e, "T", P("t^3")) == P("6*t + t^3"));
  CHECK(substitute(P("1/(x+1)"), AtomMap{{symbol("x"), P("2")}}) == Expr(Rational(1, 3)));
}

TEST_CASE("ring axioms and round trip on random expressions") {
  std::vector<AtomId> atoms{symbol("x"), symbol("y"), symbol("z"), function_atom("f"), exp_atom(symbol("x"))};
  testing::RandomExpr gen(atoms, 1234);
  for (int trial = 0; trial < 40; ++trial) {
    Expr a = gen.rational(3, 2), b = gen.rational(3, 2), c = gen.rational(3, 2);
    CHECK(((a + b) + c - (a + (b + c))).is_zero());
    CHECK((a * (b + c) - (a * b + a * c)).is_zero());
    CHECK((a * b - b * a).is_zero());
    if (!b.is_zero()) CHECK(((a / b) * b - a).is_zero());
    CHECK(parse(a.to_string()) == a);
    CHECK(parse(a.to_string()).to_string() == a.to_string());
    Expr dxy = diff(diff(a * b, "x"), "y"), dyx = diff(diff(a * b, "y"), "x");
    CHECK((dxy - dyx).is_zero());
  }
}

TEST_CASE("diff agrees with central finite differences") {
  AtomId x = symbol("x"), y = symbol("y");
  testing::RandomExpr gen({x, y}, 99);
  std::uniform_real_distribution<double> pt(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Expr e = gen.rational(4, 3);
    Expr de = diff(e, x);
    const double px = pt(gen.engine()), py = pt(gen.engine());
    const double h = 1e-5;
    auto at = [&](const Expr& f, double xv) {
      return f.evaluate([&](AtomId a) { return a == x ? xv : py; });
    };
    const double fd = (at(e, px + h) - at(e, px - h)) / (2 * h);
    const double ex = at(de, px);
    CHECK(std::abs(fd - ex) <= 1e-6 * std::max(1.0, std::abs(ex)));
  }
}
