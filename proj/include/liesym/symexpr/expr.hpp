#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liesym/symexpr/atom.hpp"
#include "liesym/symexpr/poly.hpp"

namespace liesym {

/// Immutable exact symbolic value: a polynomial numerator over atoms divided
/// by a product of registered factor powers. Every constructor returns the
/// canonical form, so `is_zero` is a decision procedure and equality is
/// mathematical equality within the rational-function fragment.
class Expr {
 public:
  Expr();
  Expr(int c);
  Expr(long c);
  Expr(const Rational& c);

  static Expr atom(AtomId a);
  static Expr sym(std::string_view name);
  /// Undifferentiated application of a declared function.
  static Expr func(std::string_view name);
  static Expr exp(AtomId var);
  static Expr log(AtomId var);
  static Expr from_poly(Poly p);
  static Expr fraction(Poly num, Denominator den);

  const Poly& num() const;
  const Denominator& den() const;
  Poly den_poly() const;

  bool is_zero() const { return num().is_zero(); }
  bool is_polynomial() const { return den().empty(); }
  bool is_rational() const { return den().empty() && num().is_constant(); }
  std::optional<Rational> as_rational() const;
  Rational rational() const;

  /// Atoms appearing in numerator or denominator.
  std::vector<AtomId> atoms() const;
  bool contains_atom(AtomId a) const;
  /// True when some atom is `var` or is a function/exp/log of `var`.
  bool depends_on(AtomId var) const;

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr& operator/=(const Expr& o) { return *this = *this / o; }
  Expr pow(int e) const;
  Expr inverse() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  /// Canonical text in the parser grammar; parse(to_string()) == *this.
  std::string to_string() const;

  double evaluate(const std::function<double(AtomId)>& value) const;

 private:
  struct Rep {
    Poly num;
    Denominator den;
  };
  std::shared_ptr<const Rep> rep_;
  explicit Expr(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  static Expr make(Poly num, Denominator den);
  static Expr inverse_poly(const Poly& p);
};

std::ostream& operator<<(std::ostream& os, const Expr& e);

bool is_zero(const Expr& e);

/// Exact partial derivative with respect to a symbol.
Expr diff(const Expr& e, AtomId var);
Expr diff(const Expr& e, AtomId var, int times);
Expr diff(const Expr& e, std::string_view var);

using AtomMap = std::map<AtomId, Expr>;

/// Replaces atoms; `repl` returns nullopt to keep an atom.
Expr substitute(const Expr& e, const std::function<std::optional<Expr>(AtomId)>& repl);
Expr substitute(const Expr& e, const AtomMap& map);
/// Replaces every atom of function `name` (and its derivatives) by the
/// corresponding derivative of `value`, written over the declared arguments.
Expr substitute_function(const Expr& e, std::string_view name, const Expr& value);

/// Numerator after clearing the (nonzero) denominator.
Expr clear_denominator(const Expr& e);

class NotPolynomialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Splits e = sum_m m * coef(m) with m ranging over monomials in `vars`.
/// Entries are ordered by the printing order of monomials; coefficients are
/// free of `vars`. Throws NotPolynomialError when a denominator involves a var.
std::vector<std::pair<Monomial, Expr>> collect_monomials(const Expr& e, const std::vector<AtomId>& vars);

/// Coefficient of var^k (other atoms treated as coefficients).
Expr coefficient(const Expr& e, AtomId var, int k);

}  // namespace liesym
