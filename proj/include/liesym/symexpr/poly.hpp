#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liesym/symexpr/atom.hpp"

namespace liesym {

using Rational = mpq_class;
using Integer = mpz_class;

/// Power product of atoms with positive exponents, sorted by atom id.
class Monomial {
 public:
  using Factor = std::pair<AtomId, int>;

  Monomial() = default;
  static Monomial of(AtomId a, int e = 1);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  int degree() const;
  int degree_in(AtomId a) const;

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  /// this / o; requires o.divides(*this).
  Monomial divided_by(const Monomial& o) const;
  /// Drops every atom for which `keep` is false.
  Monomial restricted(const std::function<bool(AtomId)>& keep) const;
  Monomial without(AtomId a) const;

  /// Internal graded-lexicographic order over atom ids. Any monomial order
  /// works for the algorithms; printing uses `print_less`.
  friend bool operator<(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors_ == b.factors_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

  /// Graded order over the content-based atom order.
  static bool print_less(const Monomial& a, const Monomial& b);

  std::string to_string() const;

 private:
  std::vector<Factor> factors_;
};

struct Term {
  Monomial mono;
  Rational coef;
};

/// Sparse multivariate polynomial with exact rational coefficients. Terms are
/// kept sorted by the internal monomial order without zero coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const Rational& c);
  static Poly atom(AtomId a, int e = 1);
  static Poly monomial(const Monomial& m, const Rational& c = 1);
  static Poly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  Rational constant_value() const;
  bool is_monomial() const { return terms_.size() == 1; }
  const Term& leading() const { return terms_.back(); }
  int total_degree() const;
  int degree_in(AtomId a) const;
  std::vector<AtomId> atoms() const;
  bool contains(AtomId a) const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& c) const;
  Poly times(const Monomial& m) const;
  Poly pow(unsigned e) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }

  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Quotient when `d` divides this polynomial exactly, nullopt otherwise.
  std::optional<Poly> divide_exact(const Poly& d) const;

  /// Gcd of all monomials (atom-wise minimum exponent).
  Monomial monomial_content() const;
  /// Positive rational c with this = c * (integer primitive polynomial).
  Rational content() const;

  /// Stable textual key of the internal representation (registry lookups).
  std::string key() const;

 private:
  std::vector<Term> terms_;
  void canonicalize();
};

/// Power of a registered denominator factor.
using FactorId = std::uint32_t;
using Denominator = std::vector<std::pair<FactorId, int>>;

/// Registered denominator factors are integer primitive polynomials with a
/// positive leading coefficient, or single atoms.
FactorId register_factor(const Poly& p);
const Poly& factor_poly(FactorId id);
/// Known factors, in registration order (snapshot).
std::vector<FactorId> known_factors();

}  // namespace liesym
