#include "liesym/symexpr/expr.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

namespace liesym {
namespace {

bool is_atom_factor(const Poly& f, AtomId* atom = nullptr) {
  if (f.terms().size() != 1) return false;
  const Term& t = f.terms()[0];
  if (t.coef != 1 || t.mono.factors().size() != 1 || t.mono.factors()[0].second != 1) return false;
  if (atom) *atom = t.mono.factors()[0].first;
  return true;
}

void add_factor(Denominator& den, FactorId f, int e) {
  for (auto& d : den)
    if (d.first == f) {
      d.second += e;
      return;
    }
  den.emplace_back(f, e);
}

void sort_den(Denominator& den) {
  std::sort(den.begin(), den.end());
  den.erase(std::remove_if(den.begin(), den.end(), [](const auto& d) { return d.second == 0; }), den.end());
}

Poly expand(const Denominator& den) {
  Poly p(1);
  for (const auto& [f, e] : den) p = p * factor_poly(f).pow(static_cast<unsigned>(e));
  return p;
}


}  // namespace

// ---- construction ----------------------------------------------------------

Expr::Expr() : Expr(0) {}
Expr::Expr(int c) : Expr(Rational(c)) {}
Expr::Expr(long c) : Expr(Rational(c)) {}
Expr::Expr(const Rational& c) {
  Rational r = c;
  r.canonicalize();
  rep_ = std::make_shared<const Rep>(Rep{Poly(r), {}});
}

Expr Expr::atom(AtomId a) { return Expr(std::make_shared<const Rep>(Rep{Poly::atom(a), {}})); }
Expr Expr::sym(std::string_view name) { return atom(symbol(name)); }
Expr Expr::func(std::string_view name) { return atom(function_atom(name)); }
Expr Expr::exp(AtomId var) { return atom(exp_atom(var)); }
Expr Expr::log(AtomId var) { return atom(log_atom(var)); }
Expr Expr::from_poly(Poly p) { return Expr(std::make_shared<const Rep>(Rep{std::move(p), {}})); }
Expr Expr::fraction(Poly num, Denominator den) { return make(std::move(num), std::move(den)); }

Expr Expr::make(Poly num, Denominator den) {
  sort_den(den);
  if (num.is_zero()) return Expr(0);
  for (auto& [f, e] : den) {
    const Poly& fp = factor_poly(f);
    AtomId a;
    if (is_atom_factor(fp, &a)) {
      int k = e;
      for (const auto& t : num.terms()) {
        k = std::min(k, t.mono.degree_in(a));
        if (k == 0) break;
      }
      if (k > 0) {
        std::vector<Term> terms;
        terms.reserve(num.terms().size());
        const Monomial m = Monomial::of(a, k);
        for (const auto& t : num.terms()) terms.push_back({t.mono.divided_by(m), t.coef});
        num = Poly::from_terms(std::move(terms));
        e -= k;
      }
    } else {
      while (e > 0) {
        auto q = num.divide_exact(fp);
        if (!q) break;
        num = std::move(*q);
        --e;
      }
    }
  }
  sort_den(den);
  return Expr(std::make_shared<const Rep>(Rep{std::move(num), std::move(den)}));
}

Expr Expr::inverse_poly(const Poly& p) {
  if (p.is_zero()) throw std::domain_error("division by zero");
  Denominator den;
  const Monomial m = p.monomial_content();
  for (const auto& [a, e] : m.factors()) add_factor(den, register_factor(Poly::atom(a)), e);
  Poly rest = p;
  if (!m.is_one()) {
    std::vector<Term> terms;
    for (const auto& t : p.terms()) terms.push_back({t.mono.divided_by(m), t.coef});
    rest = Poly::from_terms(std::move(terms));
  }
  Rational c = rest.content();
  if (rest.leading().coef < 0) c = -c;
  rest = rest * Rational(1 / c);
  if (!rest.is_constant()) {
    for (FactorId f : known_factors()) {
      const Poly& fp = factor_poly(f);
      if (is_atom_factor(fp) || fp.total_degree() > rest.total_degree()) continue;
      while (!rest.is_constant()) {
        auto q = rest.divide_exact(fp);
        if (!q) break;
        rest = std::move(*q);
        add_factor(den, f, 1);
      }
      if (rest.is_constant()) break;
    }
    if (!rest.is_constant()) add_factor(den, register_factor(rest), 1);
  }
  // Any constant leftover is 1 by primitivity.
  return make(Poly(Rational(1 / c)), std::move(den));
}

// ---- accessors -------------------------------------------------------------

const Poly& Expr::num() const { return rep_->num; }
const Denominator& Expr::den() const { return rep_->den; }
Poly Expr::den_poly() const { return expand(den()); }

std::optional<Rational> Expr::as_rational() const {
  if (!is_rational()) return std::nullopt;
  return num().constant_value();
}

Rational Expr::rational() const {
  auto r = as_rational();
  if (!r) throw std::logic_error("expression is not a rational constant: " + to_string());
  return *r;
}

std::vector<AtomId> Expr::atoms() const {
  std::vector<AtomId> out = num().atoms();
  for (const auto& [f, e] : den()) {
    auto more = factor_poly(f).atoms();
    out.insert(out.end(), more.begin(), more.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Expr::contains_atom(AtomId a) const {
  if (num().contains(a)) return true;
  for (const auto& [f, e] : den())
    if (factor_poly(f).contains(a)) return true;
  return false;
}

bool Expr::depends_on(AtomId var) const {
  for (AtomId a : atoms())
    if (atom_depends_on(a, var)) return true;
  return false;
}

// ---- arithmetic ------------------------------------------------------------

Expr Expr::operator-() const { return Expr(std::make_shared<const Rep>(Rep{-num(), den()})); }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den() == b.den()) return Expr::make(a.num() + b.num(), a.den());
  Denominator lcm = a.den();
  for (const auto& [f, e] : b.den()) {
    bool found = false;
    for (auto& d : lcm)
      if (d.first == f) {
        d.second = std::max(d.second, e);
        found = true;
      }
    if (!found) lcm.emplace_back(f, e);
  }
  auto scale = [&](const Expr& x) {
    Denominator missing;
    for (const auto& [f, e] : lcm) {
      int have = 0;
      for (const auto& d : x.den())
        if (d.first == f) have = d.second;
      if (e > have) missing.emplace_back(f, e - have);
    }
    return x.num() * expand(missing);
  };
  Poly sum = scale(a) + scale(b);
  return Expr::make(std::move(sum), std::move(lcm));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr(0);
  if (a.is_rational()) {
    if (a.num().constant_value() == 1) return b;
    return Expr(std::make_shared<const Expr::Rep>(Expr::Rep{b.num() * a.num().constant_value(), b.den()}));
  }
  if (b.is_rational()) return b * a;
  Denominator den = a.den();
  for (const auto& [f, e] : b.den()) add_factor(den, f, e);
  if (den.empty()) return Expr::from_poly(a.num() * b.num());
  return Expr::make(a.num() * b.num(), std::move(den));
}

Expr Expr::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  Expr inv = inverse_poly(num());
  if (den().empty()) return inv;
  return make(expand(den()), {}) * inv;
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (auto r = b.as_rational()) return a * Expr(Rational(1 / *r));
  return a * b.inverse();
}

Expr Expr::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  if (e == 0) return Expr(1);
  if (den().empty()) return from_poly(num().pow(static_cast<unsigned>(e)));
  Denominator d = den();
  for (auto& x : d) x.second *= e;
  return make(num().pow(static_cast<unsigned>(e)), std::move(d));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.den() == b.den()) return a.num() == b.num();
  return (a - b).is_zero();
}

bool is_zero(const Expr& e) { return e.is_zero(); }

// ---- printing --------------------------------------------------------------

namespace {

std::string poly_to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::vector<const Term*> terms;
  for (const auto& t : p.terms()) terms.push_back(&t);
  std::sort(terms.begin(), terms.end(),
            [](const Term* a, const Term* b) { return Monomial::print_less(b->mono, a->mono); });
  std::string s;
  bool first = true;
  for (const Term* t : terms) {
    Rational c = t->coef;
    const bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    if (t->mono.is_one()) {
      s += c.get_str();
    } else {
      if (c != 1) s += c.get_str() + "*";
      s += t->mono.to_string();
    }
  }
  return s;
}

}  // namespace

std::string Expr::to_string() const {
  std::string n = poly_to_string(num());
  if (den().empty()) return n;
  if (num().terms().size() > 1) n = "(" + n + ")";
  std::vector<std::pair<std::string, int>> parts;
  for (const auto& [f, e] : den()) {
    const Poly& fp = factor_poly(f);
    std::string s = poly_to_string(fp);
    if (fp.terms().size() > 1) s = "(" + s + ")";
    parts.emplace_back(s, e);
  }
  std::sort(parts.begin(), parts.end());
  std::string d;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) d += "*";
    d += parts[i].first;
    if (parts[i].second != 1) d += "^" + std::to_string(parts[i].second);
  }
  if (parts.size() > 1 || parts[0].second != 1) d = "(" + d + ")";
  return n + "/" + d;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.to_string(); }

double Expr::evaluate(const std::function<double(AtomId)>& value) const {
  auto eval = [&](const Poly& p) {
    double s = 0;
    for (const auto& t : p.terms()) {
      double v = t.coef.get_d();
      for (const auto& [a, e] : t.mono.factors()) v *= std::pow(value(a), e);
      s += v;
    }
    return s;
  };
  double d = 1;
  for (const auto& [f, e] : den()) d *= std::pow(eval(factor_poly(f)), e);
  return eval(num()) / d;
}

// ---- calculus --------------------------------------------------------------

namespace {

// d(atom)/d(var) as an expression.
Expr atom_derivative(AtomId a, AtomId var) {
  const AtomInfo& info = atom_info(a);
  switch (info.kind) {
    case AtomKind::Symbol:
      return Expr(a == var ? 1 : 0);
    case AtomKind::Exp:
      return info.args[0] == var ? Expr::atom(a) : Expr(0);
    case AtomKind::Log:
      return info.args[0] == var ? Expr::atom(var).inverse() : Expr(0);
    case AtomKind::Function: {
      for (std::size_t k = 0; k < info.args.size(); ++k) {
        if (info.args[k] != var) continue;
        auto orders = info.orders;
        ++orders[k];
        return Expr::atom(function_atom(info.name, orders));
      }
      return Expr(0);
    }
  }
  return Expr(0);
}

Expr diff_poly(const Poly& p, AtomId var) {
  // Polynomial-valued atom derivatives are accumulated as one Poly.
  std::vector<Term> poly_terms;
  Expr other(0);
  std::map<AtomId, Expr> cache;
  for (const auto& t : p.terms()) {
    for (const auto& [a, e] : t.mono.factors()) {
      if (!atom_depends_on(a, var)) continue;
      auto it = cache.find(a);
      if (it == cache.end()) it = cache.emplace(a, atom_derivative(a, var)).first;
      const Expr& da = it->second;
      if (da.is_zero()) continue;
      const Monomial rest = t.mono.divided_by(Monomial::of(a, 1));
      const Rational c = t.coef * e;
      if (da.is_polynomial()) {
        for (const auto& dt : da.num().terms()) poly_terms.push_back({rest * dt.mono, c * dt.coef});
      } else {
        other += Expr::from_poly(Poly::monomial(rest, c)) * da;
      }
    }
  }
  Expr result = Expr::from_poly(Poly::from_terms(std::move(poly_terms)));
  return other.is_zero() ? result : result + other;
}

}  // namespace

Expr diff(const Expr& e, AtomId var) {
  if (atom_info(var).kind != AtomKind::Symbol) throw SymbolError("can only differentiate with respect to a variable");
  if (!e.depends_on(var)) return Expr(0);
  Expr dn = diff_poly(e.num(), var);
  if (e.den().empty()) return dn;
  const Expr inv_den = Expr::fraction(Poly(1), e.den());
  Expr result = dn * inv_den;
  Expr log_deriv(0);
  for (const auto& [f, k] : e.den()) {
    const Poly& fp = factor_poly(f);
    bool dep = false;
    for (AtomId a : fp.atoms())
      if (atom_depends_on(a, var)) dep = true;
    if (!dep) continue;
    log_deriv += Expr(-k) * diff_poly(fp, var) / Expr::from_poly(fp);
  }
  if (!log_deriv.is_zero()) result += Expr::from_poly(e.num()) * inv_den * log_deriv;
  return result;
}

Expr diff(const Expr& e, AtomId var, int times) {
  Expr r = e;
  for (int i = 0; i < times; ++i) r = diff(r, var);
  return r;
}

Expr diff(const Expr& e, std::string_view var) { return diff(e, symbol(var)); }

// ---- substitution ----------------------------------------------------------

Expr substitute(const Expr& e, const std::function<std::optional<Expr>(AtomId)>& repl) {
  std::map<AtomId, std::optional<Expr>> cache;
  auto lookup = [&](AtomId a) -> const std::optional<Expr>& {
    auto it = cache.find(a);
    if (it == cache.end()) it = cache.emplace(a, repl(a)).first;
    return it->second;
  };
  auto subs_poly = [&](const Poly& p) {
    // Group terms by the replaced part of their monomial.
    std::map<Monomial, std::vector<Term>> groups;
    for (const auto& t : p.terms()) {
      Monomial kept, replaced;
      for (const auto& [a, k] : t.mono.factors()) {
        if (lookup(a))
          replaced = replaced * Monomial::of(a, k);
        else
          kept = kept * Monomial::of(a, k);
      }
      groups[replaced].push_back({kept, t.coef});
    }
    Expr out(0);
    for (auto& [rm, terms] : groups) {
      Expr factor(1);
      for (const auto& [a, k] : rm.factors()) factor *= lookup(a)->pow(k);
      out += Expr::from_poly(Poly::from_terms(std::move(terms))) * factor;
    }
    return out;
  };
  Expr result = subs_poly(e.num());
  for (const auto& [f, k] : e.den()) result /= subs_poly(factor_poly(f)).pow(k);
  return result;
}

Expr substitute(const Expr& e, const AtomMap& map) {
  if (map.empty()) return e;
  return substitute(e, [&](AtomId a) -> std::optional<Expr> {
    if (auto it = map.find(a); it != map.end()) return it->second;
    return std::nullopt;
  });
}

Expr substitute_function(const Expr& e, std::string_view name, const Expr& value) {
  return substitute(e, [&](AtomId a) -> std::optional<Expr> {
    const AtomInfo& info = atom_info(a);
    if (info.kind != AtomKind::Function || info.name != name) return std::nullopt;
    Expr v = value;
    for (std::size_t k = 0; k < info.args.size(); ++k) v = diff(v, info.args[k], info.orders[k]);
    return v;
  });
}

Expr clear_denominator(const Expr& e) { return Expr::from_poly(e.num()); }

// ---- monomial collection ---------------------------------------------------

std::vector<std::pair<Monomial, Expr>> collect_monomials(const Expr& e, const std::vector<AtomId>& vars) {
  const std::set<AtomId> var_set(vars.begin(), vars.end());
  for (const auto& [f, k] : e.den())
    for (AtomId a : factor_poly(f).atoms())
      if (var_set.count(a))
        throw NotPolynomialError("expression has " + atom_to_string(a) + " in a denominator");
  std::map<Monomial, std::vector<Term>> groups;
  for (const auto& t : e.num().terms()) {
    Monomial in = t.mono.restricted([&](AtomId a) { return var_set.count(a) > 0; });
    Monomial out = t.mono.restricted([&](AtomId a) { return var_set.count(a) == 0; });
    groups[in].push_back({out, t.coef});
  }
  std::vector<std::pair<Monomial, Expr>> result;
  for (auto& [m, terms] : groups) result.emplace_back(m, Expr::fraction(Poly::from_terms(std::move(terms)), e.den()));
  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) { return Monomial::print_less(a.first, b.first); });
  return result;
}

Expr coefficient(const Expr& e, AtomId var, int k) {
  for (auto& [m, c] : collect_monomials(e, {var}))
    if (m.degree_in(var) == k) return c;
  return Expr(0);
}

}  // namespace liesym
