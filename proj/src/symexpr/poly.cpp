#include "liesym/symexpr/poly.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace liesym {

// ---- Monomial -------------------------------------------------------------

Monomial Monomial::of(AtomId a, int e) {
  Monomial m;
  if (e > 0) m.factors_.emplace_back(a, e);
  return m;
}

int Monomial::degree() const {
  int d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

int Monomial::degree_in(AtomId a) const {
  for (const auto& f : factors_)
    if (f.first == a) return f.second;
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + o.factors_.size());
  auto i = factors_.begin(), j = o.factors_.begin();
  while (i != factors_.end() && j != o.factors_.end()) {
    if (i->first == j->first) {
      r.factors_.emplace_back(i->first, i->second + j->second);
      ++i, ++j;
    } else if (i->first < j->first) {
      r.factors_.push_back(*i++);
    } else {
      r.factors_.push_back(*j++);
    }
  }
  r.factors_.insert(r.factors_.end(), i, factors_.end());
  r.factors_.insert(r.factors_.end(), j, o.factors_.end());
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  auto j = o.factors_.begin();
  for (const auto& f : factors_) {
    while (j != o.factors_.end() && j->first < f.first) ++j;
    if (j == o.factors_.end() || j->first != f.first || j->second < f.second) return false;
  }
  return true;
}

Monomial Monomial::divided_by(const Monomial& o) const {
  Monomial r;
  auto j = o.factors_.begin();
  for (const auto& f : factors_) {
    int e = f.second;
    if (j != o.factors_.end() && j->first == f.first) {
      e -= j->second;
      ++j;
    }
    if (e > 0) r.factors_.emplace_back(f.first, e);
  }
  return r;
}

Monomial Monomial::restricted(const std::function<bool(AtomId)>& keep) const {
  Monomial r;
  for (const auto& f : factors_)
    if (keep(f.first)) r.factors_.push_back(f);
  return r;
}

Monomial Monomial::without(AtomId a) const {
  return restricted([a](AtomId x) { return x != a; });
}

bool operator<(const Monomial& a, const Monomial& b) {
  const int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  auto i = a.factors_.begin(), j = b.factors_.begin();
  while (i != a.factors_.end() && j != b.factors_.end()) {
    if (i->first == j->first) {
      if (i->second != j->second) return i->second < j->second;
      ++i, ++j;
    } else {
      // The side holding the smaller id has the larger exponent there.
      return i->first > j->first;
    }
  }
  return false;
}

bool Monomial::print_less(const Monomial& a, const Monomial& b) {
  const int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  auto sorted = [](const Monomial& m) {
    auto f = m.factors_;
    std::sort(f.begin(), f.end(), [](const Factor& x, const Factor& y) { return atom_print_less(x.first, y.first); });
    return f;
  };
  const auto fa = sorted(a), fb = sorted(b);
  std::size_t i = 0, j = 0;
  while (i < fa.size() && j < fb.size()) {
    if (fa[i].first == fb[j].first) {
      if (fa[i].second != fb[j].second) return fa[i].second < fb[j].second;
      ++i, ++j;
    } else {
      return atom_print_less(fb[j].first, fa[i].first);
    }
  }
  return false;
}

std::string Monomial::to_string() const {
  if (factors_.empty()) return "1";
  auto f = factors_;
  std::sort(f.begin(), f.end(), [](const Factor& x, const Factor& y) { return atom_print_less(x.first, y.first); });
  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s += "*";
    s += atom_to_string(f[i].first);
    if (f[i].second != 1) s += "^" + std::to_string(f[i].second);
  }
  return s;
}

// ---- Poly -----------------------------------------------------------------

Poly::Poly(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial{}, c});
}

Poly Poly::atom(AtomId a, int e) { return monomial(Monomial::of(a, e)); }

Poly Poly::monomial(const Monomial& m, const Rational& c) {
  Poly p;
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  Poly p;
  p.terms_ = std::move(terms);
  p.canonicalize();
  return p;
}

void Poly::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.mono < b.mono; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && out.back().coef == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coef == 0) out.pop_back();
  terms_ = std::move(out);
}

Rational Poly::constant_value() const {
  if (terms_.empty()) return 0;
  if (terms_.size() == 1 && terms_[0].mono.is_one()) return terms_[0].coef;
  throw std::logic_error("polynomial is not constant");
}

int Poly::total_degree() const { return terms_.empty() ? -1 : terms_.back().mono.degree(); }

int Poly::degree_in(AtomId a) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree_in(a));
  return d;
}

std::vector<AtomId> Poly::atoms() const {
  std::vector<AtomId> out;
  for (const auto& t : terms_)
    for (const auto& f : t.mono.factors()) out.push_back(f.first);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Poly::contains(AtomId a) const {
  for (const auto& t : terms_)
    if (t.mono.degree_in(a) > 0) return true;
  return false;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r;
  r.terms_.reserve(terms_.size() + o.terms_.size());
  auto i = terms_.begin(), j = o.terms_.begin();
  while (i != terms_.end() && j != o.terms_.end()) {
    if (i->mono == j->mono) {
      Rational c = i->coef + j->coef;
      if (c != 0) r.terms_.push_back({i->mono, std::move(c)});
      ++i, ++j;
    } else if (i->mono < j->mono) {
      r.terms_.push_back(*i++);
    } else {
      r.terms_.push_back(*j++);
    }
  }
  r.terms_.insert(r.terms_.end(), i, terms_.end());
  r.terms_.insert(r.terms_.end(), j, o.terms_.end());
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (terms_.empty() || o.terms_.empty()) return {};
  if (o.terms_.size() == 1) return times(o.terms_[0].mono) * o.terms_[0].coef;
  if (terms_.size() == 1) return o.times(terms_[0].mono) * terms_[0].coef;
  std::vector<Term> prod;
  prod.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) prod.push_back({a.mono * b.mono, a.coef * b.coef});
  return from_terms(std::move(prod));
}

Poly Poly::operator*(const Rational& c) const {
  if (c == 0) return {};
  Poly r = *this;
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

Poly Poly::times(const Monomial& m) const {
  Poly r = *this;
  if (m.is_one()) return r;
  // Multiplying by a monomial preserves the internal order.
  for (auto& t : r.terms_) t.mono = t.mono * m;
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly result(1), base = *this;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coef != b.terms_[i].coef) return false;
  return true;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) throw std::domain_error("division by zero polynomial");
  if (is_zero()) return Poly{};
  const Term& ld = d.leading();
  if (d.terms_.size() == 1) {
    Poly q;
    q.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!ld.mono.divides(t.mono)) return std::nullopt;
      q.terms_.push_back({t.mono.divided_by(ld.mono), t.coef / ld.coef});
    }
    return q;
  }
  // Quick necessary conditions: degree in every atom of d must fit.
  for (const auto& f : ld.mono.factors())
    if (degree_in(f.first) < f.second) return std::nullopt;
  if (total_degree() < d.total_degree()) return std::nullopt;
  Poly r = *this;
  std::vector<Term> q;
  while (!r.is_zero()) {
    const Term& lr = r.leading();
    if (!ld.mono.divides(lr.mono)) return std::nullopt;
    Term t{lr.mono.divided_by(ld.mono), lr.coef / ld.coef};
    r = r - d.times(t.mono) * t.coef;
    q.push_back(std::move(t));
  }
  return from_terms(std::move(q));
}

Monomial Poly::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial g = terms_.front().mono;
  for (const auto& t : terms_) {
    std::vector<Monomial::Factor> keep;
    for (const auto& f : g.factors()) {
      const int e = std::min(f.second, t.mono.degree_in(f.first));
      if (e > 0) keep.emplace_back(f.first, e);
    }
    Monomial m;
    for (const auto& f : keep) m = m * Monomial::of(f.first, f.second);
    g = m;
    if (g.is_one()) break;
  }
  return g;
}

Rational Poly::content() const {
  if (terms_.empty()) return 0;
  Integer num = 0, den = 1;
  for (const auto& t : terms_) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coef.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coef.get_den_mpz_t());
  }
  Rational c(num, den);
  c.canonicalize();
  return c;
}

std::string Poly::key() const {
  std::string k;
  for (const auto& t : terms_) {
    k += t.coef.get_str();
    for (const auto& f : t.mono.factors()) k += "*" + std::to_string(f.first) + "^" + std::to_string(f.second);
    k += ";";
  }
  return k;
}

// ---- Factor registry ------------------------------------------------------

namespace {
struct FactorRegistry {
  std::shared_mutex mutex;
  std::deque<Poly> polys;
  std::unordered_map<std::string, FactorId> by_key;
};
FactorRegistry& factors() {
  static FactorRegistry r;
  return r;
}
}  // namespace

FactorId register_factor(const Poly& p) {
  auto& r = factors();
  const std::string k = p.key();
  {
    std::shared_lock lock(r.mutex);
    if (auto it = r.by_key.find(k); it != r.by_key.end()) return it->second;
  }
  std::unique_lock lock(r.mutex);
  if (auto it = r.by_key.find(k); it != r.by_key.end()) return it->second;
  const auto id = static_cast<FactorId>(r.polys.size());
  r.polys.push_back(p);
  r.by_key.emplace(k, id);
  return id;
}

const Poly& factor_poly(FactorId id) {
  auto& r = factors();
  std::shared_lock lock(r.mutex);
  return r.polys.at(id);
}

std::vector<FactorId> known_factors() {
  auto& r = factors();
  std::shared_lock lock(r.mutex);
  std::vector<FactorId> ids(r.polys.size());
  for (FactorId i = 0; i < ids.size(); ++i) ids[i] = i;
  return ids;
}

}  // namespace liesym
