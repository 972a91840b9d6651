#include "liesym/symexpr/parse.hpp"

#include <cctype>

namespace liesym {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool at_ident() {
    skip();
    return pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]));
  }

  std::string ident() {
    skip();
    if (!at_ident()) fail("expected identifier");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+'))
        e += term();
      else if (accept('-'))
        e -= term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e *= unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Expr d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        e /= d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    const std::size_t at = pos_;
    Expr ex = unary();
    auto r = ex.as_rational();
    if (!r || r->get_den() != 1 || !r->get_num().fits_sint_p()) throw ParseError("exponent must be an integer", at);
    const int k = static_cast<int>(r->get_num().get_si());
    if (k < 0 && base.is_zero()) throw ParseError("division by zero", at);
    return base.pow(k);
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '.') fail("decimal numbers are not supported");
      return Expr(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (!at_ident()) fail("unexpected '" + std::string(1, c) + "'");
    const std::size_t at = pos_;
    const std::string name = ident();
    if (name == "D") return derivative(at);
    if (name == "exp") return exponential();
    if (name == "log") {
      expect('(');
      const std::size_t vat = pos_;
      Expr v = expr();
      expect(')');
      return Expr::log(plain_variable(v, vat, "log"));
    }
    if (auto sig = function_signature(name)) {
      skip();
      if (accept('(')) {
        for (std::size_t k = 0; k < sig->size(); ++k) {
          if (k) expect(',');
          const std::size_t aat = pos_;
          if (ident() != atom_info((*sig)[k]).name)
            throw ParseError("argument " + std::to_string(k + 1) + " of '" + name + "' must be '" +
                                 atom_info((*sig)[k]).name + "'",
                             aat);
        }
        expect(')');
      }
      return Expr::func(name);
    }
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') throw ParseError("unknown function '" + name + "'", at);
    return Expr::sym(name);
  }

  Expr derivative(std::size_t at) {
    expect('[');
    const std::string f = ident();
    auto sig = function_signature(f);
    if (!sig) throw ParseError("unknown function '" + f + "'", at);
    std::vector<int> orders(sig->size(), 0);
    while (accept(',')) {
      const std::size_t vat = pos_;
      const std::string v = ident();
      bool found = false;
      for (std::size_t k = 0; k < sig->size(); ++k)
        if (atom_info((*sig)[k]).name == v) {
          ++orders[k];
          found = true;
        }
      if (!found) throw ParseError("'" + v + "' is not an argument of '" + f + "'", vat);
    }
    expect(']');
    return Expr::atom(function_atom(f, orders));
  }

  Expr exponential() {
    expect('(');
    const std::size_t at = pos_;
    Expr arg = expr();
    expect(')');
    if (arg.is_zero()) return Expr(1);
    // Only integer multiples of a single variable are representable.
    if (arg.is_polynomial() && arg.num().is_monomial()) {
      const Term& t = arg.num().terms()[0];
      if (t.coef.get_den() == 1 && t.coef.get_num().fits_sint_p() && t.mono.factors().size() == 1 &&
          t.mono.factors()[0].second == 1 && atom_info(t.mono.factors()[0].first).kind == AtomKind::Symbol)
        return Expr::exp(t.mono.factors()[0].first).pow(static_cast<int>(t.coef.get_num().get_si()));
    }
    throw ParseError("exp takes an integer multiple of a variable", at);
  }

  static AtomId plain_variable(const Expr& v, std::size_t at, const char* what) {
    if (v.is_polynomial() && v.num().is_monomial()) {
      const Term& t = v.num().terms()[0];
      if (t.coef == 1 && t.mono.factors().size() == 1 && t.mono.factors()[0].second == 1 &&
          atom_info(t.mono.factors()[0].first).kind == AtomKind::Symbol)
        return t.mono.factors()[0].first;
    }
    throw ParseError(std::string(what) + " takes a plain variable", at);
  }
};

}  // namespace

Expr parse(std::string_view text) {
  try {
    return Parser(text).run();
  } catch (const SymbolError& e) {
    throw ParseError(e.what(), 0);
  }
}

}  // namespace liesym
