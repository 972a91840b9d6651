#include "liesym/symexpr/atom.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace liesym {
namespace {

struct Registry {
  std::shared_mutex mutex;
  std::deque<AtomInfo> atoms;
  std::unordered_map<std::string, AtomId> by_key;
  std::unordered_map<std::string, std::vector<AtomId>> functions;
};

Registry& registry() {
  static Registry r;
  return r;
}

std::string key_of(const AtomInfo& info) {
  std::string key;
  key += static_cast<char>('0' + static_cast<int>(info.kind));
  key += info.name;
  for (AtomId a : info.args) key += "|" + std::to_string(a);
  key += "#";
  for (int o : info.orders) key += std::to_string(o) + ",";
  return key;
}

AtomId intern(AtomInfo info) {
  auto& r = registry();
  const std::string key = key_of(info);
  {
    std::shared_lock lock(r.mutex);
    if (auto it = r.by_key.find(key); it != r.by_key.end()) return it->second;
  }
  std::unique_lock lock(r.mutex);
  if (auto it = r.by_key.find(key); it != r.by_key.end()) return it->second;
  const auto id = static_cast<AtomId>(r.atoms.size());
  r.atoms.push_back(std::move(info));
  r.by_key.emplace(key, id);
  return id;
}

bool valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name[0])) return false;
  for (char c : name)
    if (!alpha(c) && !digit(c) && c != '_') return false;
  return true;
}

}  // namespace

AtomId symbol(std::string_view name) {
  if (!valid_identifier(name)) throw SymbolError("invalid symbol name '" + std::string(name) + "'");
  {
    auto& r = registry();
    std::shared_lock lock(r.mutex);
    if (r.functions.count(std::string(name)))
      throw SymbolError("'" + std::string(name) + "' is declared as a function");
  }
  AtomInfo info;
  info.kind = AtomKind::Symbol;
  info.name = std::string(name);
  return intern(std::move(info));
}

std::optional<AtomId> find_symbol(std::string_view name) {
  AtomInfo info;
  info.kind = AtomKind::Symbol;
  info.name = std::string(name);
  auto& r = registry();
  std::shared_lock lock(r.mutex);
  if (auto it = r.by_key.find(key_of(info)); it != r.by_key.end()) return it->second;
  return std::nullopt;
}

void declare_function(std::string_view name, const std::vector<AtomId>& args) {
  if (!valid_identifier(name)) throw SymbolError("invalid function name '" + std::string(name) + "'");
  if (name == "D" || name == "exp" || name == "log")
    throw SymbolError("'" + std::string(name) + "' is reserved");
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (atom_info(args[i]).kind != AtomKind::Symbol)
      throw SymbolError("function '" + std::string(name) + "' must take plain variables as arguments");
    for (std::size_t j = 0; j < i; ++j)
      if (args[i] == args[j])
        throw SymbolError("function '" + std::string(name) + "' repeats an argument");
  }
  if (find_symbol(name))
    throw SymbolError("'" + std::string(name) + "' is already a symbol");
  auto& r = registry();
  std::unique_lock lock(r.mutex);
  auto [it, inserted] = r.functions.emplace(std::string(name), args);
  if (!inserted && it->second != args)
    throw SymbolError("function '" + std::string(name) + "' redeclared with different arguments");
}

void declare_function(std::string_view name, const std::vector<std::string>& args) {
  std::vector<AtomId> ids;
  ids.reserve(args.size());
  for (const auto& a : args) ids.push_back(symbol(a));
  declare_function(name, ids);
}

std::string declare_function_unique(std::string_view base, const std::vector<AtomId>& args) {
  std::string name(base);
  for (int k = 2;; ++k) {
    auto sig = function_signature(name);
    if (sig && *sig == args) return name;
    if (!sig && !find_symbol(name)) {
      declare_function(name, args);
      return name;
    }
    name = std::string(base) + "_" + std::to_string(k);
  }
}

std::optional<std::vector<AtomId>> function_signature(std::string_view name) {
  auto& r = registry();
  std::shared_lock lock(r.mutex);
  if (auto it = r.functions.find(std::string(name)); it != r.functions.end()) return it->second;
  return std::nullopt;
}

AtomId function_atom(std::string_view name, const std::vector<int>& orders) {
  auto sig = function_signature(name);
  if (!sig) throw SymbolError("unknown function '" + std::string(name) + "'");
  if (orders.size() != sig->size())
    throw SymbolError("derivative orders do not match arguments of '" + std::string(name) + "'");
  for (int o : orders)
    if (o < 0) throw SymbolError("negative derivative order");
  AtomInfo info;
  info.kind = AtomKind::Function;
  info.name = std::string(name);
  info.args = *sig;
  info.orders = orders;
  return intern(std::move(info));
}

AtomId function_atom(std::string_view name) {
  auto sig = function_signature(name);
  if (!sig) throw SymbolError("unknown function '" + std::string(name) + "'");
  return function_atom(name, std::vector<int>(sig->size(), 0));
}

AtomId exp_atom(AtomId var) {
  if (atom_info(var).kind != AtomKind::Symbol) throw SymbolError("exp takes a plain variable");
  AtomInfo info;
  info.kind = AtomKind::Exp;
  info.name = "exp";
  info.args = {var};
  return intern(std::move(info));
}

AtomId log_atom(AtomId var) {
  if (atom_info(var).kind != AtomKind::Symbol) throw SymbolError("log takes a plain variable");
  AtomInfo info;
  info.kind = AtomKind::Log;
  info.name = "log";
  info.args = {var};
  return intern(std::move(info));
}

const AtomInfo& atom_info(AtomId id) {
  auto& r = registry();
  std::shared_lock lock(r.mutex);
  if (id >= r.atoms.size()) throw SymbolError("unknown atom id");
  return r.atoms[id];
}

bool atom_print_less(AtomId a, AtomId b) {
  if (a == b) return false;
  const AtomInfo& x = atom_info(a);
  const AtomInfo& y = atom_info(b);
  if (x.kind != y.kind) return x.kind < y.kind;
  if (x.name != y.name) return x.name < y.name;
  if (x.args != y.args) {
    const std::size_t n = std::min(x.args.size(), y.args.size());
    for (std::size_t i = 0; i < n; ++i)
      if (x.args[i] != y.args[i]) return atom_print_less(x.args[i], y.args[i]);
    return x.args.size() < y.args.size();
  }
  // Lower total derivative order first, then lexicographic.
  int tx = 0, ty = 0;
  for (int o : x.orders) tx += o;
  for (int o : y.orders) ty += o;
  if (tx != ty) return tx < ty;
  return x.orders > y.orders;
}

std::string atom_to_string(AtomId id) {
  const AtomInfo& info = atom_info(id);
  switch (info.kind) {
    case AtomKind::Symbol:
      return info.name;
    case AtomKind::Exp:
    case AtomKind::Log:
      return info.name + "(" + atom_info(info.args[0]).name + ")";
    case AtomKind::Function: {
      if (!info.is_derivative()) {
        std::string s = info.name + "(";
        for (std::size_t i = 0; i < info.args.size(); ++i) {
          if (i) s += ",";
          s += atom_info(info.args[i]).name;
        }
        return s + ")";
      }
      std::string s = "D[" + info.name;
      for (std::size_t i = 0; i < info.args.size(); ++i)
        for (int k = 0; k < info.orders[i]; ++k) s += "," + atom_info(info.args[i]).name;
      return s + "]";
    }
  }
  return "?";
}

bool atom_depends_on(AtomId atom, AtomId var) {
  if (atom == var) return true;
  const AtomInfo& info = atom_info(atom);
  for (AtomId a : info.args)
    if (a == var) return true;
  return false;
}

}  // namespace liesym
