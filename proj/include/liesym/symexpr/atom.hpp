#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace liesym {

/// Index into the process-wide atom registry.
using AtomId = std::uint32_t;

enum class AtomKind : std::uint8_t { Symbol, Function, Exp, Log };

/// An indeterminate of the polynomial ring. Symbols are plain variables and
/// named constants. Function atoms are applications f(v1..vk) of an opaque
/// function to its declared plain-variable arguments, together with a
/// derivative order per argument, so f_{,xy} and f_{,yx} are the same atom.
/// Exp and Log atoms wrap a single plain variable.
struct AtomInfo {
  AtomKind kind = AtomKind::Symbol;
  std::string name;
  std::vector<AtomId> args;
  std::vector<int> orders;

  bool is_derivative() const {
    for (int o : orders)
      if (o != 0) return true;
    return false;
  }
};

class SymbolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Returns the symbol atom with this name, registering it on first use.
AtomId symbol(std::string_view name);
std::optional<AtomId> find_symbol(std::string_view name);

/// Declares an opaque function with plain-variable arguments. Redeclaring
/// with the same arguments is a no-op; a different signature throws.
void declare_function(std::string_view name, const std::vector<AtomId>& args);
void declare_function(std::string_view name, const std::vector<std::string>& args);
/// Declares `base` (or `base_2`, `base_3`, ... when taken) with these
/// arguments and returns the name used.
std::string declare_function_unique(std::string_view base, const std::vector<AtomId>& args);
std::optional<std::vector<AtomId>> function_signature(std::string_view name);

/// Atom for f differentiated `orders[k]` times in its k-th argument.
AtomId function_atom(std::string_view name, const std::vector<int>& orders);
/// Undifferentiated application f(args).
AtomId function_atom(std::string_view name);

AtomId exp_atom(AtomId var);
AtomId log_atom(AtomId var);

/// Reference is stable for the lifetime of the process.
const AtomInfo& atom_info(AtomId id);

/// Total order used for printing and any user-visible ordering. It depends
/// only on atom content, never on registration order.
bool atom_print_less(AtomId a, AtomId b);

/// Printed form in the expression grammar, e.g. `x`, `q(t,x,u)`,
/// `D[q,u]`, `exp(t)`.
std::string atom_to_string(AtomId id);

/// True when `var` is a symbol that `atom` may depend on, i.e. the atom
/// itself, a function atom with `var` among its arguments, or exp/log of it.
bool atom_depends_on(AtomId atom, AtomId var);

}  // namespace liesym
