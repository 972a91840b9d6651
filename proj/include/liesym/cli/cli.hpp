#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace liesym::cli {

/// Problem-spec error; the message names the offending field. Exit code 2.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs one command. Returns 0 on success, 2 on a spec error and 1 when an
/// internal invariant fails.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace liesym::cli
