#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace depthsim {

enum class ErrorKind {
  InvalidInput,
  Domain,
  Config,
  DegenerateFrame,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every library failure surfaces as this exception; `kind()` is stable and
// is what the CLI prints in its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace depthsim
