#include "depthsim/error.hpp"

namespace depthsim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Config: return "config";
    case ErrorKind::DegenerateFrame: return "degenerate_frame";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace depthsim
