#include "bivirus/errors.hpp"

namespace bivirus {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
  }
  return "unknown";
}

}  // namespace bivirus
