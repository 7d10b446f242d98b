#include "cheegerlab/error.hpp"

namespace cheegerlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension: return "dimension error";
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::undefined_input: return "undefined input";
    case ErrorKind::unsupported_order: return "unsupported order";
    case ErrorKind::degenerate_overlap: return "degenerate overlap";
    case ErrorKind::precondition: return "precondition violated";
    case ErrorKind::budget: return "budget exceeded";
    case ErrorKind::inapplicable_bound: return "inapplicable bound";
    case ErrorKind::invalid_spec: return "invalid spec";
    case ErrorKind::parse: return "parse error";
  }
  return "error";
}

}  // namespace cheegerlab
