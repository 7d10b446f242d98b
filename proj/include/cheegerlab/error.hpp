#pragma once

#include <stdexcept>
#include <string>

namespace cheegerlab {

enum class ErrorKind {
  dimension,
  invalid_input,
  undefined_input,
  unsupported_order,
  degenerate_overlap,
  precondition,
  budget,
  inapplicable_bound,
  invalid_spec,
  parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cheegerlab
