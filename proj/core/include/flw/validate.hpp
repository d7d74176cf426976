#pragma once

#include <string>
#include <vector>

#include "flw/ir.hpp"

namespace flw {

/// One well-formedness violation.  `rule` is a stable identifier such as
/// `call-arity` or `duplicate-constructor`; `decl` names the offending
/// function or type declaration.
struct Violation {
  std::string decl;
  std::string rule;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate(const Program& program);

/// Thrown by operations that require a valid program.
struct ValidationError : Error {
  explicit ValidationError(std::vector<Violation> v);
  std::vector<Violation> violations;
};

std::string to_string(const Violation& v);

}  // namespace flw
