#pragma once

#include <stdexcept>
#include <string>

namespace lozenge {

// Error taxonomy shared by all modules. The CLI maps `validation` and
// `invalid_argument` to exit code 1, `capacity` and `convergence` to exit 2.
enum class ErrorKind {
  invalid_argument,
  validation,
  capacity,
  convergence,
  infeasible,
  numeric,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lozenge
