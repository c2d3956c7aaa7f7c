#pragma once

#include <stdexcept>
#include <string>

namespace imdd {

enum class ErrorKind {
  invalid_constellation,
  not_admissible,
  catalog_miss,
  infeasible,
  resource_cap,
  bracketing,
  dimension_mismatch,
  invalid_argument,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace imdd
