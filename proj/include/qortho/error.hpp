#pragma once

#include <stdexcept>
#include <string>

namespace qortho {

enum class ErrorKind {
  bad_input,
  domain,
  zero_argument,
  table_miss,
  pole_proximity,
  truncation,
  resonance,
  non_convergence,
  degenerate_measure,
  no_sign_change,
  zero_det,
  inadmissible,
  division_by_zero,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace qortho
