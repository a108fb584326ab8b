#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace twocav {

// A physical or numerical invariant was violated at runtime (trace drift,
// negative eigenvalue, cross-validation gap above tolerance, ...).
// The CLI maps this to exit code 3.
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or semantically invalid configuration / usage.
// The CLI maps this to exit code 2.  `line` is 0 when the problem is not
// tied to a file line (semantic errors carry the field name instead);
// what() always contains the full diagnostic.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg, int line = 0,
                       std::string field = {})
      : std::runtime_error(
            (line > 0 ? "line " + std::to_string(line) + ": " : "") +
            (field.empty() ? "" : "[" + field + "] ") + msg),
        field_(std::move(field)),
        line_(line) {}

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

}  // namespace twocav
