#pragma once

#include <stdexcept>
#include <string>

namespace hforge {

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Candidate or expression text could not be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An evaluation ran past its wall-clock deadline or node budget.
class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The sampler failed to produce text (network, HTTP status, timeout).
class SampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration. `field` names the offending key when known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message, std::string field = {})
      : std::runtime_error(message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace hforge
