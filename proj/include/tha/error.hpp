#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tha {

/// Base of every error raised by the library. `code()` is a stable,
/// machine-parseable identifier printed by the CLI on failure.
class Error : public std::runtime_error {
 public:
  Error(std::string_view code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class DegenerateEnsembleError : public Error {
 public:
  explicit DegenerateEnsembleError(const std::string& what)
      : Error("degenerate_ensemble", what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error("numeric", what) {}
};

class LocateFailure : public Error {
 public:
  explicit LocateFailure(const std::string& what) : Error("locate_failure", what) {}
};

class DegenerateThresholdError : public Error {
 public:
  explicit DegenerateThresholdError(const std::string& what)
      : Error("degenerate_threshold", what) {}
};

class WrongRegimeError : public Error {
 public:
  explicit WrongRegimeError(const std::string& what) : Error("wrong_regime", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace tha
