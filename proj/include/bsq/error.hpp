#pragma once

#include <stdexcept>
#include <string>

namespace bsq {

/// Base class for every error raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller passed a value outside an operation's domain (non-finite,
/// non-positive step, malformed field).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A tridiagonal system produced a zero pivot.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (ESRI grid, configuration document).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration. `key_path` names the offending entry,
/// e.g. "numerics.cfl_target".
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(key_path + ": " + what), key_path_(std::move(key_path)) {}
  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

/// The time loop detected a blow-up or a non-finite value.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace bsq
