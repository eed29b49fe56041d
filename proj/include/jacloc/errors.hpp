#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace jacloc {

/// Base class for all domain errors. `name()` is a stable machine-readable
/// identifier that the CLI echoes verbatim in error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message)
      : std::runtime_error(message), name_(std::move(name)) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DegreeMismatchError : public Error {
 public:
  explicit DegreeMismatchError(const std::string& message)
      : Error("DegreeMismatch", message) {}
};

class MDegreeMismatchError : public Error {
 public:
  explicit MDegreeMismatchError(const std::string& message)
      : Error("MDegreeMismatch", message) {}
};

class NonRationalPhiError : public Error {
 public:
  explicit NonRationalPhiError(const std::string& message)
      : Error("NonRationalPhi", message) {}
};

class NonStabilizedError : public Error {
 public:
  explicit NonStabilizedError(const std::string& message)
      : Error("NonStabilized", message) {}
};

class NegativeVariableCountError : public Error {
 public:
  explicit NegativeVariableCountError(const std::string& message)
      : Error("NegativeVariableCount", message) {}
};

class ScaleLimitError : public Error {
 public:
  explicit ScaleLimitError(const std::string& message)
      : Error("ScaleLimit", message) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message)
      : Error("Schema", message) {}
};

/// Malformed in-memory data (bad ids, broken invariants). Distinct from
/// SchemaError, which is reserved for input-file violations.
class InvalidDataError : public Error {
 public:
  explicit InvalidDataError(const std::string& message)
      : Error("InvalidData", message) {}
};

}  // namespace jacloc
