#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace powbench {

// Base class for every error raised by this library. The CLI maps any
// Error to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidParam : public Error {
 public:
  InvalidParam(std::string field, std::string reason)
      : Error("invalid parameter '" + field + "': " + reason),
        field(std::move(field)),
        reason(std::move(reason)) {}

  std::string field;
  std::string reason;
};

class MemoryCapExceeded : public Error {
 public:
  MemoryCapExceeded(std::uint64_t required_bytes, std::uint64_t cap_bytes)
      : Error("working set of " + std::to_string(required_bytes) +
              " bytes exceeds memory cap of " + std::to_string(cap_bytes) +
              " bytes"),
        required_bytes(required_bytes),
        cap_bytes(cap_bytes) {}

  std::uint64_t required_bytes;
  std::uint64_t cap_bytes;
};

class InvalidBudget : public Error {
 public:
  explicit InvalidBudget(double budget_s)
      : Error("budget must be positive, got " + std::to_string(budget_s)) {}
};

class TooFewSamples : public Error {
 public:
  explicit TooFewSamples(std::size_t n)
      : Error("need at least 2 samples, got " + std::to_string(n)), n(n) {}

  std::size_t n;
};

class SigmaZero : public Error {
 public:
  SigmaZero() : Error("all samples are equal; k-factor is undefined") {}
};

class InsufficientSamples : public Error {
 public:
  InsufficientSamples(std::string record_label, std::size_t have,
                      std::size_t want)
      : Error("record '" + record_label + "' has " + std::to_string(have) +
              " completed samples, need " + std::to_string(want)),
        record_label(std::move(record_label)) {}

  std::string record_label;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& detail)
      : Error("i/o error on '" + path + "': " + detail) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(std::int64_t found_version)
      : Error("unsupported schema_version " + std::to_string(found_version)),
        found_version(found_version) {}

  std::int64_t found_version;
};

class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string field, const std::string& detail)
      : Error("invariant violated on '" + field + "': " + detail),
        field(std::move(field)) {}

  std::string field;
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& what_is_empty)
      : Error(what_is_empty + " must not be empty") {}
};

class Unsupported : public Error {
 public:
  explicit Unsupported(const std::string& detail)
      : Error("unsupported on this platform: " + detail) {}
};

}  // namespace powbench
