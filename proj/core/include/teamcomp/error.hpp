#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace teamcomp {

enum class ErrorCategory { kValidation, kNumerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Input data or arguments violate a documented precondition or invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCategory::kValidation, what) {}
};

/// A line of a record file could not be decoded. Line numbers are 1-based.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A decoded record has the wrong shape (field count, team size, ...).
class SchemaError : public ValidationError {
 public:
  SchemaError(std::size_t line, std::string record, const std::string& what)
      : ValidationError("line " + std::to_string(line) + " (record '" + record + "'): " + what),
        line_(line),
        record_(std::move(record)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& record() const noexcept { return record_; }

 private:
  std::size_t line_;
  std::string record_;
};

/// A well-shaped record holds values outside their domain.
class RecordValidationError : public ValidationError {
 public:
  RecordValidationError(std::size_t line, std::string record, const std::string& what)
      : ValidationError("line " + std::to_string(line) + " (record '" + record + "'): " + what),
        line_(line),
        record_(std::move(record)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& record() const noexcept { return record_; }

 private:
  std::size_t line_;
  std::string record_;
};

class DanglingReferenceError : public ValidationError {
 public:
  DanglingReferenceError(std::vector<std::string> ids, const std::string& what)
      : ValidationError(what), ids_(std::move(ids)) {}

  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
};

class DimensionError : public ValidationError {
 public:
  explicit DimensionError(const std::string& what) : ValidationError(what) {}
};

/// A numerical routine failed (non-finite values, factorization failure).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorCategory::kNumerical, what) {}
};

}  // namespace teamcomp
