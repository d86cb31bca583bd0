#pragma once

#include <stdexcept>
#include <string>

namespace mira {

// Process exit codes used by the command-line front end.
enum class ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kProvider = 3,
  kData = 4,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, ExitCode code)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Bad configuration, flags, or preconditions on caller-supplied parameters.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(what, ExitCode::kValidation) {}
};

// Malformed or inconsistent input data.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what, ExitCode::kData) {}
};

// Embedding / fact provider failures, including exhausted retries.
class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& what, bool retryable = false)
      : Error(what, ExitCode::kProvider), retryable_(retryable) {}

  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

class PageSkipped : public DataError {
 public:
  explicit PageSkipped(const std::string& reason) : DataError(reason) {}
};

class ClusterEmpty : public DataError {
 public:
  explicit ClusterEmpty(const std::string& what) : DataError(what) {}
};

}  // namespace mira
