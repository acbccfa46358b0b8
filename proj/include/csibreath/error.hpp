#pragma once

#include <stdexcept>
#include <string>

namespace csibreath {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A window was processed but no rate could be produced from it.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Raised by the pipeline when a stage fails; carries the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what, bool estimation)
      : Error(stage + ": " + what), stage_(std::move(stage)), estimation_(estimation) {}

  const std::string& stage() const noexcept { return stage_; }
  /// True when the underlying failure was an EstimationError.
  bool estimation_failure() const noexcept { return estimation_; }

 private:
  std::string stage_;
  bool estimation_;
};

/// Configuration file parse error with source location.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& file, int line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  int line() const noexcept { return line_; }

 private:
  std::string file_;
  int line_;
};

}  // namespace csibreath
