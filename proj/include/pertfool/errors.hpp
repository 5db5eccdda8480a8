#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pertfool {

/// Base of every error raised by the library. `code()` is a short stable
/// identifier used by the CLI for machine-parsable diagnostics.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

class DimensionError : public Error {
public:
  explicit DimensionError(const std::string& what) : Error("E_DIM", what) {}
};

class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string& what)
      : Error("E_PRECONDITION", what) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error("E_DOMAIN", what) {}
};

class UnsatisfiableError : public Error {
public:
  explicit UnsatisfiableError(const std::string& what)
      : Error("E_UNSATISFIABLE", what) {}
};

class SizeError : public Error {
public:
  explicit SizeError(const std::string& what) : Error("E_SIZE", what) {}
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error("E_PARSE", what) {}
};

class TrainingError : public Error {
public:
  explicit TrainingError(const std::string& what) : Error("E_TRAIN", what) {}
};

/// Raised when an iterative solver exhausts its iteration budget. Carries
/// the last iterate so callers can inspect or reuse it.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate)
      : Error("E_CONVERGENCE", what), last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const noexcept {
    return last_iterate_;
  }

private:
  std::vector<double> last_iterate_;
};

}  // namespace pertfool
