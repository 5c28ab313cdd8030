#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace meao {

/// A precondition on the call itself was violated (bad index, mismatched
/// dimensions, overlapping subsets).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric argument lies outside the mathematical domain of the operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input data violates an invariant (non-finite entries, non-unit trace, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invariant-violating file. `line()` is 1-based, 0 when the
/// problem is not tied to a single line.
class ParseError : public InputError {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what)
      : InputError(format(path, line, what)), path_(std::move(path)), line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& path, std::size_t line, const std::string& what) {
    if (line == 0) return path + ": " + what;
    return path + ":" + std::to_string(line) + ": " + what;
  }

  std::string path_;
  std::size_t line_;
};

/// An iterative solver failed to reach its residual target.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A parameter scan failed at one grid point. The original exception is
/// nested (see std::rethrow_if_nested).
class ScanError : public std::runtime_error {
 public:
  ScanError(const std::string& what, double parameter) : std::runtime_error(what), parameter_(parameter) {}

  double parameter() const noexcept { return parameter_; }

 private:
  double parameter_;
};

}  // namespace meao
