#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mfg {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (mesh audit, weight bound, step size).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure hit its iteration cap.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}

  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace mfg
