#pragma once

#include <stdexcept>
#include <string>

namespace ppext {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid set parameters or arguments (e.g. 2*ell1^(alpha-1) >= 1).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A statement's standing hypothesis is not met by the parameters.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

class PrecisionBudgetError : public Error {
 public:
  using Error::Error;
};

// Successive widths disagree and the escalation cap was reached.
class UnstableComputationError : public Error {
 public:
  UnstableComputationError(const std::string& what, std::string previous,
                           std::string last)
      : Error(what + " (candidates " + previous + " and " + last + ")"),
        previous_(std::move(previous)),
        last_(std::move(last)) {}

  const std::string& previous() const { return previous_; }
  const std::string& last() const { return last_; }

 private:
  std::string previous_;
  std::string last_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class NotInSetError : public Error {
 public:
  using Error::Error;
};

class RecursionVerificationError : public Error {
 public:
  using Error::Error;
};

class TailNotConvergedError : public Error {
 public:
  using Error::Error;
};

class ExchangeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppext
