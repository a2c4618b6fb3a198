#pragma once

#include <stdexcept>
#include <string>

namespace jmgt {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A solver could not complete (singular step, divergence, degeneracy).
class SolverFailure : public Error {
 public:
  enum class Kind { SingularStep, Divergence, NonDegeneracyViolated };

  SolverFailure(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace jmgt
