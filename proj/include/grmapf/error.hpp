#pragma once

#include <stdexcept>
#include <string>

namespace grmapf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad dimensions, density, obstacle layout...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A row, cell or column receives more agents than it can hold.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, int index) : Error(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// No solution exists for the requested sub-problem (disconnected components, all-forbidden rows).
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, int index = -1) : Error(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// Exhaustive search refused because the state space is over the configured limit.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

/// An internal schedule exceeded its asserted budget. Always indicates a bug.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

}  // namespace grmapf
