#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace smalldev {

/// Base class for every error raised by the library. Carries the name of the
/// offending parameter (empty when the failure is not tied to one argument).
class Error : public std::runtime_error {
 public:
  Error(std::string parameter, const std::string& what)
      : std::runtime_error(what), parameter_(std::move(parameter)) {}

  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string parameter_;
};

/// A value violates a type invariant or an argument contract
/// (r <= 1, a <= -1, empty schedule, unsorted schedule, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A numeric argument lies outside the domain of the function (x <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested weighted series is infinite (supercritical threshold).
class DivergentSeries : public Error {
 public:
  using Error::Error;
};

}  // namespace smalldev
