#pragma once

#include <stdexcept>
#include <string>

namespace klentropy {

/// Base of every error raised by the library. The CLI maps UsageError to exit
/// code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function or family.
class DomainError : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// An integer or real parameter outside its admissible range (k > n, α too negative, ...).
class RangeError : public Error {
public:
  using Error::Error;
};

/// A leave-one-out k-NN distance of exactly zero in strict mode.
class ZeroDistanceError : public Error {
public:
  ZeroDistanceError(const std::string& what, std::size_t count)
      : Error(what), count_(count) {}
  std::size_t count() const noexcept { return count_; }

private:
  std::size_t count_;
};

class QuadratureError : public Error {
public:
  using Error::Error;
};

/// Malformed input from the user: config files, CSV, flags.
class UsageError : public Error {
public:
  using Error::Error;
};

}  // namespace klentropy
