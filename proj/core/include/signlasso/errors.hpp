#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace signlasso {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of the arguments disagree, or a precondition on sizes fails.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A linear predictor x_i*beta exceeds the overflow guard.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A working weight exp(x_i*beta_tilde) fell below the weight floor.
class DegenerateWeightError : public Error {
 public:
  using Error::Error;
};

/// Non-finite objective or other floating point breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class SingularBlockError : public Error {
 public:
  using Error::Error;
};

class EmptySupportError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the exact-arithmetic range of a combinatorial routine.
class RangeError : public Error {
 public:
  using Error::Error;
};

class BadGeneratorError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or CLI configuration. `path()` is a JSON-pointer style
/// location of the offending field, e.g. "/c2".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace signlasso
