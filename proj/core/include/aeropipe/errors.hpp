#pragma once

#include <stdexcept>
#include <string>

namespace aeropipe {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text: CSV cells, config values, timestamps.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A requested resource (channel, pin, city) does not exist.
class NotFound : public Error {
 public:
  using Error::Error;
};

/// ADC reading at a rail (0 or 1023); no resistance can be recovered.
class SaturationError : public Error {
 public:
  SaturationError(int channel, double counts);
  int channel() const noexcept { return channel_; }

 private:
  int channel_;
};

/// Pollutant has no breakpoint table (NO, NOx, BTX).
class NoSubIndexError : public Error {
 public:
  using Error::Error;
};

/// Least-squares design matrix is rank deficient.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// R^2 requested for a target with zero variance.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace aeropipe
