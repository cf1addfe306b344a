#pragma once

#include <stdexcept>
#include <string>

namespace cbandit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// I - B_a could not be inverted; usually a cyclic estimate.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// 2^N enumeration requested beyond the cap.
class TooLarge : public Error {
 public:
  using Error::Error;
};

// Gram matrix numerically singular even after ridge stabilization.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cbandit
