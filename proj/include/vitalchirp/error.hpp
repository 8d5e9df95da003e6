#pragma once

#include <stdexcept>
#include <string>

namespace vitalchirp {

// Input or configuration does not satisfy a documented invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A filter specification that cannot be realized.
class DesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-system or format failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A processing chain could not produce a result (e.g. no range peak).
class ProcessingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vitalchirp
