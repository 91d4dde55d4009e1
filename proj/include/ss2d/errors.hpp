#pragma once

#include <stdexcept>
#include <string>

namespace ss2d {

/// Malformed input data (scenario lines, logs, cost-matrix files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure to open or read a stream.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ss2d
