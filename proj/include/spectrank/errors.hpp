#pragma once

#include <stdexcept>

namespace spectrank {

// Invalid argument values: out-of-range parameters, dimension mismatches.
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Structurally invalid data: empty corpus, documents too short, non-finite
// matrix entries.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File reading/writing failures, including format violations.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spectrank
