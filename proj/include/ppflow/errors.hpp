#pragma once

#include <stdexcept>
#include <string>

namespace ppflow {

struct LocationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonpositiveViscosityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when cached ensemble quantities are used after the underlying vectors changed.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace ppflow
