#pragma once

#include <stdexcept>

namespace sigsim {

// An iterative numeric scheme failed to converge.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A file or stream operation failed.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace sigsim
