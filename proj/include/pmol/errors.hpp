#pragma once
#include <stdexcept>
#include <string>

namespace pmol {

// One exception type per failure class so callers (and the CLI) can map them.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidIndex : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct EmptyShell : Error { using Error::Error; };
struct ResolutionError : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct UnsupportedDual : Error { using Error::Error; };
struct PrecisionError : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };

}  // namespace pmol
