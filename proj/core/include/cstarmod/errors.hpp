#pragma once

#include <stdexcept>
#include <string>

namespace cstarmod {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed data: bad document contents, failed structural validation,
// size guards. CLI maps this to exit code 2.
struct InputError : Error {
  using Error::Error;
};

// Dimension or block-structure mismatch between otherwise valid objects.
// Also exit code 2 territory.
struct ShapeError : Error {
  using Error::Error;
};

// A mathematical precondition failed on well-formed input (non-positive
// spectrum, Gram mismatch, non-Riesz input, ...). CLI maps this to exit 1.
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace cstarmod
