#pragma once

#include <stdexcept>
#include <string>

namespace sprayeval {

// Base type for every failure raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text or files (bad JSON, bad YOLO line, ...).
struct ParseError : Error {
  using Error::Error;
};

// Structurally well-formed input that violates a documented invariant
// (duplicate image id, degenerate box, fractions not summing to one, ...).
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace sprayeval
