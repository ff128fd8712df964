#pragma once

#include <stdexcept>
#include <string>

namespace thc {

// Caller supplied something outside an operation's domain (unknown vertex,
// oversize message set, bad flag value, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The input is well-typed but violates a structural requirement of the
// construction (empty boundary, unreachable vertex, missing loops).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A serialized artifact failed to parse.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failure while reading or writing an artifact.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thc
