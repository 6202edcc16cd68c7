#pragma once

#include <stdexcept>
#include <string>

namespace specklelab {

// Dimension or channel disagreement between tensors/images.
class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or truncated file content.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unsupported format or schema version.
class VersionError : public std::runtime_error {
 public:
  explicit VersionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Checkpoint/config disagreement (e.g. kernel size mismatch on load).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested more data than the sources can provide.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation called in the wrong order (e.g. backward without forward).
class StateError : public std::runtime_error {
 public:
  explicit StateError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite loss during training; carries the offending batch in the message.
class TrainingAbort : public std::runtime_error {
 public:
  explicit TrainingAbort(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace specklelab
