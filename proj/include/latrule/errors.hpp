#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace latrule {

/// Bad input: violated precondition, malformed value, singular matrix.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured work cap was exceeded. `required()` reports the budget that
/// would have been needed (0 when unknown).
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit(const std::string& what, std::uint64_t required = 0)
      : std::runtime_error(what), required_(required) {}
  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

/// A certified real ran out of precision before the requested depth.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, int last_certain_index)
      : std::runtime_error(what), last_certain_(last_certain_index) {}
  int last_certain_index() const noexcept { return last_certain_; }

 private:
  int last_certain_;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace latrule
