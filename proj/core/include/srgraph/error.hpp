#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace srgraph {

// Raised when an input violates a precondition or a type invariant. Numeric
// trouble during evaluation (log of a negative, overflow) is not an error; it
// shows up as an undefined value instead.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public StructuralError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : StructuralError(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace srgraph
