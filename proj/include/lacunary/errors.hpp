#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lacunary {

/// Malformed polynomial text. `position()` is the 0-based offset of the
/// offending character.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An exponent left the signed 63-bit range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Precondition violation on an otherwise well-typed argument.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A tower comparison could not be certified within the refinement cap.
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lacunary
