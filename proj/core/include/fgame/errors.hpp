#pragma once

#include <stdexcept>
#include <string>

namespace fgame {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad documents, unknown features, dangling ids, violated
/// structural invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A syntax error with the offending location.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : ValidationError(what + " (at offset " + std::to_string(position) + ")"),
        detail_(what),
        position_(position) {}

  /// The message without the location suffix.
  const std::string& detail() const noexcept { return detail_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string detail_;
  std::size_t position_;
};

/// Invalid solver or translation parameter (discount outside (0,1), unknown
/// product, kind mismatch).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A result that violates an internal invariant, e.g. a solution for which no
/// transition satisfies the local-optimality equation.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace fgame
