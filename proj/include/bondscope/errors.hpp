#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bondscope {

// Precondition violations (bad radius, unknown root, mismatched distributions)
// are reported as std::invalid_argument. The types below cover the failure
// modes that callers usually want to tell apart.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Atom type in a dump file with no entry in the species map.
class MappingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cutoff is too large for the periodic cell to have a unique minimum image.
class MinimumImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Möbius inversion produced a negative interval multiplicity. This means the
/// F(i,j) table is not monotone, which only happens through a homology bug.
class InconsistentBarcodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPerfectlyCoordinatedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// U(X|Y) requested with H(X) = 0.
class UndefinedUncertaintyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bondscope
