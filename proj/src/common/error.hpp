#pragma once

#include <stdexcept>
#include <string>

namespace sq {

/// Error categories shared by every module. The C API maps these one-to-one
/// onto its integer status codes.
enum class ErrorKind {
  Syntax,
  UnknownIdentifier,
  Arity,
  Dimension,
  Domain,
  NonFinite,
  Resource,
  InvalidArgument,
  Uncertified,
  Config,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure with a 1-based character offset into the input.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorKind kind, std::size_t offset, const std::string& msg)
      : Error(kind, msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace sq
