#pragma once

#include <stdexcept>
#include <string>

namespace fh {

enum class ErrorKind {
  NegativeBase,
  DomainViolation,
  InvalidArgument,
  ParseError,
  TooMany,
  TooLarge,
  IncompleteJob,
  InvalidPartition,
  NotTightenable,
  NonRepresentable,
  Inconclusive,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fh
