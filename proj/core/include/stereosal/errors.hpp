#pragma once

#include <stdexcept>
#include <string>

namespace stereosal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be read, decoded or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Two fields that must share a shape do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter or missing directory layout.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input outside the domain an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Failure inside one pipeline stage; what() carries "<stage>: <cause>".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error(stage + ": " + cause), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace stereosal
