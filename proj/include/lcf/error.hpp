#pragma once

#include <stdexcept>
#include <string>

namespace lcf {

enum class ErrorCode {
  kInvalidInput = 1,
  kDegenerate = 2,
  kConfig = 3,
  kInfeasible = 4,
  kIo = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorCode::kInvalidInput, what) {}
};

// Parameters sit on the boundary of their domain (alpha in {0,1}, nu = 0).
class DegenerateParameters : public Error {
 public:
  explicit DegenerateParameters(const std::string& what) : Error(ErrorCode::kDegenerate, what) {}
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = -1)
      : Error(ErrorCode::kConfig, line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(ErrorCode::kInfeasible, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

}  // namespace lcf
