#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morandim {

enum class ErrorKind { validation, resource, range, depth, convergence };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// A defining sequence or spec document breaks a structural constraint.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::validation, what) {}
  ValidationError(std::size_t level, const std::string& what)
      : Error(ErrorKind::validation,
              "level k=" + std::to_string(level) + ": " + what),
        level_(level) {}
  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_ = 0;
};

// A configured cap (depth, interval count, candidate count) would be exceeded.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what)
      : Error(ErrorKind::resource, what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what)
      : Error(ErrorKind::range, what) {}
};

// A scale lies below what the prefix table resolves.
class DepthError : public Error {
 public:
  DepthError(std::size_t have, const std::string& what)
      : Error(ErrorKind::depth, what), have_(have) {}
  std::size_t available_depth() const noexcept { return have_; }

 private:
  std::size_t have_;
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what)
      : Error(ErrorKind::convergence, what) {}
};

}  // namespace morandim
