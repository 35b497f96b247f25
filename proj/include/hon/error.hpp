#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hon {

/// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorKind { usage, data, numerical };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::data, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::data, what) {}
};

class OverflowError : public Error {
public:
  explicit OverflowError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

class UnseenContextError : public Error {
public:
  explicit UnseenContextError(const std::string& what)
      : Error(ErrorKind::data, what) {}
};

class EmptyModelError : public Error {
public:
  explicit EmptyModelError(const std::string& what)
      : Error(ErrorKind::data, what) {}
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double residual)
      : Error(ErrorKind::numerical, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

class SizeLimitError : public Error {
public:
  explicit SizeLimitError(const std::string& what)
      : Error(ErrorKind::data, what) {}
};

} // namespace hon
