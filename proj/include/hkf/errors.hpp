#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hkf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the region where an evaluator is defined or trusted.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A parameter violates a documented bound; the message names the bound.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// An iterative method stopped before meeting its tolerance.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

/// Malformed source expression. `offset` is the byte offset of the failure.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

/// Invalid problem configuration document.
class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace hkf
