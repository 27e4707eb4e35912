#pragma once

#include <stdexcept>
#include <string>

namespace corxc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter outside its documented domain (e.g. a grid of height 0).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An operation was called on an input that violates its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive routine was asked to work beyond its documented size cap.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed text or JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace corxc
