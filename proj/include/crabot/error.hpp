#pragma once

#include <stdexcept>
#include <string>

namespace crabot {

// Base class for every error raised by the library. Messages are meant to be
// shown to the user as-is.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (files, records, intermediate exports).
class DataError : public Error {
 public:
  using Error::Error;
};

// A precondition of an operation was violated by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace crabot
