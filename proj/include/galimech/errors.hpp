#pragma once

#include <stdexcept>
#include <string>

namespace galimech {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSimultaneous : public Error {
 public:
  using Error::Error;
};

class SingularMetric : public Error {
 public:
  using Error::Error;
};

class InvalidFrame : public Error {
 public:
  using Error::Error;
};

class NotFutureDirected : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotCritical : public Error {
 public:
  using Error::Error;
};

class NotMorse : public Error {
 public:
  using Error::Error;
};

class SectionNotUnique : public Error {
 public:
  using Error::Error;
};

class ProjectionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace galimech
