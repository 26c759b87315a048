#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpf {

// Base for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteCoordinate : public Error {
 public:
  explicit NonFiniteCoordinate(std::size_t index)
      : Error("non-finite coordinate at point " + std::to_string(index)), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class TruncatedFile : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class BadMagic : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersion : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class MaskMismatch : public Error {
 public:
  using Error::Error;
};

class DuplicateRawId : public Error {
 public:
  using Error::Error;
};

class TrainIdOutOfRange : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class DegeneratePoint : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class AllUndefined : public Error {
 public:
  using Error::Error;
};

}  // namespace mpf
