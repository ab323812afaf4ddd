#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linbasis {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  using Error::Error;
};

class LinearityError : public Error {
 public:
  using Error::Error;
};

class MixedOperatorError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class OrderError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

class SizeMismatchError : public Error {
 public:
  using Error::Error;
};

class NotCographError : public Error {
 public:
  using Error::Error;
};

class UnsupportedLeafError : public Error {
 public:
  using Error::Error;
};

class NotSortedError : public Error {
 public:
  using Error::Error;
};

class LhsNotLeastError : public Error {
 public:
  using Error::Error;
};

class MissingPhaseError : public Error {
 public:
  using Error::Error;
};

class CheckpointCorruptError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class StepError : public Error {
 public:
  StepError(std::size_t index, std::string reason)
      : Error("step " + std::to_string(index) + ": " + reason),
        index_(index),
        reason_(std::move(reason)) {}

  std::size_t index() const noexcept { return index_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t index_;
  std::string reason_;
};

}  // namespace linbasis
