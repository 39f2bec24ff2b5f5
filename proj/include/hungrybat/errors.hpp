#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hbat {

// Base of every error raised by the library. Indices carried by the
// subclasses are 1-based, matching the reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptyInstance : public Error {
 public:
  EmptyInstance() : Error("instance has no cacti") {}
};

class InvalidRate : public Error {
 public:
  explicit InvalidRate(std::size_t index)
      : Error("cactus " + std::to_string(index) +
              ": nectar rate r must be finite and > 0"),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class InvalidStealProb : public Error {
 public:
  explicit InvalidStealProb(std::size_t index)
      : Error("cactus " + std::to_string(index) +
              ": stealing probability s must lie in (0, 1)"),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t expected, std::size_t got)
      : Error("length mismatch: expected " + std::to_string(expected) +
              " entries, got " + std::to_string(got)) {}
};

// An internal invariant failed; indicates a bug rather than bad input.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace hbat
