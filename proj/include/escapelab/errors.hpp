#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace escapelab {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Iterates of the maximum modulus function do not tend to infinity from the given radius.
class NotEscaping : public Error {
 public:
  using Error::Error;
};

class ZeroArgument : public Error {
 public:
  using Error::Error;
};

class DegenerateTarget : public Error {
 public:
  using Error::Error;
};

class Degenerate : public Error {
 public:
  using Error::Error;
};

/// Quantitative hypotheses of an estimate fail; the message lists which ones.
class HypothesisViolated : public Error {
 public:
  HypothesisViolated(const std::string& what, std::ptrdiff_t step = -1)
      : Error(what), step_(step) {}
  std::ptrdiff_t step() const noexcept { return step_; }

 private:
  std::ptrdiff_t step_;
};

class BranchEscapesRegion : public Error {
 public:
  explicit BranchEscapesRegion(std::size_t step)
      : Error("backward iterate " + std::to_string(step) + " left its half-annulus"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class RowNotContained : public Error {
 public:
  explicit RowNotContained(std::size_t step)
      : Error("row selected at step " + std::to_string(step) +
              " is not contained in its half-annulus"),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class FamilyViolation : public Error {
 public:
  using Error::Error;
};

class ConePreconditionFailed : public Error {
 public:
  explicit ConePreconditionFailed(std::size_t n)
      : Error("iterate " + std::to_string(n) + " is outside the cone Re(z) > |z|/2"), n_(n) {}
  std::size_t index() const noexcept { return n_; }

 private:
  std::size_t n_;
};

}  // namespace escapelab
