#pragma once

#include <stdexcept>
#include <string>

namespace acx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed inputs: bad dimensions, missing configuration, non-split products.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the set an operation is defined on (|z| >= 1 for the
/// parameter disk, points outside a chart domain).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// No sample point satisfied the chart domain's membership predicate.
class DomainEmptyError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference stencil would leave the chart domain.
class BoundaryMarginError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The perturbed field could not be retracted onto J^2 = -I.
class RetractionError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

class DomainEscapeError : public Error {
 public:
  DomainEscapeError(const std::string& what, double largest_valid_radius)
      : Error(what), largest_valid_radius_(largest_valid_radius) {}
  double largest_valid_radius() const noexcept { return largest_valid_radius_; }

 private:
  double largest_valid_radius_;
};

/// No Kobayashi chain was found within the estimator budget.
class ReachabilityError : public Error {
 public:
  using Error::Error;
};

/// A map handed to a harness failed its pseudoholomorphy check.
class InvalidMapError : public Error {
 public:
  using Error::Error;
};

class StagnationError : public Error {
 public:
  StagnationError(const std::string& what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}
  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

}  // namespace acx
