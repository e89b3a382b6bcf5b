#pragma once

#include <stdexcept>
#include <string>

namespace deblog {

/// Malformed input: bad degrees, dimensions, ranges, parity, spec files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A quantity that should be evaluated is singular or degenerate at the
/// requested point (pole of x^{-m}, non-invertible 2-form, rank-deficient
/// contraction system).
class DegeneracyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested operation is not available for this representation
/// (e.g. exact integration of an opaque coefficient).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace deblog
