#pragma once

#include <stdexcept>
#include <string>

namespace picardlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed config, violated precondition or scenario hypothesis.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A frequency support would leave the grid and wrap around.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// Quadrature not converged, series outside its decay regime, or solver blow-up.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Requested computation exceeds a desk-scale budget (tuples, grid nodes).
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace picardlab
