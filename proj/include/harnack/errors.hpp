#pragma once

#include <stdexcept>
#include <string>

namespace harnack {

// A documented precondition of an operation does not hold (e.g. the pair
// (u, A) does not solve the PDE the identity is derived from). This is a
// misuse of the operation, never a verdict about a bound.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// The operation has no discrete counterpart on this manifold kind
// (Hessian-level calculus on the sphere mesh).
class UnsupportedManifold : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class PositivityLoss : public std::runtime_error {
public:
  PositivityLoss(double time, double min_value)
      : std::runtime_error("positivity lost at t = " + std::to_string(time) +
                           " (min u = " + std::to_string(min_value) + ")"),
        time_(time), min_value_(min_value) {}

  double time() const noexcept { return time_; }
  double min_value() const noexcept { return min_value_; }

private:
  double time_;
  double min_value_;
};

class SolverFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace harnack
