#pragma once

#include <stdexcept>
#include <string>

namespace cachenet {

// Quadrature or root-finding did not reach the requested tolerance.
// Carries the best estimate produced so far.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double partial, double error_estimate)
      : std::runtime_error(what), partial_(partial), error_estimate_(error_estimate) {}

  double partial() const { return partial_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double partial_;
  double error_estimate_;
};

// Root bracket [lo, hi] does not enclose a sign change.
class BracketFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conditional quantity requested for an association event of (near-)zero probability.
class DegenerateEventError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cachenet
