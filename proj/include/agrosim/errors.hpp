#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace agrosim {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// An effective inertia that would be used as a divisor is not positive.
class DegenerateInertia : public Error {
 public:
  using Error::Error;
};

class AllocationSingularity : public Error {
 public:
  AllocationSingularity(double delta1, double delta2)
      : Error("torque allocation is singular for steering delta1=" + std::to_string(delta1) +
              " rad, delta2=" + std::to_string(delta2) + " rad"),
        delta1_(delta1),
        delta2_(delta2) {}

  double delta1() const { return delta1_; }
  double delta2() const { return delta2_; }

 private:
  double delta1_;
  double delta2_;
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t step)
      : Error("simulation state became non-finite at step " + std::to_string(step)), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class DisturbanceBudgetError : public Error {
 public:
  using Error::Error;
};

class InvalidWindow : public Error {
 public:
  using Error::Error;
};

/// Configuration document does not match the schema.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ComparisonInvalid : public Error {
 public:
  using Error::Error;
};

}  // namespace agrosim
