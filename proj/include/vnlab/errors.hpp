#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vnlab {

// Every library failure derives from Error. InputError covers bad shapes,
// violated preconditions and rejected configurations; NumericalError covers
// internal routines that could not reach their own tolerance.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

#define VNLAB_DEFINE_ERROR(Name, Base) \
  class Name : public Base {           \
   public:                             \
    using Base::Base;                  \
  }

VNLAB_DEFINE_ERROR(ShapeMismatch, InputError);
VNLAB_DEFINE_ERROR(NotHermitian, InputError);
VNLAB_DEFINE_ERROR(DomainError, InputError);
VNLAB_DEFINE_ERROR(InvalidDensity, InputError);
VNLAB_DEFINE_ERROR(NotSubalgebra, InputError);
VNLAB_DEFINE_ERROR(NotNested, InputError);
VNLAB_DEFINE_ERROR(NotCommutingSquare, InputError);
VNLAB_DEFINE_ERROR(NotCoCommuting, InputError);
VNLAB_DEFINE_ERROR(NotFactor, InputError);
VNLAB_DEFINE_ERROR(NontrivialIntersection, InputError);
VNLAB_DEFINE_ERROR(NotUnbiased, InputError);
VNLAB_DEFINE_ERROR(NotPrime, InputError);
VNLAB_DEFINE_ERROR(MalformedGate, InputError);
VNLAB_DEFINE_ERROR(SingularDefault, InputError);
VNLAB_DEFINE_ERROR(NotChannel, InputError);

VNLAB_DEFINE_ERROR(DecompositionFailed, NumericalError);
VNLAB_DEFINE_ERROR(ToleranceFailure, NumericalError);

#undef VNLAB_DEFINE_ERROR

class StepRejected : public InputError {
 public:
  StepRejected(std::size_t step, std::string reason)
      : InputError("step " + std::to_string(step) + " rejected: " + reason),
        step_(step),
        reason_(std::move(reason)) {}
  std::size_t step() const noexcept { return step_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t step_;
  std::string reason_;
};

class NotCovariant : public InputError {
 public:
  explicit NotCovariant(std::size_t index)
      : InputError("unitary " + std::to_string(index) +
                   " does not commute with the square's conditional expectations"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class ConstraintViolated : public InputError {
 public:
  explicit ConstraintViolated(std::string name)
      : InputError("constraint violated: " + name), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Carries the maximal value even though no witness could be built.
class WitnessUnavailable : public InputError {
 public:
  WitnessUnavailable(double value_bits, std::size_t block_dim)
      : InputError("no witness for largest block of dimension " +
                   std::to_string(block_dim)),
        value_bits_(value_bits) {}
  double value_bits() const noexcept { return value_bits_; }

 private:
  double value_bits_;
};

}  // namespace vnlab
