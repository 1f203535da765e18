#pragma once

#include <stdexcept>
#include <string>

namespace bayestrust {

/// Observation violates its own invariants or does not fit the model it is fed to.
class InvalidObservation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A model or operation parameter lies outside its domain.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Structurally invalid input (empty candidate list, wrong category count, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every particle received zero likelihood: the observation is impossible under the model.
class DegenerateUpdate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A utility function produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bayestrust
