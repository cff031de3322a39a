#pragma once

#include <stdexcept>
#include <string>

namespace tpa {

// Bad arguments: wrong shapes, violated preconditions on plain data.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A decision procedure could not reach a verdict within tolerance.
class Inconclusive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Newton divergence, non-contraction, iteration caps.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A query falls outside the double-precision evaluation window.
class WindowOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structural hypothesis of an experiment is not met (e.g. non-trivial
// accessibility evidence before building a center conjugacy).
class PreconditionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tpa
