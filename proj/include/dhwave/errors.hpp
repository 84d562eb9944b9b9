#pragma once

#include <stdexcept>
#include <string>

namespace dhwave {

// Argument outside the documented domain of an operation.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Adaptive refinement exhausted its evaluation budget before reaching the
// requested tolerance.  Never a silent partial result.
struct QuadratureNoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedMeasure : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TabulationTooCoarse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridTooCoarse : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SupportOverflow : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PreconditionFailed : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace dhwave
