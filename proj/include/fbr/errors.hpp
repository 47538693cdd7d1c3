#pragma once

#include <stdexcept>
#include <string>

namespace fbr {

/// Malformed input data (bad coefficients, wrong sample layout, parse errors).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A mode sum was evaluated beyond the configured |omega * y| bound.
class EvaluationRangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// An iterative method (Newton, bisection, grid search) failed to converge.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A failure inside a multi-stage pipeline; `stage()` names the stage that raised it.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace fbr
