#pragma once

#include <stdexcept>
#include <string>

namespace icalab {

// Shape mismatch between matrices or between a matrix and an expected layout.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Invalid scalar/vector parameter (non-positive std, empty dims, bad rate).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerically rank-deficient input where full rank is required.
struct RankError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Auxiliary label outside [0, k).
struct LabelError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Training produced a non-finite loss; carries the iteration index.
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& what, long iteration)
        : std::runtime_error(what), iteration(iteration) {}
    long iteration;
};

// A metric input is degenerate (e.g. zero-variance column).
struct DegenerateMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config file failed validation; message carries field context.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation was called in a state it does not support.
struct UsageError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace icalab
