#pragma once

#include <stdexcept>
#include <string>

namespace cbpmde {

// Estimation and model errors that callers are expected to distinguish.

struct UndefinedScoreError : std::domain_error {
    using std::domain_error::domain_error;
};

struct InvalidContaminationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NoProgenitorsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GradientUndefinedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoFiniteValueError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SubcriticalScheduleError : std::domain_error {
    using std::domain_error::domain_error;
};

struct EmptySampleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateRatioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cbpmde
