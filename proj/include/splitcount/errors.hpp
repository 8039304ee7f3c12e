#pragma once

#include <stdexcept>
#include <string>

namespace splitcount {

/// Instance text could not be parsed (DIMACS, degree file, table JSON).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration (sample size, rho, flag combinations).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleDegrees : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleMargins : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No strictly increasing threshold exists: the sampled scores cannot make
/// progress toward the target level.
struct StagnationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The iteration cap was reached before the target level.
struct IterationLimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exhaustive oracle would enumerate more configurations than allowed.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An auxiliary constraint pushed the acceptance ratio below the window
/// floor and the retry budget ran out.
struct WindowOvershoot : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// More auxiliary constraints than allowed without entering the window.
struct AuxLimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Statistic undefined for the given input (e.g. zero mean).
struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace splitcount
