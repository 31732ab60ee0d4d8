#pragma once

#include <stdexcept>
#include <string>

namespace hyperbound {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedTerm : SolverError {
    using SolverError::SolverError;
};

struct NotTriangular : SolverError {
    using SolverError::SolverError;
};

struct NoNullVector : SolverError {
    using SolverError::SolverError;
};

struct SingularBlock : SolverError {
    using SolverError::SolverError;
};

struct SlowConvergence : SolverError {
    using SolverError::SolverError;
};

struct ZeroDenominator : SolverError {
    using SolverError::SolverError;
};

struct GridTooSmall : SolverError {
    using SolverError::SolverError;
};

struct LevelMissing : SolverError {
    using SolverError::SolverError;
};

struct ExtrapolationUnstable : SolverError {
    using SolverError::SolverError;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hyperbound
