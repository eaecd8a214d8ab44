#pragma once

#include <stdexcept>
#include <string>

namespace hjrsp {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input vector/coefficient pair fails the unit-norm requirement.
struct NonUnitInput : SimError {
    using SimError::SimError;
};

// Matrix passed as a unitary fails U U^dag = I within 1e-10.
struct NonUnitary : SimError {
    using SimError::SimError;
};

// Qubit index list is out of range, empty where forbidden, or repeats an index.
struct BadTargets : SimError {
    using SimError::SimError;
};

// Forced measurement branch has Born probability <= 1e-15.
struct ZeroProbabilityBranch : SimError {
    using SimError::SimError;
};

struct DimensionMismatch : SimError {
    using SimError::SimError;
};

// Channel or protocol parameter outside its admissible range.
struct BadParameter : SimError {
    using SimError::SimError;
};

struct KeyNotInTable : SimError {
    using SimError::SimError;
};

// Probabilistic variant combined with a non-ideal channel.
struct UnsupportedNoisyProbabilistic : SimError {
    using SimError::SimError;
};

// Rotation-noise reference formula evaluated where a denominator vanishes.
struct CRFormulaSingularity : SimError {
    using SimError::SimError;
};

// Neither averaging convention reproduces the reference formulas.
struct CalibrationAmbiguous : SimError {
    using SimError::SimError;
};

struct UsageError : SimError {
    using SimError::SimError;
};

}  // namespace hjrsp
