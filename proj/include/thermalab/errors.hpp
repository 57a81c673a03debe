#pragma once

#include <stdexcept>
#include <string>

namespace thermalab {

// Numeric failures (eigensolver, fits). CLI maps these to exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergence : NumericError {
    using NumericError::NumericError;
};

struct FitFailure : NumericError {
    using NumericError::NumericError;
};

// Contract violations on inputs. CLI maps these to exit code 2.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct InvalidDensity : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct OutOfRange : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct DegenerateSupport : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct TooFewStates : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct TooFewSamples : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct TooFewLevels : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct TooFewRealizations : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct InsufficientSpan : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct SpanTooSmall : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct DegenerateCoherent : NumericError {
    using NumericError::NumericError;
};

struct EmptyBin : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

// IO / artifact problems. CLI maps these to exit code 4.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingArtifacts : IoError {
    using IoError::IoError;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace thermalab
