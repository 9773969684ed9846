#pragma once

#include <stdexcept>
#include <string>

namespace lhm {

/// Base class for numerical failures (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lossless single-resonance model evaluated exactly at its transverse frequency.
class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// exp(|Im z|) leaves the double range.
class OverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Interface matching system without a solution (lossless host at a real resonance).
class SingularSystemError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// |1 + 2 eps| vanishes; the small-cavity expansion has a pole there.
class ExpansionPoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The amplitude left the unit disc by more than the allowed margin.
class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Invalid user configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lhm
