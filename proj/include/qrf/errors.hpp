#pragma once

#include <stdexcept>
#include <string>

namespace qrf {

/// Invalid experiment configuration, unsupported construction parameters,
/// or malformed config files. The CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Internal numerical consistency failure: non-Hermitian density handed to a
/// spectral routine, positivity violation beyond tolerance, character sums
/// that fail to round to integers, and similar "should never happen" cases.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Conditioning on an outcome of (numerically) zero probability, e.g. a
/// coherent-state probe orthogonal to the physical state's support.
struct ZeroOverlapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Group averaging annihilated a kinematical state: it had no component in
/// the invariant subspace.
struct AnnihilationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qrf
