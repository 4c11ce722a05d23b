#pragma once

#include <complex>
#include <cstdint>

namespace qrf {

/// Deterministic random stream built on the splitmix64 scrambler.
///
/// Experiment runs must reproduce bit-for-bit from (master seed, trial index),
/// independent of platform or standard-library version, so we do not use the
/// <random> distributions (their output is implementation-defined). Streams
/// for distinct trial indices are derived by hashing the index into the seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Independent stream for one trial of a run.
    static Rng stream(std::uint64_t master_seed, std::uint64_t index);

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();

    /// Standard normal via Box-Muller (one spare cached).
    double normal();

    /// Complex normal with E|z|^2 = 1, suitable for Haar-uniform state vectors.
    std::complex<double> complex_normal();

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace qrf
