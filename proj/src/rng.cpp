#include "qrf/rng.hpp"

#include <cmath>
#include <numbers>

namespace qrf {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

Rng Rng::stream(std::uint64_t master_seed, std::uint64_t index) {
    // Decorrelate neighbouring trial indices before mixing them into the seed.
    std::uint64_t s = master_seed ^ (0xa24baed4963ee407ULL * (index + 1));
    (void)splitmix64(s);
    return Rng(s);
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::complex<double> Rng::complex_normal() {
    constexpr double inv_sqrt2 = 0.7071067811865476;
    double re = normal();
    double im = normal();
    return {re * inv_sqrt2, im * inv_sqrt2};
}

} // namespace qrf
