#pragma once

#include <cstdint>
#include <random>

namespace siq {

/// Seeded random source for the stochastic engines.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. It is seeded from SplitMix64(seed, stream) so that
/// nearby seeds and different streams start far apart. Variates are
/// produced here from raw 64-bit outputs rather than through
/// <random> distributions, whose algorithms are implementation-defined;
/// a given (seed, stream) therefore yields the same sample path on any
/// conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exponential waiting time with the given (positive) rate.
    double exponential(double rate);

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive engine seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

} // namespace siq
