#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace polco {

/// Seed plus stream id. Replicate r of an experiment uses stream = r, so
/// replicates are independent and can run in any order (or in parallel)
/// without changing results.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Deterministic stream RNG: a mt19937_64 engine keyed by (seed, stream)
/// through a splitmix64 hash. The engine and all sampling helpers below are
/// fully specified, so identical (seed, stream) gives identical draws on
/// every platform.
class SplitRng {
public:
    explicit SplitRng(RngSeed s) : engine_(mix(s)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Index draw from an unnormalized nonnegative weight vector (CDF scan).
    int categorical(std::span<const double> weights);

    /// Exp(1) draw.
    double exponential();

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Uniform point on the probability simplex (Dirichlet(1,...,1)).
    std::vector<double> dirichlet_uniform(int n);

    /// First k entries of a random permutation of [0, n).
    std::vector<int> sample_without_replacement(int n, int k);

private:
    static std::uint64_t mix(RngSeed s);
    std::mt19937_64 engine_;
};

} // namespace polco
