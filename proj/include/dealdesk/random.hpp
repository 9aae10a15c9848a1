#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace dealdesk {

/// Seedable generator whose draws are identical across standard libraries:
/// the mt19937_64 engine is fully specified by the standard and the
/// distributions below are implemented here rather than taken from <random>.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal (Marsaglia polar method).
    double normal();

    /// Poisson(mean); multiplication method below 30, PTRS rejection above.
    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// SplitMix64 mix of (master, index): independent per-run seeds from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace dealdesk
