#pragma once

#include <cstdint>
#include <random>

namespace offload {

/// splitmix64 finalizer. Used for seed derivation and content hashing.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based seed split: stream `index` of `base` is
/// mix64(base + (index + 1) * 0x9E3779B97F4A7C15). Each stream depends only
/// on (base, index), so episode i draws the same numbers no matter which
/// thread runs it or in which order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Seeded generator with platform-independent variates.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the
/// standard). The standard distributions are implementation-defined, so the
/// uniform, bounded-integer and normal transforms are written out here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on {0, ..., n-1}; n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal via Box-Muller (one variate per call, no cached pair).
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace offload
