#pragma once

#include <cstdint>

namespace diffusia {

/**
 * Splittable counter-based RNG: every (seed, stream) pair yields an
 * independent, platform-stable sequence (splitmix64 core; normal draws via
 * inverse-CDF so results do not depend on library distribution internals).
 * Parallel replications that each own a stream reproduce serial output
 * exactly.
 */
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    /// Uniform double in the open interval (0, 1).
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw by inverse-CDF.
    double next_normal();

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace diffusia
