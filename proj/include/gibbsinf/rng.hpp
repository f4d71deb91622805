#pragma once

#include <cstdint>

namespace gibbsinf {

/// Counter-based splitmix64 stream: output i is mix64(seed + (i+1)*GAMMA),
/// matching the published reference construction, so every draw sequence is
/// reproducible bit-for-bit across platforms and languages. Parallel replicas
/// use seed = base_seed + replica_index; independent substreams for inner
/// Monte Carlo loops derive from (seed, tag) via substream().
struct SeededStream {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    static constexpr std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        counter += 1;
        return mix64(seed + counter * gamma);
    }

    /// Uniform double in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    static SeededStream replica(std::uint64_t base_seed, std::uint64_t replica_index) {
        return SeededStream{base_seed + replica_index, 0};
    }

    /// Decorrelated stream for a tagged inner loop (node index, criterion id, ...).
    SeededStream substream(std::uint64_t tag) const {
        return SeededStream{mix64(seed ^ (tag * gamma + 0x632BE59BD9B4E019ULL)), 0};
    }
};

}  // namespace gibbsinf
