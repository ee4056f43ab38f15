#pragma once

#include <cmath>
#include <cstdint>

namespace dlas::rng {

// SplitMix64 finalizer: full-avalanche 64-bit mixer.
// Steele, Lea, Flood, "Fast splittable pseudorandom number generators" (2014).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Stream tags keep independent purposes decorrelated under one master seed.
enum class Tag : std::uint64_t {
    step = 1,
    hold = 2,
    braveness = 3,
    initial = 4,
    gw_offspring = 5,
    replica = 6,
    idla = 7,
    bootstrap = 8,
    family = 9,
};

// Pure counter-based draw: a 64-bit value that is a function of the key
// tuple only. Every primitive random quantity in the project routes through
// this, so coupled systems sharing a master seed see identical instructions.
inline std::uint64_t key_hash(std::uint64_t seed, Tag tag, std::uint64_t a = 0,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = mix64(seed + kGolden);
    h = mix64(h ^ (static_cast<std::uint64_t>(tag) + kGolden));
    h = mix64(h ^ (a + kGolden));
    h = mix64(h ^ (b + kGolden));
    h = mix64(h ^ (c + kGolden));
    return h;
}

/// Map a 64-bit draw to [0, 1) with 53 usable bits.
inline double uniform01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Unit-rate exponential; strictly positive.
inline double exp1(std::uint64_t h) {
    return -std::log1p(-uniform01(h));
}

/// Derive a sub-seed, e.g. one master seed per replica index.
inline std::uint64_t derive_seed(std::uint64_t seed, Tag tag, std::uint64_t index) {
    return key_hash(seed, tag, index);
}

} // namespace dlas::rng
