#pragma once

#include <cstdint>
#include <random>

namespace polya {

/// Engine used everywhere. mt19937_64 output is fully specified by the
/// standard, so trajectories are reproducible for a fixed seed within one
/// build; cross-implementation bit-equality is not promised.
using RngEngine = std::mt19937_64;

/// SplitMix64 step (Vigna). Used to whiten seeds and derive per-replica
/// streams at a fixed gamma spacing.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed for replica `stream` of an ensemble rooted at `base_seed`:
/// splitmix64 applied at offset (stream+1) gammas from the base.
inline std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t stream) {
    return splitmix64(base_seed + (stream + 1) * 0x9E3779B97F4A7C15ull);
}

inline RngEngine make_engine(std::uint64_t seed) { return RngEngine(splitmix64(seed)); }

/// Uniform double in [0,1) from the top 53 bits of one engine draw.
/// Avoids std::uniform_real_distribution, whose algorithm is unspecified.
inline double canonical_uniform(RngEngine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace polya
