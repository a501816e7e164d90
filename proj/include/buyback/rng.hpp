#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random number generation. Every draw is a pure function of
// (master_seed, path_index, day_index, stream), so simulations are reproducible
// bit-for-bit regardless of how work is split across threads. There is no
// generator state to share or advance.

namespace buyback::rng {

// splitmix64 finalizer; good avalanche, cheap, stateless.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// One 64-bit word for the given key tuple.
inline std::uint64_t draw_u64(std::uint64_t seed, std::uint64_t path,
                              std::uint64_t day, std::uint64_t stream) {
    std::uint64_t h = mix64(seed ^ 0x53a15f6e1a2b3c4dull);
    h = mix64(h ^ mix64(path ^ 0x9e3779b97f4a7c15ull));
    h = mix64(h ^ mix64(day ^ 0xc2b2ae3d27d4eb4full));
    h = mix64(h ^ mix64(stream ^ 0x165667b19e3779f9ull));
    return h;
}

// Uniform on (0,1]; never returns 0 so it is safe under log().
inline double uniform_pos(std::uint64_t word) {
    return static_cast<double>((word >> 11) + 1) * 0x1.0p-53;
}

// Uniform on [0,1).
inline double uniform(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller. Each (seed, path, day, stream) key yields one
// variate; the two underlying uniforms use sub-streams 2*stream and 2*stream+1.
inline double normal(std::uint64_t seed, std::uint64_t path, std::uint64_t day,
                     std::uint64_t stream) {
    const double u1 = uniform_pos(draw_u64(seed, path, day, 2 * stream));
    const double u2 = uniform(draw_u64(seed, path, day, 2 * stream + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

} // namespace buyback::rng
