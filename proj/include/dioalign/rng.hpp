#pragma once

#include <cmath>
#include <cstdint>

namespace dioalign {

// All randomness in the artifact is derived from this 64-bit mixer
// (splitmix64). Streams are addressed as (stream, index) pairs and expand to
// an unbounded sequence of 64-bit blocks, so every result is reproducible
// bit-for-bit across machines and worker counts.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Key for one addressed value inside a stream.
inline std::uint64_t mix_stream(std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(stream) ^ (index + 0x9e3779b97f4a7c15ULL));
}

// j-th 64-bit block of the value addressed by key.
inline std::uint64_t mix_block(std::uint64_t key, std::uint64_t j) {
    return splitmix64(key + j * 0x9e3779b97f4a7c15ULL);
}

// Uniform double in (0,1]; the top 53 bits of one block, never exactly 0.
inline double uniform_unit(std::uint64_t key, std::uint64_t j) {
    std::uint64_t b = mix_block(key, j);
    return static_cast<double>((b >> 11) + 1) * 0x1.0p-53;
}

// Deterministic standard normal via Box-Muller on blocks (2j, 2j+1).
inline double gaussian(std::uint64_t key, std::uint64_t j) {
    double u1 = uniform_unit(key, 2 * j);
    double u2 = uniform_unit(key, 2 * j + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace dioalign
