#pragma once

#include <cstdint>
#include <random>

namespace arise {

// splitmix64 step; used both as a seed scrambler and to derive independent
// per-trial streams so that parallel scheduling cannot change results.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derived stream seed = splitmix of (master, a, b).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = master;
    std::uint64_t z = splitmix64(s);
    s ^= a * 0xd6e8feb86659fd93ULL;
    z ^= splitmix64(s);
    s ^= b * 0xa0761d6478bd642fULL;
    z ^= splitmix64(s);
    return z;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    return Rng(splitmix64(s));
}

} // namespace arise
