#pragma once

#include <cstdint>
#include <random>

namespace mmfs {

using Rng = std::mt19937_64;

// SplitMix64 step; used to derive statistically independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic substream seed from a master seed and a list of stream tags
// (niche id, view id, stage, ...). Order of tags matters.
template <typename... Tags>
std::uint64_t derive_seed(std::uint64_t master, Tags... tags) {
    std::uint64_t state = master;
    std::uint64_t out = splitmix64(state);
    ((state ^= static_cast<std::uint64_t>(tags) + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2),
      out = splitmix64(state)),
     ...);
    return out;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace mmfs
