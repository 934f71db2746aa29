#ifndef MMS_RNG_HPP
#define MMS_RNG_HPP

#include <cstdint>
#include <random>

namespace mms {

using Rng = std::mt19937_64;

// splitmix64 finalizer; good avalanche, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives a child seed from a base seed and up to three stream coordinates.
// Each (base, a, b, c) tuple yields an independent, reproducible stream, so
// per-member generators do not depend on worker count or iteration order.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

// Stream tags keep the derivation trees of unrelated phases disjoint.
namespace seed_tag {
inline constexpr std::uint64_t init = 0x1111'0001;
inline constexpr std::uint64_t offspring = 0x1111'0002;
inline constexpr std::uint64_t synthetic = 0x1111'0003;
inline constexpr std::uint64_t baseline = 0x1111'0004;
} // namespace seed_tag

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Inclusive range draw.
inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

} // namespace mms

#endif
