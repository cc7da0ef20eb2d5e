#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

// Counter-based deterministic randomness: every draw is a pure function of
// the key words (seed, role, indices, ...), so adding days, entities, or
// variants never perturbs draws made under other keys.

namespace reidbench {

// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Order-sensitive hash of a key tuple.
constexpr std::uint64_t counter_hash(std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;  // pi fractional bits
    for (const std::uint64_t w : words) h = mix64(h ^ mix64(w));
    return h;
}

// FNV-1a over text, for keying by names (e.g. variant names).
constexpr std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Uniform in [0,1) from 53 high bits.
constexpr double uniform_half_open(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Standard-normal approximation by a 12-fold uniform sum (Irwin-Hall,
// variance exactly 1). Chosen over Box-Muller deliberately: it needs no
// transcendental calls, so output is bit-identical on any IEEE-754
// platform regardless of libm. Tails truncate at +-6, which is irrelevant
// for drift-scale noise.
inline double normal_draw(std::initializer_list<std::uint64_t> words) {
    const std::uint64_t base = counter_hash(words);
    double total = 0.0;
    for (std::uint64_t lane = 1; lane <= 12; ++lane)
        total += uniform_half_open(mix64(base ^ (lane * 0x9e3779b97f4a7c15ULL)));
    return total - 6.0;
}

}  // namespace reidbench
