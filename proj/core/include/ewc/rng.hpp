#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ewc {

// splitmix64 finalizer; good avalanche, stable across platforms.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed, a purpose tag and an
// index. Every RNG in the library is seeded through this so that, e.g., the
// Fisher-estimation draws never perturb the batch-shuffling stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t k = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the tag
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix64(base ^ mix64(h ^ mix64(k)));
}

using Rng = std::mt19937_64;

// Unbiased integer draw in [0, n), implementation-independent
// (std::uniform_int_distribution is not pinned by the standard).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw > limit);
    return draw % n;
}

// Fisher-Yates shuffle using uniform_index, deterministic for a fixed seed.
template <typename T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_index(rng, i)]);
    }
}

}  // namespace ewc
