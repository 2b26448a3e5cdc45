// Seed handling. All randomness in the project flows from one root seed;
// sub-seeds are derived by hashing a textual tag and a task index into the
// root (command -> module -> task index). Identical roots give identical
// runs, and independent tasks get decorrelated streams.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace oraclesim {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t split_seed(std::uint64_t root, std::string_view tag,
                                std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the tag
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return splitmix64(splitmix64(root ^ h) + index);
}

}  // namespace oraclesim
