#pragma once

#include <cstdint>
#include <random>

namespace spinimage {

// splitmix64 finalizer; used to derive independent streams from (seed, index)
// so parallel or reordered sampling stays deterministic.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

/// Flat Dirichlet(1,...,1) sample of dimension n.
inline std::vector<double> dirichlet_flat(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
        x = expo(rng);
        total += x;
    }
    for (auto& x : w) x /= total;
    return w;
}

}  // namespace spinimage
