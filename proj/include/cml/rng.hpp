#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cml {

// The generator identity is part of the reproducibility contract: changing any
// piece of it changes every emitted number, so it is recorded in manifests.
//
//   engine:    std::mt19937_64 (output sequence fixed by the C++ standard)
//   uniform:   (u >> 11) * 2^-53 mapped affinely onto [lo, hi)
//   substream: splitmix64 chain over (master, a_key, r_key, realization)
inline constexpr std::string_view kRngIdentity =
    "mt19937_64;u53-uniform;splitmix64-substreams(master,a_key,r_key,realization)";

using Engine = std::mt19937_64;

/// splitmix64 finalizer applied to (z + golden gamma).
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for one (cell, realization) trajectory. Keys are integers so that the
/// seed does not depend on floating-point grid arithmetic.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::int64_t a_key, std::int64_t r_key,
                                    std::uint64_t realization) noexcept {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(a_key));
    h = splitmix64(h ^ static_cast<std::uint64_t>(r_key));
    h = splitmix64(h ^ realization);
    return h;
}

/// Uniform double on [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace cml
