#pragma once

#include <cstdint>
#include <random>

namespace portopt {

using rng_engine = std::mt19937_64;

// splitmix64 finalizer; used to derive independent sub-seeds from one run seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream tags so that each stage of a run draws from its own sequence.
enum class seed_stream : std::uint64_t {
    constraints = 1,
    epso = 2,
    afa = 3,
    window = 4,
    synthetic = 5,
};

constexpr std::uint64_t derive_seed(std::uint64_t seed, seed_stream s, std::uint64_t index = 0) {
    return mix_seed(mix_seed(seed, static_cast<std::uint64_t>(s)), index);
}

}  // namespace portopt
