#pragma once

#include <cstdint>
#include <random>

namespace swarm {

// SplitMix64 step; the basis for all seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream domains. Every entity draws from its own stream so that adding an
// entity never perturbs another entity's draws.
enum class RngDomain : std::uint64_t {
    uav_process = 1,
    target_process = 2,
    measurement = 3,     // keyed by (sensor, target)
    destinations = 4,
    graph = 5,
    planner = 6,         // keyed by (uav, step)
    placement = 7,
    sensor_placement = 8,
    init_measurement = 9,
    sweep = 10,
};

// Derives a child seed from the root seed and up to two stream keys.
// Documented split function: feed each word through SplitMix64 in order.
inline std::uint64_t derive_seed(std::uint64_t root, RngDomain domain,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = root;
    std::uint64_t h = splitmix64(s);
    s ^= static_cast<std::uint64_t>(domain);
    h ^= splitmix64(s);
    s ^= a;
    h ^= splitmix64(s);
    s ^= b;
    h ^= splitmix64(s);
    return h;
}

inline std::mt19937_64 make_rng(std::uint64_t root, RngDomain domain,
                                std::uint64_t a = 0, std::uint64_t b = 0) {
    return std::mt19937_64(derive_seed(root, domain, a, b));
}

}  // namespace swarm
