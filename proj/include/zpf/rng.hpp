#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "zpf/constants.hpp"

namespace zpf {

/// Counter-based random stream: every draw is a pure function of
/// (seed, stream, index, lane), so results do not depend on the order or
/// the thread in which shots are evaluated.
class CounterRng {
public:
    constexpr explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

    [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t index, std::uint32_t lane = 0) const noexcept {
        return mix(key_ ^ mix(index * 0x9e3779b97f4a7c15ULL + lane + 1));
    }

    /// Uniform on [0, 1) with 53 random bits.
    [[nodiscard]] constexpr double uniform(std::uint64_t index, std::uint32_t lane = 0) const noexcept {
        return static_cast<double>(bits(index, lane) >> 11) * 0x1.0p-53;
    }

    /// Pair of independent standard normals (Box-Muller on lanes 2k, 2k+1).
    [[nodiscard]] std::pair<double, double> normal_pair(std::uint64_t index, std::uint32_t lane = 0) const noexcept {
        const double u1 = 1.0 - uniform(index, 2 * lane);  // (0, 1]
        const double u2 = uniform(index, 2 * lane + 1);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        return {rad * std::cos(kTwoPi * u2), rad * std::sin(kTwoPi * u2)};
    }

    [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }

private:
    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

}  // namespace zpf
