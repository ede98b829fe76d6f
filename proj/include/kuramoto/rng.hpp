#pragma once

// Counter-based random numbers: draw i of stream (seed, trial) is a pure
// function of the triple, so parallel trials give the same numbers in any
// execution order.

#include <cstdint>

namespace kuramoto {

/// splitmix64 finaliser.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL)))
    {
    }

    [[nodiscard]] constexpr std::uint64_t at(std::uint64_t counter) const noexcept { return mix64(key_ ^ mix64(counter)); }

    /// Next 64 random bits.
    constexpr std::uint64_t next() noexcept { return at(counter_++); }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace kuramoto
