#pragma once

#include <cstdint>
#include <random>

namespace rbhs
{
    inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Seed for the index-th child stream of `master`; streams are independent of
    // the order in which they are requested.
    inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept
    {
        return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
    }

    // Portable draws on top of mt19937_64 (the std distributions are not
    // bit-identical across standard libraries).
    inline std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t bound)
    {
        const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} - (~std::uint64_t{0} % bound));
        for (;;)
        {
            const std::uint64_t x = rng();
            if (x < limit)
            {
                return x % bound;
            }
        }
    }

    inline double uniform_unit(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
}
