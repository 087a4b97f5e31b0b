#include <tbsim/rng.hpp>

#include <stdexcept>

namespace tbsim {

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0) {
        throw std::invalid_argument("Rng::below requires a positive bound");
    }
    // rejection sampling on the largest multiple of bound
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x > limit);
    return x % bound;
}

Bytes Rng::bytes(std::size_t n)
{
    Bytes out(n);
    for (std::size_t i = 0; i < n; i += 8) {
        auto word = engine_();
        for (std::size_t j = i; j < n && j < i + 8; ++j) {
            out[j] = static_cast<std::uint8_t>(word & 0xff);
            word >>= 8;
        }
    }
    return out;
}

}  // namespace tbsim
