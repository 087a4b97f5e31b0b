#pragma once

#include <tbsim/digest.hpp>

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace tbsim {

/// splitmix64 finaliser; used to derive independent per-trial and per-account
/// seeds from a root seed.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for stream `index` under `seed`. Pure; identical on every platform.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Deterministic generator. Wraps mt19937_64 (whose output sequence is fixed
/// by the standard) with its own bounded sampling, since std distributions
/// differ between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    Bytes bytes(std::size_t n);

    /// Uniform sample of `count` distinct elements, in draw order.
    template <typename T>
    std::vector<T> sample(std::span<const T> items, std::size_t count)
    {
        std::vector<T> pool(items.begin(), items.end());
        for (std::size_t i = 0; i < count; ++i) {
            auto j = i + static_cast<std::size_t>(below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(count);
        return pool;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace tbsim
