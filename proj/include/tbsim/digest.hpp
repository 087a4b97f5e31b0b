#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tbsim {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr std::size_t DIGEST_SIZE = 32;

/// 32-byte hash output. Equality is byte-wise.
struct Digest {
    std::array<std::uint8_t, DIGEST_SIZE> bytes{};

    ByteView view() const noexcept { return {bytes.data(), bytes.size()}; }

    /// First 8 bytes as a big-endian unsigned integer.
    std::uint64_t prefix_u64() const noexcept;

    std::string hex() const;
    static Digest from_hex(std::string_view hex);

    friend bool operator==(const Digest&, const Digest&) = default;
    friend auto operator<=>(const Digest&, const Digest&) = default;
};

Bytes to_bytes(std::string_view s);
Bytes u64_be(std::uint64_t v);
std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

}  // namespace tbsim
