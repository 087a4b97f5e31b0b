#pragma once

#include <tbsim/digest.hpp>

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace tbsim {

/// SHA-256 over the concatenation of parts, each preceded by its length as an
/// 8-byte big-endian integer. hash({}) is SHA-256 of the empty string.
Digest hash(std::span<const ByteView> parts);
Digest hash(std::initializer_list<ByteView> parts);

/// H(solver_address, private_randomness): the key mixed into every leaf.
Digest personalization_key(ByteView solver_address, ByteView private_randomness);

/// Leaf value H(snapshot, H(solver_address, private_randomness)).
/// Throws EmptyRandomness when private_randomness is empty.
Digest personalize(const Digest& snapshot, ByteView solver_address, ByteView private_randomness);

/// Leaf value from a precomputed personalization key.
Digest personalize_with_key(const Digest& snapshot, const Digest& key);

/// Sealed commitment H(s, p, y) with y encoded as 8-byte big-endian.
Digest seal(ByteView solver_address, ByteView private_randomness, std::uint64_t solution);

}  // namespace tbsim
