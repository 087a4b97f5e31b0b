#pragma once

#include <tbsim/digest.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace tbsim {

enum class Side : std::uint8_t { Left, Right };

/// One step of an authentication path. `side` is where the sibling sits
/// relative to the running hash.
struct Sibling {
    Digest digest;
    Side side;

    friend bool operator==(const Sibling&, const Sibling&) = default;
};

struct MerkleProof {
    std::uint64_t leaf_index = 0;  // 1-based
    Digest leaf;
    std::vector<Sibling> siblings;

    friend bool operator==(const MerkleProof&, const MerkleProof&) = default;
};

struct PersonalizedLeaf {
    std::uint64_t index = 0;  // 1-based step index
    Digest value;

    friend bool operator==(const PersonalizedLeaf&, const PersonalizedLeaf&) = default;
};

/// Binary Merkle tree over n >= 1 leaves. Odd levels are padded by
/// duplicating their last node; internal nodes are hash({left, right}).
/// A single leaf still gets one level, so its root is hash({leaf, leaf}).
class SnapshotTree {
public:
    explicit SnapshotTree(std::vector<Digest> leaves);

    const Digest& root() const noexcept { return levels_.back().front(); }
    std::size_t size() const noexcept { return levels_.front().size(); }
    std::size_t depth() const noexcept { return levels_.size() - 1; }
    const std::vector<Digest>& leaves() const noexcept { return levels_.front(); }
    const Digest& leaf(std::uint64_t index) const;

    /// Authentication path for the 1-based leaf `index`.
    MerkleProof prove(std::uint64_t index) const;

private:
    // levels_[0] holds the unpadded leaves; padding is applied on the fly.
    std::vector<std::vector<Digest>> levels_;
};

SnapshotTree build_tree(std::vector<Digest> leaves);
MerkleProof prove(const SnapshotTree& tree, std::uint64_t index);

/// Replays the proof and compares against `root`. Side flags must agree with
/// the bits of leaf_index - 1, so a mutated index or flag is rejected. When
/// `step_count` is given the proof must also target challenge_index(root, n).
bool verify(const Digest& root, const MerkleProof& proof,
            std::optional<std::uint64_t> step_count = std::nullopt);

/// Fiat-Shamir leaf choice: 1 + (first 8 root bytes as big-endian) mod n.
std::uint64_t challenge_index(const Digest& root, std::uint64_t step_count);

}  // namespace tbsim
