#include <tbsim/errors.hpp>
#include <tbsim/hashing.hpp>
#include <tbsim/merkle.hpp>

#include <string>

namespace tbsim {

SnapshotTree::SnapshotTree(std::vector<Digest> leaves)
{
    if (leaves.empty()) {
        throw Error(ErrorCode::EmptyLeaves, "a snapshot tree needs at least one leaf");
    }
    levels_.push_back(std::move(leaves));
    do {
        const auto& below = levels_.back();
        std::vector<Digest> above;
        above.reserve((below.size() + 1) / 2);
        for (std::size_t i = 0; i < below.size(); i += 2) {
            const Digest& left = below[i];
            const Digest& right = i + 1 < below.size() ? below[i + 1] : below[i];
            above.push_back(hash({left.view(), right.view()}));
        }
        levels_.push_back(std::move(above));
    } while (levels_.back().size() > 1);
}

const Digest& SnapshotTree::leaf(std::uint64_t index) const
{
    if (index < 1 || index > size()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "leaf " + std::to_string(index) + " of " + std::to_string(size()));
    }
    return levels_.front()[index - 1];
}

MerkleProof SnapshotTree::prove(std::uint64_t index) const
{
    MerkleProof proof;
    proof.leaf_index = index;
    proof.leaf = leaf(index);
    std::size_t pos = index - 1;
    for (std::size_t level = 0; level + 1 < levels_.size(); ++level) {
        const auto& nodes = levels_[level];
        std::size_t sib = pos ^ 1U;
        const Digest& digest = sib < nodes.size() ? nodes[sib] : nodes[pos];
        proof.siblings.push_back({digest, (pos & 1U) ? Side::Left : Side::Right});
        pos >>= 1;
    }
    return proof;
}

SnapshotTree build_tree(std::vector<Digest> leaves) { return SnapshotTree(std::move(leaves)); }

MerkleProof prove(const SnapshotTree& tree, std::uint64_t index) { return tree.prove(index); }

bool verify(const Digest& root, const MerkleProof& proof, std::optional<std::uint64_t> step_count)
{
    if (proof.leaf_index < 1 || proof.siblings.empty() || proof.siblings.size() >= 64) {
        return false;
    }
    std::uint64_t pos = proof.leaf_index - 1;
    if ((pos >> proof.siblings.size()) != 0) {
        return false;
    }
    Digest running = proof.leaf;
    for (std::size_t level = 0; level < proof.siblings.size(); ++level) {
        const auto& sib = proof.siblings[level];
        bool running_is_right = ((pos >> level) & 1U) != 0;
        Side expected = running_is_right ? Side::Left : Side::Right;
        if (sib.side != expected) {
            return false;
        }
        running = running_is_right ? hash({sib.digest.view(), running.view()})
                                   : hash({running.view(), sib.digest.view()});
    }
    if (running != root) {
        return false;
    }
    if (step_count && proof.leaf_index != challenge_index(root, *step_count)) {
        return false;
    }
    return true;
}

std::uint64_t challenge_index(const Digest& root, std::uint64_t step_count)
{
    if (step_count == 0) {
        throw Error(ErrorCode::IndexOutOfRange, "step count must be at least 1");
    }
    return 1 + root.prefix_u64() % step_count;
}

}  // namespace tbsim
