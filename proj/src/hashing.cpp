#include <tbsim/errors.hpp>
#include <tbsim/hashing.hpp>

#include <openssl/evp.h>

#include <memory>

namespace tbsim {

namespace {

struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
};

}  // namespace

Digest hash(std::span<const ByteView> parts)
{
    std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 initialisation failed");
    }
    for (const auto& part : parts) {
        auto prefix = u64_be(part.size());
        EVP_DigestUpdate(ctx.get(), prefix.data(), prefix.size());
        if (!part.empty()) {
            EVP_DigestUpdate(ctx.get(), part.data(), part.size());
        }
    }
    Digest out;
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), out.bytes.data(), &len);
    return out;
}

Digest hash(std::initializer_list<ByteView> parts)
{
    return hash(std::span<const ByteView>(parts.begin(), parts.size()));
}

Digest personalization_key(ByteView solver_address, ByteView private_randomness)
{
    if (private_randomness.empty()) {
        throw Error(ErrorCode::EmptyRandomness, "private randomness must be nonempty");
    }
    return hash({solver_address, private_randomness});
}

Digest personalize(const Digest& snapshot, ByteView solver_address, ByteView private_randomness)
{
    return personalize_with_key(snapshot, personalization_key(solver_address, private_randomness));
}

Digest personalize_with_key(const Digest& snapshot, const Digest& key)
{
    return hash({snapshot.view(), key.view()});
}

Digest seal(ByteView solver_address, ByteView private_randomness, std::uint64_t solution)
{
    auto y = u64_be(solution);
    return hash({solver_address, private_randomness, ByteView(y)});
}

}  // namespace tbsim
