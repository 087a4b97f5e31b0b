#include <tbsim/analytics.hpp>
#include <tbsim/errors.hpp>

#include <gtest/gtest.h>

#include <cstdint>

using namespace tbsim;

namespace {

// Counts k-subsets of {0..n-1} drawn entirely from {0..q-1} by walking every subset.
std::pair<std::uint64_t, std::uint64_t> enumerate(unsigned q, unsigned n, unsigned k)
{
    std::uint64_t hits = 0;
    std::uint64_t total = 0;
    const std::uint32_t attackers = q == 32 ? ~0U : ((1U << q) - 1);
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        if (static_cast<unsigned>(__builtin_popcount(mask)) != k) {
            continue;
        }
        ++total;
        if ((mask & ~attackers) == 0) {
            ++hits;
        }
    }
    return {hits, total};
}

}  // namespace

TEST(Analytics, PaperExampleAndOracle)
{
    auto p = attack_probability({10, 60, 2});
    EXPECT_EQ(p.numerator, 90);
    EXPECT_EQ(p.denominator, 3540);
    EXPECT_EQ(p.value(), Rational(45, 1770));
    EXPECT_EQ(format_probability(p), "90/3540 = 0.025424");
}

TEST(Analytics, Trivial)
{
    EXPECT_EQ(attack_probability({1, 60, 2}).value(), 0);
    EXPECT_EQ(format_probability(attack_probability({0, 60, 2})), "0/3540 = 0");
    EXPECT_EQ(attack_probability({7, 7, 3}).value(), 1);
    EXPECT_EQ(attack_probability_bound(1, 5), 1);
    EXPECT_EQ(attack_probability_bound(6, 2), Rational(1, 36));
    EXPECT_EQ(attack_probability_bound(6, 3), Rational(1, 216));
}

TEST(Analytics, InvalidQueries)
{
    for (auto q : {AttackProbQuery{5, 4, 2}, AttackProbQuery{1, 4, 1}, AttackProbQuery{1, 4, 5}}) {
        try {
            attack_probability(q);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidQuery);
        }
    }
}

TEST(Analytics, MatchesSubsetEnumerationSmall)
{
    for (unsigned n = 2; n <= 12; ++n) {
        for (unsigned k = 2; k <= n; ++k) {
            for (unsigned q = 0; q <= n; ++q) {
                auto [hits, total] = enumerate(q, n, k);
                EXPECT_EQ(attack_probability({q, n, k}).value(), Rational(hits, total)) << q << " " << n << " " << k;
            }
        }
    }
}

TEST(Analytics, Monotonicity)
{
    for (std::uint64_t n = 2; n <= 64; ++n) {
        for (std::uint64_t k = 2; k <= std::min<std::uint64_t>(8, n); ++k) {
            Rational prev = -1;
            for (std::uint64_t q = 0; q <= n; ++q) {
                auto v = attack_probability({q, n, k}).value();
                EXPECT_GE(v, prev);
                prev = v;
                if (q < n && k + 1 <= std::min<std::uint64_t>(8, n)) {
                    EXPECT_LE(attack_probability({q, n, k + 1}).value(), v);
                }
            }
        }
    }
}

TEST(Analytics, BoundHoldsAndIsApproached)
{
    for (std::uint64_t q = 1; q <= 300; ++q) {
        EXPECT_LE(attack_probability({q, 6 * q, 2}).value(), attack_probability_bound(6, 2));
        EXPECT_LE(attack_probability({q, 6 * q, 3}).value(), attack_probability_bound(6, 3));
    }
    auto far = attack_probability({1'000'000, 6'000'000, 2}).value();
    Rational gap = attack_probability_bound(6, 2) - far;
    EXPECT_GE(gap, 0);
    EXPECT_LT(gap, Rational(1, 10'000));
}

TEST(Analytics, DecimalFormatting)
{
    EXPECT_EQ(format_decimal(Rational(1, 2)), "0.5");
    EXPECT_EQ(format_decimal(Rational(1, 36)), "0.027778");
    EXPECT_EQ(format_decimal(Rational(0)), "0");
    EXPECT_EQ(format_decimal(Rational(1)), "1");
    EXPECT_EQ(format_decimal(Rational(1, 3000000)), "0");
    EXPECT_EQ(format_decimal(Rational(1, 2000000)), "0.000001");
}

TEST(Analytics, EmpiricalEdges)
{
    auto none = empirical_attack_rate({0, 30, 2}, 2000, 1);
    EXPECT_EQ(none.hits, 0u);
    EXPECT_EQ(none.empirical, 0.0);
    auto all = empirical_attack_rate({30, 30, 3}, 2000, 1);
    EXPECT_EQ(all.empirical, 1.0);
    EXPECT_TRUE(all.within_tolerance);
}

TEST(Analytics, EmpiricalIsDeterministic)
{
    auto a = empirical_attack_rate({10, 60, 2}, 5000, 99);
    auto b = empirical_attack_rate({10, 60, 2}, 5000, 99);
    EXPECT_EQ(a.hits, b.hits);
    EXPECT_TRUE(a.within_tolerance);
}
