#include <tbsim/analytics.hpp>
#include <tbsim/errors.hpp>
#include <tbsim/protocol.hpp>
#include <tbsim/rng.hpp>

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

namespace tbsim {

void validate(const AttackProbQuery& query)
{
    if (query.q > query.pool_n) {
        throw Error(ErrorCode::InvalidQuery, "q exceeds the pool size");
    }
    if (query.k < 2 || query.k > query.pool_n) {
        throw Error(ErrorCode::InvalidQuery, "k must lie in [2, pool size]");
    }
}

AttackProbability attack_probability(const AttackProbQuery& query)
{
    validate(query);
    AttackProbability p{1, 1};
    for (std::uint64_t i = 0; i < query.k; ++i) {
        // q < k makes one factor zero, which is the intended result
        p.numerator *= query.q >= i ? BigInt(query.q - i) : BigInt(0);
        p.denominator *= BigInt(query.pool_n - i);
    }
    return p;
}

Rational attack_probability_bound(std::uint64_t r_ratio, std::uint64_t k)
{
    if (r_ratio < 1) {
        throw Error(ErrorCode::InvalidQuery, "r must be at least 1");
    }
    return Rational(BigInt(1), boost::multiprecision::pow(BigInt(r_ratio), static_cast<unsigned>(k)));
}

EstimateReport empirical_attack_rate(const AttackProbQuery& query, std::uint64_t trials,
                                     std::uint64_t seed)
{
    if (trials == 0) {
        throw Error(ErrorCode::InvalidQuery, "trials must be positive");
    }
    auto closed = attack_probability(query).to_double();

    std::vector<AccountId> pool(query.pool_n);
    std::unordered_set<AccountId> attackers;
    for (std::uint64_t i = 0; i < query.pool_n; ++i) {
        pool[i] = "acct-" + std::to_string(i);
        if (i < query.q) {
            attackers.insert(pool[i]);
        }
    }

    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, t));
        auto drawn = draw_solvers(pool, query.k, rng);
        bool all = std::all_of(drawn.begin(), drawn.end(),
                               [&](const AccountId& id) { return attackers.count(id) != 0; });
        hits += all ? 1 : 0;
    }

    EstimateReport r;
    r.closed_form = closed;
    r.trials = trials;
    r.hits = hits;
    r.empirical = static_cast<double>(hits) / static_cast<double>(trials);
    r.stderr_ = std::sqrt(closed * (1.0 - closed) / static_cast<double>(trials));
    r.within_tolerance = std::abs(r.empirical - r.closed_form) <= 4.0 * r.stderr_;
    return r;
}

std::string format_decimal(const Rational& value, unsigned places)
{
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    BigInt scale = boost::multiprecision::pow(BigInt(10), places);
    BigInt num = numerator(value);
    BigInt den = denominator(value);
    bool negative = num < 0;
    if (negative) {
        num = -num;
    }
    BigInt scaled = (num * scale * 2 + den) / (den * 2);  // round half up
    BigInt whole = scaled / scale;
    BigInt frac = scaled % scale;

    std::string out = (negative && scaled != 0 ? "-" : "") + whole.str();
    if (frac != 0) {
        std::string digits = frac.str();
        digits.insert(0, places - digits.size(), '0');
        while (!digits.empty() && digits.back() == '0') {
            digits.pop_back();
        }
        out += "." + digits;
    }
    return out;
}

std::string format_probability(const AttackProbability& p)
{
    return p.numerator.str() + "/" + p.denominator.str() + " = " + format_decimal(p.value());
}

}  // namespace tbsim
