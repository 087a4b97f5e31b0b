#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace tbsim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// q of pool_n solver accounts are attacker-controlled; a task draws k.
struct AttackProbQuery {
    std::uint64_t q = 0;
    std::uint64_t pool_n = 0;
    std::uint64_t k = 2;
};

/// C(q,k)/C(n,k) kept as the unreduced falling factorials
/// q(q-1)...(q-k+1) / n(n-1)...(n-k+1).
struct AttackProbability {
    BigInt numerator;
    BigInt denominator;

    Rational value() const { return Rational(numerator, denominator); }
    double to_double() const { return value().convert_to<double>(); }
};

struct EstimateReport {
    double closed_form = 0.0;
    double empirical = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double stderr_ = 0.0;  // binomial standard error at the closed-form rate
    bool within_tolerance = false;
};

/// Throws InvalidQuery unless 0 <= q <= pool_n and 2 <= k <= pool_n.
void validate(const AttackProbQuery& query);

AttackProbability attack_probability(const AttackProbQuery& query);

/// 1 / r^k: the success bound when the attacker holds at most 1/r of accounts.
Rational attack_probability_bound(std::uint64_t r_ratio, std::uint64_t k);

/// Draws k solvers `trials` times from a pool whose first q accounts are the
/// attacker's, using the protocol's own selection routine, and compares the
/// all-attacker frequency with the closed form (tolerance: 4 standard errors).
EstimateReport empirical_attack_rate(const AttackProbQuery& query, std::uint64_t trials,
                                     std::uint64_t seed);

/// Fixed-point rendering with `places` decimals, trailing zeros trimmed
/// ("0.025424", "0.5", "0", "1").
std::string format_decimal(const Rational& value, unsigned places = 6);

/// "num/den = decimal" as printed by `tbsim prob`.
std::string format_probability(const AttackProbability& p);

}  // namespace tbsim
