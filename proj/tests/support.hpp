#pragma once

#include <tbsim/agents.hpp>
#include <tbsim/hashing.hpp>
#include <tbsim/merkle.hpp>
#include <tbsim/stepvm.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tbsim::testing {

inline Digest hx(const std::string& hex) { return Digest::from_hex(hex); }

inline Digest h(std::string_view s) { return hash({ByteView(to_bytes(s))}); }

// The loop used in configs/honest.json: 22 steps, r0 ends at 218.
inline Program sample_program()
{
    Program p;
    p.code = {Instruction::addi(3, 5), Instruction::addi(0, 3), Instruction::mul(0, 1),
              Instruction::addi(3, -1), Instruction::jnz(3, -3), Instruction::halt()};
    p.input = {1, 2};
    return p;
}

// Linear scan for the first 1-based step whose snapshots differ.
inline std::optional<std::uint64_t> first_divergence(const Trace& a, const Trace& b)
{
    auto n = std::min(a.steps(), b.steps());
    for (std::uint64_t i = 1; i <= n; ++i) {
        if (a.snapshot(i) != b.snapshot(i)) {
            return i;
        }
    }
    return std::nullopt;
}

inline Participant member(const std::string& id, StrategyKind kind, Amount balance = 1000)
{
    return Participant{id, Strategy{kind, {}}, balance};
}

inline ScenarioSpec scenario(std::vector<Participant> accounts, std::uint32_t k = 2, std::uint64_t program_seed = 7)
{
    ScenarioSpec s;
    Rng rng(program_seed);
    s.program = generate_program(rng, 64);
    s.k = k;
    s.reward = 10;
    s.population.accounts = std::move(accounts);
    return s;
}

}  // namespace tbsim::testing
