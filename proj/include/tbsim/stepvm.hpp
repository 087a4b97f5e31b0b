#pragma once

#include <tbsim/digest.hpp>
#include <tbsim/rng.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tbsim {

inline constexpr std::size_t REGISTER_COUNT = 4;
inline constexpr std::uint64_t DEFAULT_MAX_STEPS = 1U << 16;

enum class Opcode : std::uint8_t { Addi, Mul, Xor, Jnz, Halt };

/// ADDI a,imm: r[a] += imm (wrapping)
/// MUL a,b:    r[a] *= r[b]
/// XOR a,b:    r[a] ^= r[b]
/// JNZ a,imm:  pc += imm if r[a] != 0, else pc + 1
/// HALT:       stop; the halted state is a fixed point of execute_step
struct Instruction {
    Opcode op = Opcode::Halt;
    std::uint8_t a = 0;
    std::uint8_t b = 0;
    std::int64_t imm = 0;

    static Instruction addi(std::uint8_t r, std::int64_t imm) { return {Opcode::Addi, r, 0, imm}; }
    static Instruction mul(std::uint8_t ra, std::uint8_t rb) { return {Opcode::Mul, ra, rb, 0}; }
    static Instruction xor_(std::uint8_t ra, std::uint8_t rb) { return {Opcode::Xor, ra, rb, 0}; }
    static Instruction jnz(std::uint8_t r, std::int64_t offset) { return {Opcode::Jnz, r, 0, offset}; }
    static Instruction halt() { return {}; }

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct Program {
    std::vector<Instruction> code;
    std::vector<std::uint64_t> input;  // loaded into r0.. (at most 4 values)

    friend bool operator==(const Program&, const Program&) = default;
};

struct MachineState {
    std::array<std::uint64_t, REGISTER_COUNT> registers{};
    std::uint64_t pc = 0;
    std::uint64_t step = 0;
    bool halted = false;

    /// registers (big-endian), pc, step, then one halted byte
    Bytes serialize() const;
    Digest digest() const;

    friend bool operator==(const MachineState&, const MachineState&) = default;
};

/// Execution trace. states[0] is the initial state and states[i] the state
/// after step i, so snapshot(i) == states[i].digest() for i in [1, n].
struct Trace {
    std::vector<MachineState> states;
    std::vector<Digest> snapshots;
    std::uint64_t solution = 0;

    std::uint64_t steps() const noexcept { return snapshots.size(); }
    const Digest& snapshot(std::uint64_t index) const;  // 1-based
};

/// XOR `corruption` into r0 right after step `fault_step`.
struct FaultSpec {
    std::optional<std::uint64_t> fault_step;
    std::uint64_t corruption = 1;
};

MachineState initial_state(const Program& program);

MachineState execute_step(const MachineState& state, const Program& program);

/// Runs until HALT. n counts the HALT step itself, so [HALT] has n = 1.
Trace execute(const Program& program, std::uint64_t max_steps = DEFAULT_MAX_STEPS);

/// Runs exactly as many steps as the honest execution, injecting the fault.
/// A trace that has not halted by then reports r0 of its last state.
Trace execute_faulty(const Program& program, const FaultSpec& fault,
                     std::uint64_t max_steps = DEFAULT_MAX_STEPS);

/// Builds a Trace (snapshots and solution) from explicit states.
Trace trace_from_states(std::vector<MachineState> states);

/// Random program that always halts within `max_steps` steps. Register 3 is
/// reserved as a loop counter.
Program generate_program(Rng& rng, std::uint64_t max_steps = 256);

std::string to_string(Opcode op);
std::optional<Opcode> parse_opcode(std::string_view name);

}  // namespace tbsim
