#include <tbsim/errors.hpp>
#include <tbsim/hashing.hpp>
#include <tbsim/stepvm.hpp>

#include <algorithm>
#include <cctype>

namespace tbsim {

namespace {

void check_register(std::uint8_t r, std::uint64_t pc)
{
    if (r >= REGISTER_COUNT) {
        throw Error(ErrorCode::InvalidOpcode,
                    "register r" + std::to_string(r) + " at pc " + std::to_string(pc));
    }
}

}  // namespace

Bytes MachineState::serialize() const
{
    Bytes out;
    out.reserve(8 * (REGISTER_COUNT + 2) + 1);
    auto put = [&out](std::uint64_t v) {
        auto be = u64_be(v);
        out.insert(out.end(), be.begin(), be.end());
    };
    for (auto r : registers) {
        put(r);
    }
    put(pc);
    put(step);
    out.push_back(halted ? 1 : 0);
    return out;
}

Digest MachineState::digest() const
{
    auto bytes = serialize();
    return hash({ByteView(bytes)});
}

const Digest& Trace::snapshot(std::uint64_t index) const
{
    if (index < 1 || index > snapshots.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "snapshot " + std::to_string(index));
    }
    return snapshots[index - 1];
}

MachineState initial_state(const Program& program)
{
    if (program.input.size() > REGISTER_COUNT) {
        throw Error(ErrorCode::InvalidOpcode, "program input exceeds the register file");
    }
    MachineState s;
    std::copy(program.input.begin(), program.input.end(), s.registers.begin());
    return s;
}

MachineState execute_step(const MachineState& state, const Program& program)
{
    if (state.halted) {
        return state;
    }
    if (state.pc >= program.code.size()) {
        throw Error(ErrorCode::InvalidOpcode, "pc " + std::to_string(state.pc) + " outside program");
    }
    const Instruction& ins = program.code[state.pc];
    MachineState next = state;
    next.step += 1;
    auto& reg = next.registers;
    switch (ins.op) {
    case Opcode::Addi:
        check_register(ins.a, state.pc);
        reg[ins.a] += static_cast<std::uint64_t>(ins.imm);
        next.pc += 1;
        break;
    case Opcode::Mul:
        check_register(ins.a, state.pc);
        check_register(ins.b, state.pc);
        reg[ins.a] *= reg[ins.b];
        next.pc += 1;
        break;
    case Opcode::Xor:
        check_register(ins.a, state.pc);
        check_register(ins.b, state.pc);
        reg[ins.a] ^= reg[ins.b];
        next.pc += 1;
        break;
    case Opcode::Jnz:
        check_register(ins.a, state.pc);
        if (reg[ins.a] != 0) {
            next.pc = state.pc + static_cast<std::uint64_t>(ins.imm);
        } else {
            next.pc += 1;
        }
        break;
    case Opcode::Halt:
        next.halted = true;
        break;
    default:
        throw Error(ErrorCode::InvalidOpcode, "unknown opcode at pc " + std::to_string(state.pc));
    }
    return next;
}

Trace trace_from_states(std::vector<MachineState> states)
{
    Trace trace;
    trace.snapshots.reserve(states.size());
    for (std::size_t i = 1; i < states.size(); ++i) {
        trace.snapshots.push_back(states[i].digest());
    }
    trace.solution = states.empty() ? 0 : states.back().registers[0];
    trace.states = std::move(states);
    return trace;
}

Trace execute(const Program& program, std::uint64_t max_steps)
{
    std::vector<MachineState> states{initial_state(program)};
    while (!states.back().halted) {
        if (states.size() > max_steps) {
            throw Error(ErrorCode::NonTermination,
                        "no HALT within " + std::to_string(max_steps) + " steps");
        }
        states.push_back(execute_step(states.back(), program));
    }
    return trace_from_states(std::move(states));
}

Trace execute_faulty(const Program& program, const FaultSpec& fault, std::uint64_t max_steps)
{
    const auto honest_steps = execute(program, max_steps).steps();
    if (fault.fault_step) {
        if (*fault.fault_step < 1 || *fault.fault_step > honest_steps) {
            throw Error(ErrorCode::FaultBeyondTrace,
                        "fault step " + std::to_string(*fault.fault_step) + " outside [1, " +
                            std::to_string(honest_steps) + "]");
        }
        if (fault.corruption == 0) {
            throw Error(ErrorCode::InvalidFault, "corruption must be nonzero");
        }
    }
    std::vector<MachineState> states{initial_state(program)};
    for (std::uint64_t i = 1; i <= honest_steps; ++i) {
        auto next = execute_step(states.back(), program);
        if (fault.fault_step && i == *fault.fault_step) {
            next.registers[0] ^= fault.corruption;
        }
        states.push_back(next);
    }
    return trace_from_states(std::move(states));
}

Program generate_program(Rng& rng, std::uint64_t max_steps)
{
    // Leave room for the final HALT.
    std::uint64_t budget = max_steps > 1 ? max_steps - 1 : 0;
    Program p;
    p.input = {rng.next() % 1000, rng.next() % 1000, rng.next() % 1000, 0};

    auto random_op = [&rng]() {
        auto ra = static_cast<std::uint8_t>(rng.below(3));
        auto rb = static_cast<std::uint8_t>(rng.below(3));
        switch (rng.below(3)) {
        case 0: return Instruction::addi(ra, static_cast<std::int64_t>(rng.below(2001)) - 1000);
        case 1: return Instruction::mul(ra, rb);
        default: return Instruction::xor_(ra, rb);
        }
    };

    auto blocks = 1 + rng.below(6);
    for (std::uint64_t b = 0; b < blocks && budget > 0; ++b) {
        if (rng.below(2) == 0 || budget < 8) {
            auto len = std::min<std::uint64_t>(1 + rng.below(12), budget);
            for (std::uint64_t i = 0; i < len; ++i) {
                p.code.push_back(random_op());
            }
            budget -= len;
        } else {
            // ADDI r3,c ; body(m) ; ADDI r3,-1 ; JNZ r3,-(m+1)
            auto body = 1 + rng.below(4);
            auto per_iter = body + 2;
            auto max_iters = (budget - 1) / per_iter;
            if (max_iters == 0) {
                continue;
            }
            auto iters = 1 + rng.below(std::min<std::uint64_t>(max_iters, 12));
            p.code.push_back(Instruction::addi(3, static_cast<std::int64_t>(iters)));
            for (std::uint64_t i = 0; i < body; ++i) {
                p.code.push_back(random_op());
            }
            p.code.push_back(Instruction::addi(3, -1));
            p.code.push_back(Instruction::jnz(3, -static_cast<std::int64_t>(body + 1)));
            budget -= 1 + iters * per_iter;
        }
    }
    p.code.push_back(Instruction::halt());
    return p;
}

std::string to_string(Opcode op)
{
    switch (op) {
    case Opcode::Addi: return "ADDI";
    case Opcode::Mul: return "MUL";
    case Opcode::Xor: return "XOR";
    case Opcode::Jnz: return "JNZ";
    case Opcode::Halt: return "HALT";
    }
    return "?";
}

std::optional<Opcode> parse_opcode(std::string_view name)
{
    for (auto op : {Opcode::Addi, Opcode::Mul, Opcode::Xor, Opcode::Jnz, Opcode::Halt}) {
        auto canon = to_string(op);
        if (std::equal(canon.begin(), canon.end(), name.begin(), name.end(),
                       [](char a, char b) { return a == std::toupper(static_cast<unsigned char>(b)); })) {
            return op;
        }
    }
    return std::nullopt;
}

}  // namespace tbsim
