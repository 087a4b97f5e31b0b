#!/usr/bin/env python3
"""Independent reference values for the C++ unit tests.

Uses only hashlib/itertools so the frozen constants in tests/*.cpp do not
depend on the library under test. Re-run to regenerate:

    python3 tests/oracles/oracle.py
"""
import hashlib
import itertools
import struct


def H(*parts: bytes) -> bytes:
    buf = b"".join(struct.pack(">Q", len(p)) + p for p in parts)
    return hashlib.sha256(buf).digest()


def u64(x: int) -> bytes:
    return struct.pack(">Q", x & 0xFFFFFFFFFFFFFFFF)


def state_digest(regs, pc, step, halted) -> bytes:
    ser = b"".join(u64(r) for r in regs) + u64(pc) + u64(step) + bytes([1 if halted else 0])
    return H(ser)


def merkle_root(leaves):
    level = list(leaves)
    while True:
        if len(level) % 2 == 1:
            level.append(level[-1])
        level = [H(level[i], level[i + 1]) for i in range(0, len(level), 2)]
        if len(level) == 1:
            return level[0]


# the program in configs/honest.json
SAMPLE = [("ADDI", 3, 0, 5), ("ADDI", 0, 0, 3), ("MUL", 0, 1, 0), ("ADDI", 3, 0, -1), ("JNZ", 3, 0, -3), ("HALT", 0, 0, 0)]
MASK = 0xFFFFFFFFFFFFFFFF


def run(code, inputs):
    regs = list(inputs) + [0] * (4 - len(inputs))
    pc, step, halted = 0, 0, False
    states = [(tuple(regs), pc, step, halted)]
    while not halted:
        op, a, b, imm = code[pc]
        step += 1
        if op == "ADDI":
            regs[a] = (regs[a] + imm) & MASK
            pc += 1
        elif op == "MUL":
            regs[a] = (regs[a] * regs[b]) & MASK
            pc += 1
        elif op == "XOR":
            regs[a] ^= regs[b]
            pc += 1
        elif op == "JNZ":
            pc = pc + imm if regs[a] != 0 else pc + 1
        else:
            halted = True
        states.append((tuple(regs), pc, step, halted))
    return states


def main():
    print("sha256_empty", hashlib.sha256(b"").hexdigest())
    print("hash_empty_parts", H().hex())
    print("hash_ab_c", H(b"ab", b"c").hex())
    print("hash_abc", H(b"abc").hex())

    s = H(b"a")
    key = H(b"addr1", b"r1")
    print("personalize_a_addr1_r1", H(s, key).hex())

    leaves = [H(str(i).encode()) for i in range(4)]
    print("root_n4", merkle_root(leaves).hex())
    print("root_n1", merkle_root(leaves[:1]).hex())
    print("root_n3", merkle_root(leaves[:3]).hex())
    swapped = [leaves[1], leaves[0], leaves[2], leaves[3]]
    print("root_n4_swap01", merkle_root(swapped).hex())

    print("seal_addr1_r1_1024", H(b"addr1", b"r1", u64(1024)).hex())
    print("state_1_2_10_0_pc0_step0", state_digest([1, 2, 10, 0], 0, 0, False).hex())

    states = run(SAMPLE, [1, 2])
    final = states[-1]
    print("sample_steps", len(states) - 1)
    print("sample_solution", final[0][0])
    print("sample_final_digest", state_digest(*final).hex())
    leaves = [state_digest(*st) for st in states[1:]]
    print("sample_snapshot_root", merkle_root(leaves).hex())

    # all-attacker pairs among 60 accounts of which 10 are attacker-controlled
    hits = sum(1 for c in itertools.combinations(range(60), 2) if all(i < 10 for i in c))
    total = sum(1 for _ in itertools.combinations(range(60), 2))
    print("attack_pairs_10_60", hits, total)


if __name__ == "__main__":
    main()
