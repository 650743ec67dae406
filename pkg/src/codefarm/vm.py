"""Byte-coded program interpreter.

A genome is a fixed-length byte string. Each byte mod 8 is one instruction of
a Turing-complete tape language: an unbounded tape of byte cells with a data
head, bit-granular input/output, and bracket loops. Every byte string is a
valid program, so genetic operators never need repair logic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

Genome = bytes

MOVE_RIGHT = 0
MOVE_LEFT = 1
INC_CELL = 2
DEC_CELL = 3
LOOP_OPEN = 4
LOOP_CLOSE = 5
READ_INPUT = 6
WRITE_OUTPUT = 7

INSTRUCTION_NAMES = (
    "move-right",
    "move-left",
    "increment-cell",
    "decrement-cell",
    "loop-open",
    "loop-close",
    "read-input-bit",
    "write-output-bit",
)


def decode_instruction(byte: int) -> int:
    """Map a byte to its instruction opcode (byte mod 8)."""
    return byte & 7


@dataclass(frozen=True)
class VmOutcome:
    output: str
    halted: bool
    steps_used: int


def _match_loops(code: list[int]) -> list[int]:
    """Per-position jump targets: open -> index after its close, close -> its open.

    Unmatched brackets get -1 and execute as no-ops.
    """
    jumps = [-1] * len(code)
    stack: list[int] = []
    for i, op in enumerate(code):
        if op == LOOP_OPEN:
            stack.append(i)
        elif op == LOOP_CLOSE and stack:
            j = stack.pop()
            jumps[j] = i + 1
            jumps[i] = j
    return jumps


def execute(genome: Genome, input_bits: str, step_limit: int) -> VmOutcome:
    """Run a genome on an input bitstring under a step budget.

    Semantics: tape cells are bytes (wrap mod 256) initialized to 0;
    read-input-bit loads the next input bit into the current cell (0 past the
    end); write-output-bit appends cell mod 2 to the output; loop-open skips
    past its matching close when the cell is 0; loop-close jumps back to its
    matching open when the cell is nonzero; unmatched brackets are no-ops.
    Each executed instruction costs one step. halted is false exactly when
    the full budget was consumed.
    """
    if step_limit < 1:
        raise ValueError("step_limit must be >= 1")
    code = [b & 7 for b in genome]
    jumps = _match_loops(code)
    n = len(code)
    inp = [1 if c == "1" else 0 for c in input_bits]
    in_len = len(inp)
    in_pos = 0
    tape: dict[int, int] = {}
    pos = 0
    out: list[str] = []
    pc = 0
    steps = 0
    while pc < n and steps < step_limit:
        op = code[pc]
        steps += 1
        if op == MOVE_RIGHT:
            pos += 1
        elif op == MOVE_LEFT:
            pos -= 1
        elif op == INC_CELL:
            tape[pos] = (tape.get(pos, 0) + 1) & 0xFF
        elif op == DEC_CELL:
            tape[pos] = (tape.get(pos, 0) - 1) & 0xFF
        elif op == LOOP_OPEN:
            if tape.get(pos, 0) == 0 and jumps[pc] >= 0:
                pc = jumps[pc]
                continue
        elif op == LOOP_CLOSE:
            if tape.get(pos, 0) != 0 and jumps[pc] >= 0:
                pc = jumps[pc]
                continue
        elif op == READ_INPUT:
            tape[pos] = inp[in_pos] if in_pos < in_len else 0
            in_pos += 1
        else:  # WRITE_OUTPUT
            out.append("1" if tape.get(pos, 0) & 1 else "0")
        pc += 1
    return VmOutcome(output="".join(out), halted=steps < step_limit, steps_used=steps)


def is_syntactically_trivial(genome: Genome) -> bool:
    """True when the genome can never consume input or never produce output.

    A conservative static scan: a program with no read instruction computes a
    constant; one with no write produces the empty string. No execution.
    """
    has_read = False
    has_write = False
    for b in genome:
        op = b & 7
        if op == READ_INPUT:
            has_read = True
        elif op == WRITE_OUTPUT:
            has_write = True
        if has_read and has_write:
            return False
    return True


def phenotype(genome: Genome, step_limit: int) -> Callable[[str], str]:
    """The function the genome encodes: input bits -> output bits.

    Non-halting runs still yield whatever output accumulated before the
    budget ran out.
    """

    def fn(input_bits: str) -> str:
        return execute(genome, input_bits, step_limit).output

    return fn


def genome_to_hex(genome: Genome) -> str:
    return genome.hex()


def genome_from_hex(text: str) -> Genome:
    try:
        return bytes.fromhex(text.strip())
    except ValueError as exc:
        raise ValueError(f"invalid genome hex: {text!r}") from exc
