"""Persistent elite ledger with signature-based phenotype distinctness.

A signature is the program's output sequence over a fixed, persistent list of
random test inputs; two programs with different signatures certainly encode
different functions, equal signatures mean "probably the same". Entries whose
run hit the step budget carry a trailing "!" so halting behavior also
distinguishes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .datasets import sample_universal_string
from .fitness import ScoreVector
from .rng import Stream
from .vm import Genome, execute

NON_HALT_SUFFIX = "!"

TestInputs = tuple[str, ...]
Signature = tuple[str, ...]


@dataclass(frozen=True)
class EliteEntry:
    genome: Genome
    signature: Signature
    generation_added: int


def make_test_inputs(count: int, rng: Stream, max_len: int) -> TestInputs:
    """Draw the persistent test-input list (arbitrary-length bitstrings)."""
    if count < 1:
        raise ValueError("test input count must be >= 1")
    return tuple(sample_universal_string(rng, max_len) for _ in range(count))


def compute_signature(genome: Genome, test_inputs: TestInputs, step_limit: int) -> Signature:
    """Output per test input, with "!" appended when the run did not halt."""
    entries = []
    for bits in test_inputs:
        outcome = execute(genome, bits, step_limit)
        entries.append(outcome.output if outcome.halted else outcome.output + NON_HALT_SUFFIX)
    return tuple(entries)


def fittest_index(weak_scores) -> int:
    """Argmax over weak scores, ties broken by lowest index."""
    best = 0
    for i in range(1, len(weak_scores)):
        if weak_scores[i] > weak_scores[best]:
            best = i
    return best


def maybe_add_elite(
    ledger: list[EliteEntry],
    population: list[Genome],
    score_vector: ScoreVector,
    trivial_flags: list[bool],
    test_inputs: TestInputs,
    generation: int,
    step_limit: int,
) -> list[EliteEntry]:
    """Admit this generation's fittest genome if non-trivial and phenotype-new.

    Returns a new list when an entry is added, the original list otherwise.
    At most one entry per generation.
    """
    best = fittest_index(score_vector.weak)
    if trivial_flags[best]:
        return ledger
    signature = compute_signature(population[best], test_inputs, step_limit)
    if any(entry.signature == signature for entry in ledger):
        return ledger
    return ledger + [
        EliteEntry(genome=population[best], signature=signature, generation_added=generation)
    ]
