"""Genetic operators: roulette selection, mutation, crossover, breeding step.

All operators take explicit random streams and are pure given them. Mutation
and uniform crossover draw one 64-bit word per locus (batched through numpy),
so a genome-length array draw equals the per-locus scalar sequence.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate

import numpy as np

from .rng import Stream
from .vm import Genome

CROSSOVER_METHODS = ("single", "uniform")


@dataclass(frozen=True)
class EvolutionParams:
    mutation_rate: float = 1.0 / 256
    crossover_rate: float = 0.5
    crossover_method: str = "single"
    elite_probability: float = 1.0 / 16

    def validate(self) -> None:
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("evolution.mutation_rate must be in [0, 1]")
        if not 0.0 <= self.crossover_rate <= 0.5:
            raise ValueError("evolution.crossover_rate must be in [0, 0.5]")
        if self.crossover_method not in CROSSOVER_METHODS:
            raise ValueError(
                f"evolution.crossover_method must be one of {CROSSOVER_METHODS}"
            )
        if not 0.0 <= self.elite_probability < 1.0:
            raise ValueError("evolution.elite_probability must be in [0, 1)")


def roulette_select(weights: list[float], rng: Stream) -> int:
    """Draw index i with probability weights[i] / sum(weights)."""
    if not weights:
        raise ValueError("weights must be nonempty")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    cumulative = list(accumulate(weights))
    total = cumulative[-1]
    if total <= 0:
        raise ValueError("weights must not all be zero")
    return bisect_right(cumulative, rng.next_double() * total)


def mutate_genome(genome: Genome, rate: float, rng: Stream) -> Genome:
    """Replace each byte with a uniform random byte with probability rate.

    One word is drawn per locus: bits 11..63 decide the coin, bits 0..7 are
    the replacement byte (disjoint bit ranges, so the two are independent).
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError("mutation rate must be in [0, 1]")
    if rate == 0.0 or not genome:
        rng.counter += len(genome)  # consume the per-locus draws regardless
        return genome
    words = rng.next_u64_array(len(genome))
    coins = (words >> np.uint64(11)) * (1.0 / (1 << 53)) < rate
    replacements = (words & np.uint64(0xFF)).astype(np.uint8)
    out = np.frombuffer(genome, dtype=np.uint8).copy()
    out[coins] = replacements[coins]
    return out.tobytes()


def single_crossover(
    g1: Genome, g2: Genome, rate: float, rng: Stream
) -> tuple[Genome, Genome]:
    """With probability rate, swap the suffixes from a uniform cut in [1, len-1]."""
    if len(g1) != len(g2):
        raise ValueError("genomes must have equal length")
    if len(g1) < 2:
        raise ValueError("genomes must have length >= 2")
    if rng.next_double() >= rate:
        return g1, g2
    cut = 1 + rng.next_index(len(g1) - 1)
    return g1[:cut] + g2[cut:], g2[:cut] + g1[cut:]


def uniform_crossover(
    g1: Genome, g2: Genome, rate: float, rng: Stream
) -> tuple[Genome, Genome]:
    """Swap each locus independently with probability rate."""
    if len(g1) != len(g2):
        raise ValueError("genomes must have equal length")
    swaps = rng.next_double_array(len(g1)) < rate
    a = np.frombuffer(g1, dtype=np.uint8).copy()
    b = np.frombuffer(g2, dtype=np.uint8).copy()
    a[swaps], b[swaps] = b[swaps], a[swaps].copy()
    return a.tobytes(), b.tobytes()


def _pick_parent(
    population: list[Genome],
    weak_scores: list[float],
    elites: list[Genome],
    elite_probability: float,
    selection: Stream,
    elite_coin: Stream,
) -> Genome:
    # The elite coin is only consumed when an elite draw is actually possible.
    if elite_probability > 0.0 and elites:
        if elite_coin.next_double() < elite_probability:
            return elites[elite_coin.next_index(len(elites))]
    return population[roulette_select(weak_scores, selection)]


def next_generation(
    old_population: list[Genome],
    weak_scores: list[float],
    elites: list[Genome],
    params: EvolutionParams,
    *,
    selection: Stream,
    mutation: Stream,
    crossover: Stream,
    elite_coin: Stream,
) -> list[Genome]:
    """Breed a full replacement population of the same size.

    Per pair slot: two parents (each drawn from the elite list with
    elite_probability, otherwise by roulette over weak scores), mutated
    copies, then the configured crossover.
    """
    size = len(old_population)
    if size < 2 or size % 2 != 0:
        raise ValueError("population size must be even and >= 2")
    if len(weak_scores) != size:
        raise ValueError("scores must align with population")
    params.validate()

    cross = single_crossover if params.crossover_method == "single" else uniform_crossover
    new_population: list[Genome] = []
    for _ in range(size // 2):
        p1 = _pick_parent(
            old_population, weak_scores, elites, params.elite_probability, selection, elite_coin
        )
        p2 = _pick_parent(
            old_population, weak_scores, elites, params.elite_probability, selection, elite_coin
        )
        c1 = mutate_genome(p1, params.mutation_rate, mutation)
        c2 = mutate_genome(p2, params.mutation_rate, mutation)
        c1, c2 = cross(c1, c2, params.crossover_rate, crossover)
        new_population.append(c1)
        new_population.append(c2)
    return new_population
