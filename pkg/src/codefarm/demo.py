"""Control-gene experiment: weak selection against per-generation random targets.

Genotypes are num_genes bits. Gene 0 is a master control: allele 0 encodes the
constant-false function; allele 1 reads genes 1..k as a most-significant-first
index and returns that input bit. Each generation draws a brand-new random
dataset (fair-coin input bits, fair-coin output bit per example), scores the
population under weak selection, and breeds by roulette selection, bit-flip
mutation, then crossover. Reported allele-0/allele-1 percentages show the
indexing allele winning despite the target being pure noise.

The loop is vectorized over the population; each named random stream is
consumed in a fixed documented order (selection: two parents per pair slot in
slot order; mutation: one word per gene, genotype-major; crossover: all pair
coins, then all cut indices), so runs are bit-reproducible for a given seed.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .rng import Stream, derive_key

STREAM_NAMES = ("init", "dataset", "selection", "mutation", "crossover")


@dataclass(frozen=True)
class DemoConfig:
    crossover_method: str = "single"
    mutation_rate: float = 1.0 / (1 << 11)
    crossover_rate: float = 1.0 / (1 << 1)
    selection_strength: float = 1.0 / (1 << 3)
    num_genes: int = 21
    num_inputs: int = 1 << 20
    num_genotypes: int = 1 << 10
    num_examples: int = 1
    num_generations: int = 800
    report_interval: int = 20
    seed: int | None = 0  # None draws a fresh OS-entropy seed per run

    def validate(self) -> "DemoConfig":
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be in [0, 1]")
        if not 0.0 <= self.crossover_rate <= 0.5:
            raise ValueError("crossover_rate must be in [0, 0.5]")
        if self.crossover_method not in ("single", "uniform"):
            raise ValueError("crossover_method must be 'single' or 'uniform'")
        if self.selection_strength <= 0.0:
            raise ValueError("selection_strength must be positive")
        if self.num_genes <= 1:
            raise ValueError("num_genes must be > 1")
        if self.num_inputs != 1 << (self.num_genes - 1):
            raise ValueError("num_inputs must equal 2^(num_genes - 1)")
        if self.num_genotypes <= 1 or self.num_genotypes % 2 != 0:
            raise ValueError("num_genotypes must be even and > 1")
        if self.num_examples <= 0:
            raise ValueError("num_examples must be positive")
        if self.num_generations < 0:
            raise ValueError("num_generations must be >= 0")
        if self.report_interval <= 0:
            raise ValueError("report_interval must be positive")
        return self


@dataclass(frozen=True)
class DemoDataset:
    """Examples with bit-packed inputs: bit j of example e is
    (blocks[e, j >> 6] >> (j & 63)) & 1."""

    blocks: np.ndarray  # uint64, shape (num_examples, ceil(num_inputs/64))
    outputs: np.ndarray  # uint8, shape (num_examples,)
    num_inputs: int

    @classmethod
    def from_bits(cls, examples: list[tuple[Sequence[int], int]]) -> "DemoDataset":
        num_inputs = len(examples[0][0])
        n_blocks = (num_inputs + 63) // 64
        blocks = np.zeros((len(examples), n_blocks), dtype=np.uint64)
        outputs = np.zeros(len(examples), dtype=np.uint8)
        for e, (bits, out) in enumerate(examples):
            for j, bit in enumerate(bits):
                if bit:
                    blocks[e, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
            outputs[e] = out
        return cls(blocks=blocks, outputs=outputs, num_inputs=num_inputs)


def generate_demo_dataset(config: DemoConfig, rng: Stream) -> DemoDataset:
    """Fresh fair-coin dataset: packed input bits plus one output bit per example."""
    n_blocks = (config.num_inputs + 63) // 64
    blocks = np.empty((config.num_examples, n_blocks), dtype=np.uint64)
    outputs = np.empty(config.num_examples, dtype=np.uint8)
    for e in range(config.num_examples):
        blocks[e] = rng.next_u64_array(n_blocks)
        outputs[e] = rng.next_u64() & 1
    return DemoDataset(blocks=blocks, outputs=outputs, num_inputs=config.num_inputs)


def demo_decode(genotype: Sequence[int]) -> Callable[[Sequence[int]], int]:
    """The function a single genotype encodes (scalar counterpart of the engine)."""
    if not genotype[0]:
        return lambda input_bits: 0
    index = 0
    for bit in genotype[1:]:
        index = (index << 1) | (1 if bit else 0)
    return lambda input_bits: 1 if input_bits[index] else 0


def _decode_population(population: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Control bits and decoded indices for every genotype at once."""
    k = population.shape[1] - 1
    powers = (np.uint64(1) << np.arange(k - 1, -1, -1, dtype=np.uint64)).astype(np.int64)
    indices = population[:, 1:].astype(np.int64) @ powers
    return population[:, 0], indices


def _input_bits_at(dataset: DemoDataset, example: int, indices: np.ndarray) -> np.ndarray:
    blocks = dataset.blocks[example]
    word = blocks[indices >> 6]
    return ((word >> (indices & 63).astype(np.uint64)) & np.uint64(1)).astype(np.uint8)


def demo_fitness(
    population: np.ndarray, dataset: DemoDataset, selection_strength: float
) -> np.ndarray:
    """Raw +1/-1 match scores summed over examples, rescaled so the population
    minimum maps to -1 and maximum to +1 (all 0 when equal), then weak-selected."""
    control, indices = _decode_population(population)
    raw = np.zeros(population.shape[0])
    for e in range(len(dataset.outputs)):
        phen = np.where(control == 1, _input_bits_at(dataset, e, indices), 0)
        raw += np.where(phen == dataset.outputs[e], 1.0, -1.0)
    lo = raw.min()
    hi = raw.max()
    if lo == hi:
        scaled = np.zeros_like(raw)
    else:
        scaled = np.clip(((raw - lo) + (raw - hi)) / (hi - lo), -1.0, 1.0)
    return 1.0 + scaled * selection_strength


def breed_population(
    population: np.ndarray,
    weak_scores: np.ndarray,
    config: DemoConfig,
    selection: Stream,
    mutation: Stream,
    crossover: Stream,
) -> np.ndarray:
    """Roulette-select parent pairs, bit-flip mutate, then crossover each pair."""
    n, genes = population.shape
    pairs = n // 2

    cumulative = np.cumsum(weak_scores)
    draws = selection.next_double_array(n) * cumulative[-1]
    parents = np.searchsorted(cumulative, draws, side="right")
    np.minimum(parents, n - 1, out=parents)  # guard the draw == total rounding edge
    new_population = population[parents]

    flips = mutation.next_double_array(n * genes).reshape(n, genes) < config.mutation_rate
    new_population ^= flips

    if config.crossover_method == "single":
        coins = crossover.next_double_array(pairs) < config.crossover_rate
        cuts = 1 + (crossover.next_double_array(pairs) * (genes - 1)).astype(np.int64)
        swap = coins[:, None] & (np.arange(genes)[None, :] >= cuts[:, None])
    else:
        swap = (
            crossover.next_double_array(pairs * genes).reshape(pairs, genes)
            < config.crossover_rate
        )
    evens = new_population[0::2]
    odds = new_population[1::2]
    swapped_evens = evens[swap]
    evens[swap] = odds[swap]
    odds[swap] = swapped_evens
    return new_population


@dataclass(frozen=True)
class DemoReportRow:
    generation: int
    allele0: int
    allele1: int
    allele0_pct: int
    allele1_pct: int


@dataclass(frozen=True)
class DemoReport:
    rows: tuple[DemoReportRow, ...]
    average0_pct: int
    average1_pct: int
    num_genotypes: int
    seed: int


def run_demo(config: DemoConfig) -> DemoReport:
    """Run the full experiment loop and collect the per-interval allele report."""
    config.validate()
    seed = config.seed if config.seed is not None else secrets.randbits(64)
    streams = {name: Stream(derive_key(seed, name)) for name in STREAM_NAMES}
    n = config.num_genotypes
    population = (
        streams["init"].next_bit_array(n * config.num_genes).reshape(n, config.num_genes)
    )

    rows: list[DemoReportRow] = []
    allele0_sum = 0
    allele1_sum = 0
    count = 0
    generation = 0
    while True:
        if generation % config.report_interval == 0:
            allele0 = int(np.sum(population[:, 0] == 0))
            allele1 = n - allele0
            rows.append(
                DemoReportRow(
                    generation=generation,
                    allele0=allele0,
                    allele1=allele1,
                    allele0_pct=100 * allele0 // n,
                    allele1_pct=100 * allele1 // n,
                )
            )
            allele0_sum += allele0
            allele1_sum += allele1
            count += 1
        if generation >= config.num_generations:
            break
        generation += 1
        dataset = generate_demo_dataset(config, streams["dataset"])
        weak = demo_fitness(population, dataset, config.selection_strength)
        population = breed_population(
            population,
            weak,
            config,
            streams["selection"],
            streams["mutation"],
            streams["crossover"],
        )

    divisor = count * n
    return DemoReport(
        rows=tuple(rows),
        average0_pct=100 * allele0_sum // divisor,
        average1_pct=100 * allele1_sum // divisor,
        num_genotypes=n,
        seed=seed,
    )


_HEADER = "Generation Allele:0 Allele:1"
_SEPARATOR = "---------- -------- --------"


def demo_report_format(report: DemoReport) -> str:
    """The three-column percentage table, one row per report interval."""
    lines = [_HEADER, _SEPARATOR]
    for row in report.rows:
        lines.append(f"{row.generation:10d} {row.allele0_pct:7d}% {row.allele1_pct:7d}%")
    lines.append(_SEPARATOR)
    lines.append(f"{'Average':>10} {report.average0_pct:7d}% {report.average1_pct:7d}%")
    return "\n".join(lines)
