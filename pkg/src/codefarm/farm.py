"""The farming loop: regenerate targets, score, record, breed, repeat.

Each generation draws a fresh random target dataset, scores the population
under weak selection, appends the fittest genome to the persistent seed list,
offers it to the elite ledger, and breeds the next population with elite
injection. All randomness flows through named counter-based streams derived
from the master seed, so a run is a pure function of its configuration.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from typing import TextIO

from .config import ConfigError, FarmConfig
from .datasets import generate_dataset
from .elites import EliteEntry, TestInputs, fittest_index, make_test_inputs, maybe_add_elite
from .evolution import next_generation
from .fitness import ScoreVector, score_population
from .rng import Stream, derive_key
from .vm import Genome, is_syntactically_trivial

STREAM_NAMES = (
    "init",
    "dataset",
    "selection",
    "mutation",
    "crossover",
    "elite-coin",
    "test-inputs",
)


@dataclass
class FarmState:
    generation: int
    population: list[Genome]
    score_vector: ScoreVector
    seed_list: list[Genome]
    elites: list[EliteEntry]
    test_inputs: TestInputs
    rng_streams: dict[str, Stream]


def worker_count() -> int:
    """Fitness-evaluation parallelism from CODEFARM_THREADS (0 = auto, unset = 1)."""
    raw = os.environ.get("CODEFARM_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"CODEFARM_THREADS must be an integer, got {raw!r}") from None
    if n == 0:
        return os.cpu_count() or 1
    return max(1, n)


def init_farm(config: FarmConfig) -> FarmState:
    config.validate()
    streams = {name: Stream(derive_key(config.master_seed, name)) for name in STREAM_NAMES}
    words = streams["init"].next_u64_array(config.population_size * config.genome_length)
    raw = (words & 0xFF).astype("uint8").tobytes()
    population = [
        raw[i * config.genome_length : (i + 1) * config.genome_length]
        for i in range(config.population_size)
    ]
    test_inputs = make_test_inputs(
        config.test_input_count, streams["test-inputs"], config.dataset.universal_max_len
    )
    return FarmState(
        generation=0,
        population=population,
        score_vector=ScoreVector.empty(),
        seed_list=[],
        elites=[],
        test_inputs=test_inputs,
        rng_streams=streams,
    )


def record_seed(
    population: list[Genome], score_vector: ScoreVector, seed_list: list[Genome]
) -> list[Genome]:
    """Append the fittest genome (ties -> lowest index) to the seed list."""
    return seed_list + [population[fittest_index(score_vector.weak)]]


def step_generation(state: FarmState, config: FarmConfig) -> FarmState:
    """Advance the farm by one generation, mutating and returning the state."""
    streams = state.rng_streams
    dataset = generate_dataset(config.dataset, streams["dataset"])
    trivial_flags = [is_syntactically_trivial(g) for g in state.population]
    score_vector = score_population(
        state.population,
        dataset,
        config.fitness,
        trivial_flags=trivial_flags,
        max_workers=worker_count(),
    )
    new_generation = state.generation + 1
    state.score_vector = score_vector
    state.seed_list = record_seed(state.population, score_vector, state.seed_list)
    state.elites = maybe_add_elite(
        state.elites,
        state.population,
        score_vector,
        trivial_flags,
        state.test_inputs,
        new_generation,
        config.step_limit,
    )
    state.population = next_generation(
        state.population,
        list(score_vector.weak),
        [e.genome for e in state.elites],
        config.evolution,
        selection=streams["selection"],
        mutation=streams["mutation"],
        crossover=streams["crossover"],
        elite_coin=streams["elite-coin"],
    )
    state.generation = new_generation
    return state


def export_seeds(
    seed_list: list[Genome],
    test_inputs: TestInputs,
    step_limit: int,
    n: int,
    dedup: bool,
) -> list[Genome]:
    """Last n seeds, oldest first; with dedup, walk backward keeping only
    genomes with pairwise-distinct signatures until n are collected."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not dedup:
        return list(seed_list[-n:])
    from .elites import compute_signature

    kept: list[Genome] = []
    seen = set()
    for genome in reversed(seed_list):
        signature = compute_signature(genome, test_inputs, step_limit)
        if signature in seen:
            continue
        seen.add(signature)
        kept.append(genome)
        if len(kept) == n:
            break
    kept.reverse()
    return kept


def progress_metric(elites: list[EliteEntry], window: int, generation: int) -> float:
    """Elites added per generation over the trailing window."""
    if window < 1:
        raise ValueError("window must be >= 1")
    low = generation - window
    return sum(1 for e in elites if low < e.generation_added <= generation) / window


def run(
    config: FarmConfig,
    snapshot_in: str | None = None,
    snapshot_out: str | None = None,
    progress: TextIO | None = None,
    max_generations: int | None = None,
    elite_target: int | None = None,
) -> FarmState:
    """Run (or resume) the farm until max_generations or the elite target.

    Loads snapshot_in when given (must match the config), saves snapshot_out
    at the end when given, and writes one progress line per generation.
    max_generations / elite_target override the configured stop conditions
    without changing the config identity, so a run can be split across
    snapshots: stopping early and resuming later replays one trajectory.
    """
    from .snapshot import load_snapshot, save_snapshot

    config.validate()
    if max_generations is None:
        max_generations = config.termination.max_generations
    if elite_target is None:
        elite_target = config.termination.elite_target
    if snapshot_in is not None:
        state = load_snapshot(snapshot_in, config)
    else:
        state = init_farm(config)
    while state.generation < max_generations and not (
        0 < elite_target <= len(state.elites)
    ):
        step_generation(state, config)
        if progress is not None:
            best = max(state.score_vector.weak)
            print(
                f"gen={state.generation} best={best} "
                f"elites={len(state.elites)} seeds={len(state.seed_list)}",
                file=progress,
            )
    if snapshot_out is not None:
        save_snapshot(state, config, snapshot_out)
    return state
