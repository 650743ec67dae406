"""Population scoring under weak selection.

Raw per-datum match scores are averaged per genome, affinely rescaled so the
population minimum maps to -1 and the maximum to +1 (the differential score),
then squeezed into [1 - strength, 1 + strength]: weak = 1 + strength * diff.
Statically trivial genomes are forced to the lowest achievable raw score.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .datasets import Dataset
from .vm import Genome, execute, is_syntactically_trivial


@dataclass(frozen=True)
class FitnessParams:
    selection_strength: float = 0.125
    correlation_mode: bool = True
    step_limit: int = 4096

    def validate(self) -> None:
        if not 0.0 < self.selection_strength <= 1.0:
            raise ValueError("fitness.selection_strength must be in (0, 1]")
        if self.step_limit < 1:
            raise ValueError("step_limit must be >= 1")


@dataclass(frozen=True)
class ScoreVector:
    raw: tuple[float, ...]
    differential: tuple[float, ...]
    weak: tuple[float, ...]

    @classmethod
    def empty(cls) -> "ScoreVector":
        return cls(raw=(), differential=(), weak=())


def raw_match(output: str, target: str) -> float:
    """Fraction of target positions the output reproduces.

    Positions the output is too short to cover count as mismatches; output
    bits beyond the target are ignored. An empty target has no positions to
    miss and scores 1.0.
    """
    if not target:
        return 1.0
    hits = 0
    limit = min(len(output), len(target))
    for i in range(limit):
        if output[i] == target[i]:
            hits += 1
    return hits / len(target)


def datum_score(raw: float, correlation_mode: bool) -> float:
    """Optionally credit anti-correlated output: score = max(raw, 1 - raw)."""
    if correlation_mode:
        return max(raw, 1.0 - raw)
    return raw


def _score_one(genome: Genome, dataset: Dataset, params: FitnessParams) -> float:
    total = 0.0
    for datum in dataset.examples:
        out = execute(genome, datum.input, params.step_limit).output
        total += datum_score(raw_match(out, datum.output), params.correlation_mode)
    return total / len(dataset.examples)


def _rescale(raw: list[float]) -> list[float]:
    lo = min(raw)
    hi = max(raw)
    if lo == hi:
        return [0.0] * len(raw)
    span = hi - lo
    # ((r-lo)+(r-hi))/span is the affine min->-1, max->+1 map, written so the
    # endpoints land on -1.0 and +1.0 exactly in floating point.
    return [min(1.0, max(-1.0, ((r - lo) + (r - hi)) / span)) for r in raw]


def score_population(
    population: list[Genome],
    dataset: Dataset,
    params: FitnessParams,
    trivial_flags: list[bool] | None = None,
    max_workers: int = 1,
) -> ScoreVector:
    """Score every genome against the dataset and apply the weak-selection map.

    The result is independent of max_workers: per-genome evaluation is pure
    and results are collected in population order.
    """
    if not population:
        raise ValueError("population must be nonempty")
    if not dataset.examples:
        raise ValueError("dataset must be nonempty")
    params.validate()
    if trivial_flags is None:
        trivial_flags = [is_syntactically_trivial(g) for g in population]

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            raw = list(pool.map(lambda g: _score_one(g, dataset, params), population))
    else:
        raw = [_score_one(g, dataset, params) for g in population]
    for i, flagged in enumerate(trivial_flags):
        if flagged:
            raw[i] = 0.0  # lowest achievable raw score

    differential = _rescale(raw)
    weak = [1.0 + params.selection_strength * d for d in differential]
    return ScoreVector(raw=tuple(raw), differential=tuple(differential), weak=tuple(weak))
