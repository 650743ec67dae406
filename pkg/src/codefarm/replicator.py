"""Single-locus allele-frequency dynamics under weak selection.

One step multiplies each allele's frequency by its mean fitness and
renormalizes: x'_j = F_j * x_j / X with X = sum_j F_j * x_j. Over time this
compounds fitness products, so between two alleles with equal arithmetic-mean
fitness the one with the larger geometric mean (equivalently, the smaller
variance) wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ReplicatorState:
    frequencies: tuple[float, ...]

    def __post_init__(self):
        if not self.frequencies:
            raise ValueError("frequencies must be nonempty")
        if any(f < 0 for f in self.frequencies):
            raise ValueError("frequencies must be nonnegative")
        if abs(sum(self.frequencies) - 1.0) > _SUM_TOLERANCE:
            raise ValueError("frequencies must sum to 1")

    @classmethod
    def uniform(cls, n: int) -> "ReplicatorState":
        return cls(frequencies=tuple([1.0 / n] * n))


@dataclass(frozen=True)
class FitnessTrace:
    """Per-allele mean-fitness sequences; values[t][j] is allele j at step t."""

    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        widths = {len(row) for row in self.values}
        if len(widths) > 1:
            raise ValueError("all trace rows must have the same number of alleles")
        if any(v <= 0 for row in self.values for v in row):
            raise ValueError("fitness values must be positive")

    @classmethod
    def from_columns(cls, columns: list[list[float]]) -> "FitnessTrace":
        return cls(values=tuple(zip(*columns)) if columns else ())


def replicator_step(state: ReplicatorState, fitnesses: list[float]) -> ReplicatorState:
    """One generation of x'_j = F_j x_j / X."""
    if len(fitnesses) != len(state.frequencies):
        raise ValueError("fitness vector length must match allele count")
    if any(f <= 0 for f in fitnesses):
        raise ValueError("fitness values must be positive")
    weighted = [f * x for f, x in zip(fitnesses, state.frequencies)]
    total = sum(weighted)
    scaled = [w / total for w in weighted]
    # renormalize to absorb rounding drift over long traces
    norm = sum(scaled)
    return ReplicatorState(frequencies=tuple(w / norm for w in scaled))


def run_trace(initial: ReplicatorState, trace: FitnessTrace) -> list[ReplicatorState]:
    """Fold replicator_step over the trace; returns all T+1 states."""
    states = [initial]
    for row in trace.values:
        states.append(replicator_step(states[-1], list(row)))
    return states


@dataclass(frozen=True)
class VarianceReport:
    arithmetic_means: tuple[float, float]
    geometric_means: tuple[float, float]
    variances: tuple[float, float]
    winner: int | None  # index of the predicted winning allele, None on a tie


def variance_comparison(trace_a: list[float], trace_b: list[float]) -> VarianceReport:
    """Compare two positive fitness traces; the larger geometric mean wins.

    With equal arithmetic means and unequal variances, the lower-variance
    trace necessarily has the strictly larger geometric mean.
    """
    if len(trace_a) != len(trace_b):
        raise ValueError("traces must have equal length")
    if not trace_a:
        raise ValueError("traces must be nonempty")
    if any(v <= 0 for v in trace_a) or any(v <= 0 for v in trace_b):
        raise ValueError("fitness values must be positive")

    def arith(xs):
        return sum(xs) / len(xs)

    def geo(xs):
        return math.exp(sum(math.log(x) for x in xs) / len(xs))

    def var(xs):
        mean = arith(xs)
        return sum((x - mean) ** 2 for x in xs) / len(xs)

    ga, gb = geo(trace_a), geo(trace_b)
    winner = None if ga == gb else (0 if ga > gb else 1)
    return VarianceReport(
        arithmetic_means=(arith(trace_a), arith(trace_b)),
        geometric_means=(ga, gb),
        variances=(var(trace_a), var(trace_b)),
        winner=winner,
    )
