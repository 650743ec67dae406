"""Snapshot save/load: the complete resumable process state as one JSON file.

Top-level keys: version, config_digest, generation, population, scores,
seed_list, elites, test_inputs, rng_streams. Genomes are lowercase hex,
bitstrings ASCII 0/1, signature entries carry a "!" suffix for non-halting
runs, stream states are the per-stream draw counters. Writes are atomic
(temp file + rename), so a crash never leaves a corrupt snapshot behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING

from .config import FarmConfig, config_digest
from .elites import EliteEntry
from .fitness import ScoreVector
from .rng import Stream, derive_key
from .vm import genome_from_hex, genome_to_hex

if TYPE_CHECKING:
    from .farm import FarmState

FORMAT_VERSION = 1


class SnapshotError(Exception):
    """Snapshot cannot be read, parsed, or reconciled with the configuration."""


def save_snapshot(state: "FarmState", config: FarmConfig, destination: str | Path) -> None:
    document = {
        "version": FORMAT_VERSION,
        "config_digest": config_digest(config),
        "generation": state.generation,
        "population": [genome_to_hex(g) for g in state.population],
        "scores": {
            "raw": list(state.score_vector.raw),
            "differential": list(state.score_vector.differential),
            "weak": list(state.score_vector.weak),
        },
        "seed_list": [genome_to_hex(g) for g in state.seed_list],
        "elites": [
            {
                "genome": genome_to_hex(e.genome),
                "signature": list(e.signature),
                "generation_added": e.generation_added,
            }
            for e in state.elites
        ],
        "test_inputs": list(state.test_inputs),
        "rng_streams": {name: stream.counter for name, stream in state.rng_streams.items()},
    }
    destination = Path(destination)
    text = json.dumps(document, sort_keys=True, indent=2)
    try:
        fd, tmp_path = tempfile.mkstemp(
            dir=destination.parent or Path("."), prefix=destination.name, suffix=".tmp"
        )
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
            handle.write("\n")
        os.replace(tmp_path, destination)
    except OSError as exc:
        raise SnapshotError(f"cannot write snapshot to {destination}: {exc}") from exc


def read_document(source: str | Path) -> dict:
    """Parse and structurally validate a snapshot file, without a config check."""
    source = Path(source)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise SnapshotError(f"cannot read snapshot {source}: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SnapshotError(
            f"malformed snapshot {source}: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    if not isinstance(document, dict):
        raise SnapshotError(f"malformed snapshot {source}: top level is not an object")
    for key in (
        "version",
        "config_digest",
        "generation",
        "population",
        "scores",
        "seed_list",
        "elites",
        "test_inputs",
        "rng_streams",
    ):
        if key not in document:
            raise SnapshotError(f"malformed snapshot {source}: missing key {key!r}")
    if document["version"] != FORMAT_VERSION:
        raise SnapshotError(
            f"unsupported snapshot version {document['version']!r} (supported: {FORMAT_VERSION})"
        )
    return document


def _genomes(items, where: str) -> list[bytes]:
    out = []
    for i, item in enumerate(items):
        try:
            out.append(genome_from_hex(item))
        except (ValueError, TypeError) as exc:
            raise SnapshotError(f"malformed snapshot: {where}[{i}]: {exc}") from exc
    return out


def load_snapshot(source: str | Path, config: FarmConfig) -> "FarmState":
    from .farm import FarmState, STREAM_NAMES

    document = read_document(source)
    expected = config_digest(config)
    if document["config_digest"] != expected:
        raise SnapshotError(
            f"snapshot {source} was produced by a different configuration "
            f"(digest {document['config_digest']!r}, expected {expected!r})"
        )
    try:
        scores = ScoreVector(
            raw=tuple(float(x) for x in document["scores"]["raw"]),
            differential=tuple(float(x) for x in document["scores"]["differential"]),
            weak=tuple(float(x) for x in document["scores"]["weak"]),
        )
        elites = [
            EliteEntry(
                genome=genome_from_hex(e["genome"]),
                signature=tuple(e["signature"]),
                generation_added=int(e["generation_added"]),
            )
            for e in document["elites"]
        ]
        counters = document["rng_streams"]
        streams = {
            name: Stream(derive_key(config.master_seed, name), counter=int(counters[name]))
            for name in STREAM_NAMES
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise SnapshotError(f"malformed snapshot {source}: {exc!r}") from exc
    return FarmState(
        generation=int(document["generation"]),
        population=_genomes(document["population"], "population"),
        score_vector=scores,
        seed_list=_genomes(document["seed_list"], "seed_list"),
        elites=elites,
        test_inputs=tuple(document["test_inputs"]),
        rng_streams=streams,
    )
