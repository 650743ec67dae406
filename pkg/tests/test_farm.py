import copy
import io

import pytest

from codefarm.config import FarmConfig, build_config
from codefarm.elites import compute_signature
from codefarm.farm import (
    FarmState,
    export_seeds,
    init_farm,
    progress_metric,
    record_seed,
    run,
    step_generation,
)
from codefarm.fitness import ScoreVector
from codefarm.elites import EliteEntry


def small_config(**overrides) -> FarmConfig:
    values = {
        "population_size": 8,
        "genome_length": 24,
        "step_limit": 96,
        "test_input_count": 6,
        "dataset.mode": "fixed",
        "dataset.num_examples": 3,
        "dataset.fixed_input_len": 6,
        "dataset.fixed_output_len": 4,
        "termination.max_generations": 5,
        "master_seed": 7,
    }
    values.update(overrides)
    return build_config(values)


def test_init_farm_shapes():
    cfg = small_config()
    state = init_farm(cfg)
    assert state.generation == 0
    assert len(state.population) == 8
    assert all(len(g) == 24 for g in state.population)
    assert state.seed_list == []
    assert state.elites == []
    assert len(state.test_inputs) == 6
    assert state.score_vector == ScoreVector.empty()


def test_init_farm_deterministic():
    cfg = small_config()
    assert init_farm(cfg) == init_farm(cfg)


def test_step_appends_one_seed_per_generation():
    cfg = small_config()
    state = init_farm(cfg)
    step_generation(state, cfg)
    assert state.generation == 1
    assert len(state.seed_list) == 1
    step_generation(state, cfg)
    assert len(state.seed_list) == 2
    assert len(state.elites) <= 2


def test_steps_are_deterministic():
    cfg = small_config()
    a = init_farm(cfg)
    b = init_farm(cfg)
    for _ in range(3):
        step_generation(a, cfg)
        step_generation(b, cfg)
    assert a == b


def test_record_seed_argmax_and_ties():
    pop = [bytes([0]), bytes([1]), bytes([2])]
    sv = ScoreVector(raw=(0, 0, 0), differential=(0, 0, 0), weak=(1.0, 1.125, 0.875))
    assert record_seed(pop, sv, [])[-1] == bytes([1])
    sv_tie = ScoreVector(raw=(0, 0, 0), differential=(0, 0, 0), weak=(1.0, 1.0, 1.0))
    assert record_seed(pop, sv_tie, [])[-1] == bytes([0])
    out = record_seed(pop, sv, [bytes([9])])
    assert len(out) == 2


def test_run_zero_generations_returns_initial_state():
    cfg = small_config(**{"termination.max_generations": 0})
    state = run(cfg)
    assert state.generation == 0
    assert state == init_farm(cfg)


def test_run_stops_at_elite_target():
    cfg = small_config(**{"termination.max_generations": 50, "termination.elite_target": 1})
    state = run(cfg)
    assert len(state.elites) >= 1
    # stopped at the first admitting generation: ledger has exactly one entry
    assert len(state.elites) == 1
    assert state.generation == state.elites[0].generation_added


def test_run_emits_progress_lines():
    cfg = small_config(**{"termination.max_generations": 3})
    sink = io.StringIO()
    state = run(cfg, progress=sink)
    lines = sink.getvalue().strip().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("gen=1 best=")
    assert "elites=" in lines[0] and "seeds=1" in lines[0]
    assert lines[-1].startswith(f"gen={state.generation} ")


def test_full_run_determinism():
    cfg = small_config(**{"termination.max_generations": 10})
    assert run(cfg) == run(cfg)


def test_different_seeds_diverge():
    a = run(small_config(master_seed=1))
    b = run(small_config(master_seed=2))
    assert a.population != b.population


def test_seed_list_length_tracks_generations():
    cfg = small_config(**{"termination.max_generations": 12})
    state = run(cfg)
    assert state.generation == 12
    assert len(state.seed_list) == 12


def test_elite_ledger_invariants_in_run():
    cfg = small_config(**{"termination.max_generations": 40})
    state = run(cfg)
    sigs = [e.signature for e in state.elites]
    assert len(set(sigs)) == len(sigs)
    gens = [e.generation_added for e in state.elites]
    assert gens == sorted(gens)
    from codefarm.vm import is_syntactically_trivial

    assert not any(is_syntactically_trivial(e.genome) for e in state.elites)


# --- export_seeds ----------------------------------------------------------

def test_export_seeds_suffix_and_clamp():
    seeds = [bytes([1]), bytes([2]), bytes([3])]
    assert export_seeds(seeds, (), 64, 2, dedup=False) == [bytes([2]), bytes([3])]
    assert export_seeds(seeds, (), 64, 9, dedup=False) == seeds
    assert export_seeds([], (), 64, 3, dedup=False) == []
    with pytest.raises(ValueError):
        export_seeds(seeds, (), 64, 0, dedup=False)


def test_export_seeds_dedup_drops_equal_signatures():
    # [7] and [7,0] both write a single 0 and ignore input: same signature
    a, b, c = bytes([7]), bytes([7, 0]), bytes([2, 7])
    inputs = ("", "1", "01")
    assert compute_signature(a, inputs, 64) == compute_signature(b, inputs, 64)
    kept = export_seeds([a, b, c], inputs, 64, 3, dedup=True)
    # walks from the end: c first, then b; a collides with b and is dropped
    assert kept == [b, c]


def test_export_seeds_dedup_stops_at_n():
    a, b, c = bytes([7]), bytes([2, 7]), bytes([2, 2, 7])
    inputs = ("",)
    kept = export_seeds([a, b, c], inputs, 64, 2, dedup=True)
    assert kept == [b, c]


# --- progress_metric ---------------------------------------------------------

def _entry(gen):
    return EliteEntry(genome=bytes([6, 7]), signature=(str(gen),), generation_added=gen)


def test_progress_metric_empty_ledger():
    assert progress_metric([], 10, 100) == 0.0


def test_progress_metric_full_rate():
    ledger = [_entry(g) for g in range(1, 11)]
    assert progress_metric(ledger, 10, 10) == 1.0


def test_progress_metric_counts_only_window():
    ledger = [_entry(5), _entry(9)]
    assert progress_metric(ledger, 10, 10) == 0.2
    assert progress_metric(ledger, 2, 10) == 0.5
    assert progress_metric(ledger, 2, 20) == 0.0
    assert progress_metric(ledger, 1, 9) == 1.0
    with pytest.raises(ValueError):
        progress_metric(ledger, 0, 10)


def test_worker_count_env(monkeypatch):
    from codefarm.config import ConfigError
    from codefarm.farm import worker_count

    monkeypatch.delenv("CODEFARM_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("CODEFARM_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("CODEFARM_THREADS", "0")
    assert worker_count() >= 1
    monkeypatch.setenv("CODEFARM_THREADS", "lots")
    with pytest.raises(ConfigError):
        worker_count()


def test_thread_count_does_not_change_trajectory(monkeypatch):
    cfg = small_config(**{"termination.max_generations": 4})
    monkeypatch.delenv("CODEFARM_THREADS", raising=False)
    sequential = run(cfg)
    monkeypatch.setenv("CODEFARM_THREADS", "4")
    threaded = run(cfg)
    assert sequential == threaded
