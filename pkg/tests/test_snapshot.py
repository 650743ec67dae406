import copy
import json

import pytest

from codefarm.config import build_config, config_digest
from codefarm.farm import init_farm, run, step_generation
from codefarm.snapshot import (
    FORMAT_VERSION,
    SnapshotError,
    load_snapshot,
    read_document,
    save_snapshot,
)


def cfg(**overrides):
    values = {
        "population_size": 6,
        "genome_length": 16,
        "step_limit": 64,
        "test_input_count": 4,
        "dataset.mode": "fixed",
        "dataset.num_examples": 2,
        "dataset.fixed_input_len": 5,
        "dataset.fixed_output_len": 3,
        "termination.max_generations": 6,
        "master_seed": 11,
    }
    values.update(overrides)
    return build_config(values)


def test_save_load_round_trip_fresh_state(tmp_path):
    config = cfg()
    state = init_farm(config)
    path = tmp_path / "snap.json"
    save_snapshot(state, config, path)
    doc = read_document(path)
    assert doc["generation"] == 0
    assert doc["seed_list"] == []
    assert doc["elites"] == []
    assert doc["version"] == FORMAT_VERSION
    assert doc["config_digest"] == config_digest(config)
    assert load_snapshot(path, config) == state


def test_round_trip_after_steps(tmp_path):
    config = cfg()
    state = init_farm(config)
    for _ in range(4):
        step_generation(state, config)
    path = tmp_path / "snap.json"
    save_snapshot(state, config, path)
    restored = load_snapshot(path, config)
    assert restored == state
    # loading does not mutate the file
    save_snapshot(restored, config, tmp_path / "snap2.json")
    assert (tmp_path / "snap.json").read_text() == (tmp_path / "snap2.json").read_text()


def test_resume_equivalence_single_split(tmp_path):
    config = cfg(**{"termination.max_generations": 8})
    full = run(config)
    path = tmp_path / "half.json"
    run(config, snapshot_out=str(path), max_generations=4)
    resumed = run(config, snapshot_in=str(path))
    assert resumed == full


def test_digest_mismatch_rejected(tmp_path):
    config = cfg()
    path = tmp_path / "snap.json"
    save_snapshot(init_farm(config), config, path)
    other = cfg(master_seed=12)
    with pytest.raises(SnapshotError, match="digest"):
        load_snapshot(path, other)


def test_tampered_digest_rejected(tmp_path):
    config = cfg()
    path = tmp_path / "snap.json"
    save_snapshot(init_farm(config), config, path)
    doc = json.loads(path.read_text())
    doc["config_digest"] = "0" * 64
    path.write_text(json.dumps(doc))
    with pytest.raises(SnapshotError, match="digest"):
        load_snapshot(path, config)


def test_truncated_file_is_a_parse_error(tmp_path):
    config = cfg()
    path = tmp_path / "snap.json"
    save_snapshot(init_farm(config), config, path)
    text = path.read_text()
    path.write_text(text[: len(text) // 2])
    with pytest.raises(SnapshotError, match="line"):
        read_document(path)


def test_missing_key_is_a_parse_error(tmp_path):
    config = cfg()
    path = tmp_path / "snap.json"
    save_snapshot(init_farm(config), config, path)
    doc = json.loads(path.read_text())
    del doc["rng_streams"]
    path.write_text(json.dumps(doc))
    with pytest.raises(SnapshotError, match="rng_streams"):
        read_document(path)


def test_unsupported_version_rejected(tmp_path):
    config = cfg()
    path = tmp_path / "snap.json"
    save_snapshot(init_farm(config), config, path)
    doc = json.loads(path.read_text())
    doc["version"] = 999
    path.write_text(json.dumps(doc))
    with pytest.raises(SnapshotError, match="version"):
        read_document(path)


def test_missing_file_error_names_path(tmp_path):
    with pytest.raises(SnapshotError, match="ghost.json"):
        read_document(tmp_path / "ghost.json")


def test_bad_genome_hex_is_a_parse_error(tmp_path):
    config = cfg()
    path = tmp_path / "snap.json"
    save_snapshot(init_farm(config), config, path)
    doc = json.loads(path.read_text())
    doc["population"][0] = "zz"
    path.write_text(json.dumps(doc))
    with pytest.raises(SnapshotError, match=r"population\[0\]"):
        load_snapshot(path, config)


def test_save_is_deterministic(tmp_path):
    config = cfg()
    state = init_farm(config)
    for _ in range(2):
        step_generation(state, config)
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    save_snapshot(state, config, a)
    save_snapshot(state, config, b)
    assert a.read_bytes() == b.read_bytes()
