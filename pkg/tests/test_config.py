import pytest

from codefarm.config import (
    ConfigError,
    FarmConfig,
    build_config,
    config_digest,
    load_config_file,
    parse_config_text,
)

FULL_TEXT = """
# farm settings
population_size = 8
genome_length = 32          # bytes
step_limit = 128
test_input_count = 4
master_seed = 99

dataset.mode = fixed
dataset.num_examples = 2
dataset.fixed_input_len = 8
dataset.fixed_output_len = 4
dataset.universal_max_len = 16

fitness.selection_strength = 0.25
fitness.correlation_mode = false

evolution.mutation_rate = 0.01
evolution.crossover_rate = 0.4
evolution.crossover_method = uniform
evolution.elite_probability = 0.125

termination.max_generations = 10
termination.elite_target = 3
"""


def test_parse_full_config():
    cfg = parse_config_text(FULL_TEXT)
    assert cfg.population_size == 8
    assert cfg.genome_length == 32
    assert cfg.step_limit == 128
    assert cfg.fitness.step_limit == 128  # wired from the single key
    assert cfg.dataset.mode == "fixed"
    assert cfg.fitness.correlation_mode is False
    assert cfg.evolution.crossover_method == "uniform"
    assert cfg.termination.elite_target == 3
    assert cfg.master_seed == 99


def test_defaults_apply_when_keys_missing():
    cfg = parse_config_text("population_size = 4\n")
    assert cfg.population_size == 4
    assert cfg.genome_length == 256
    assert cfg.step_limit == 4096
    assert cfg.dataset.mode == "universal"
    assert cfg.termination.max_generations == 100


def test_unknown_key_rejected_with_name_and_line():
    with pytest.raises(ConfigError, match=r"line 2.*population_sise"):
        parse_config_text("\npopulation_sise = 4\n")


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config_text("step_limit = 1\nstep_limit = 2\n")


def test_bad_values_name_the_field():
    with pytest.raises(ConfigError, match="population_size"):
        parse_config_text("population_size = many\n")
    with pytest.raises(ConfigError, match="dataset.mode"):
        parse_config_text("dataset.mode = gaussian\n")
    with pytest.raises(ConfigError, match="correlation_mode"):
        parse_config_text("fitness.correlation_mode = maybe\n")


def test_invalid_field_values_rejected_by_validate():
    with pytest.raises(ConfigError, match="population_size"):
        parse_config_text("population_size = 7\n")
    with pytest.raises(ConfigError, match="crossover_rate"):
        parse_config_text("evolution.crossover_rate = 0.9\n")
    with pytest.raises(ConfigError, match="selection_strength"):
        parse_config_text("fitness.selection_strength = 0\n")


def test_missing_file_error_contains_path(tmp_path):
    missing = tmp_path / "nope.cfg"
    with pytest.raises(ConfigError, match="nope.cfg"):
        load_config_file(missing)


def test_config_file_round_trip(tmp_path):
    path = tmp_path / "farm.cfg"
    path.write_text(FULL_TEXT)
    assert load_config_file(path) == parse_config_text(FULL_TEXT)


def test_digest_changes_with_any_field():
    base = FarmConfig().validate()
    variants = [
        build_config({"population_size": 32}),
        build_config({"master_seed": 2}),
        build_config({"evolution.elite_probability": 0.25}),
        build_config({"dataset.mode": "fixed"}),
    ]
    digests = {config_digest(base)} | {config_digest(v) for v in variants}
    assert len(digests) == 5  # all distinct


def test_digest_is_stable():
    assert config_digest(FarmConfig()) == config_digest(FarmConfig())
