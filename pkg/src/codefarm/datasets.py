"""Target dataset generation.

A fresh dataset of input/output bitstring pairs is drawn every generation.
Universal mode draws arbitrary-length strings under the density
P(string) = 2^(-2*len - 1), i.e. length geometric with P(len) = 2^(-len-1)
followed by fair bits; fixed mode draws fixed-length fair-coin strings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rng import Stream


@dataclass(frozen=True)
class Datum:
    input: str
    output: str


@dataclass(frozen=True)
class Dataset:
    examples: tuple[Datum, ...]

    def __len__(self) -> int:
        return len(self.examples)


@dataclass(frozen=True)
class DatasetConfig:
    mode: str = "universal"  # "universal" | "fixed"
    num_examples: int = 16
    fixed_input_len: int = 32
    fixed_output_len: int = 8
    universal_max_len: int = 64

    def validate(self) -> None:
        if self.mode not in ("universal", "fixed"):
            raise ValueError(f"dataset.mode must be 'universal' or 'fixed', got {self.mode!r}")
        if self.num_examples < 1:
            raise ValueError("dataset.num_examples must be >= 1")
        if self.universal_max_len < 1:
            raise ValueError("dataset.universal_max_len must be >= 1")
        if self.mode == "fixed" and (self.fixed_input_len < 1 or self.fixed_output_len < 1):
            raise ValueError("fixed-mode lengths must be >= 1")


def sample_universal_string(rng: Stream, max_len: int) -> str:
    """Draw a bitstring with P(length = l) proportional to 2^(-l-1), l <= max_len.

    The length is a run of fair coins (each 1 extends the run); draws that
    would exceed max_len are rejected and resampled, which preserves the
    relative probabilities of the retained lengths.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    while True:
        length = 0
        while rng.next_bit():
            length += 1
            if length > max_len:
                break
        if length <= max_len:
            return "".join("01"[rng.next_bit()] for _ in range(length))


def _fair_bits(rng: Stream, n: int) -> str:
    return "".join("01"[rng.next_bit()] for _ in range(n))


def generate_dataset(config: DatasetConfig, rng: Stream) -> Dataset:
    """Draw one full target dataset; every call consumes fresh randomness."""
    config.validate()
    examples = []
    for _ in range(config.num_examples):
        if config.mode == "fixed":
            inp = _fair_bits(rng, config.fixed_input_len)
            out = _fair_bits(rng, config.fixed_output_len)
        else:
            inp = sample_universal_string(rng, config.universal_max_len)
            out = sample_universal_string(rng, config.universal_max_len)
        examples.append(Datum(input=inp, output=out))
    return Dataset(examples=tuple(examples))


def format_dataset(dataset: Dataset) -> str:
    """Debug dump: one `<input-bits> -> <output-bits>` line per datum."""
    return "\n".join(f"{d.input} -> {d.output}" for d in dataset.examples)
