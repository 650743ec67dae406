"""Command-line interface.

Subcommands: farm (run/resume the farming loop), demo (the control-gene
experiment), replicator (allele-frequency dynamics over a fitness-trace CSV),
seeds export (dump seed-list genomes from a snapshot), snapshot info, and
progress (elite growth rate). Exit codes: 0 success, 2 usage/config error,
3 snapshot/data error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys

from .config import ConfigError, load_config_file
from .demo import DemoConfig, demo_report_format, run_demo
from .farm import export_seeds, progress_metric, run
from .replicator import FitnessTrace, ReplicatorState, run_trace, variance_comparison
from .snapshot import SnapshotError, read_document
from .vm import genome_from_hex

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


def cmd_farm(args) -> int:
    config = load_config_file(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, master_seed=args.seed).validate()
    run(
        config,
        snapshot_in=args.snapshot_in,
        snapshot_out=args.snapshot_out,
        progress=sys.stderr,
        max_generations=args.generations,
    )
    return EXIT_OK


def cmd_demo(args) -> int:
    if args.runs < 1:
        raise ConfigError("--runs must be >= 1")
    reports = []
    for offset in range(args.runs):
        reports.append(run_demo(DemoConfig(seed=args.seed + offset)))
    print(demo_report_format(reports[0]))
    print()
    for i, report in enumerate(reports, start=1):
        print(
            f"run {i} (seed {report.seed}): allele0 avg {report.average0_pct}%, "
            f"allele1 avg {report.average1_pct}%"
        )
    mean0 = sum(r.average0_pct for r in reports) / len(reports)
    mean1 = sum(r.average1_pct for r in reports) / len(reports)
    print(f"mean over {len(reports)} runs: allele0 avg {mean0}%, allele1 avg {mean1}%")

    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["run", "generation", "allele0", "allele1"])
            for i, report in enumerate(reports, start=1):
                for row in report.rows:
                    writer.writerow([i, row.generation, row.allele0_pct, row.allele1_pct])
    if args.aggregate_csv:
        with open(args.aggregate_csv, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["run", "seed", "allele0_avg", "allele1_avg"])
            for i, report in enumerate(reports, start=1):
                writer.writerow([i, report.seed, report.average0_pct, report.average1_pct])
            writer.writerow(["mean", "", mean0, mean1])
    return EXIT_OK


def cmd_seeds_export(args) -> int:
    document = read_document(args.snapshot)
    try:
        seed_list = [genome_from_hex(h) for h in document["seed_list"]]
        test_inputs = tuple(document["test_inputs"])
    except (ValueError, TypeError) as exc:
        raise SnapshotError(f"malformed snapshot {args.snapshot}: {exc}") from exc
    if seed_list:
        genomes = export_seeds(
            seed_list, test_inputs, args.step_limit, args.count, dedup=args.dedup
        )
    else:
        genomes = []
    lines = "".join(g.hex() + "\n" for g in genomes)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(lines)
    else:
        sys.stdout.write(lines)
    return EXIT_OK


def _load_trace_csv(path: str) -> list[list[float]]:
    try:
        with open(path, newline="") as handle:
            reader = csv.reader(handle)
            rows = list(reader)
    except OSError as exc:
        raise ConfigError(f"cannot read trace {path}: {exc}") from exc
    values: list[list[float]] = []
    for r, row in enumerate(rows, start=1):
        if not row or (r == 1 and not _is_number(row[0])):
            continue  # skip blank lines and an optional header row
        parsed = []
        for c, cell in enumerate(row, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise ConfigError(
                    f"trace {path}: row {r}, column {c}: not a number: {cell!r}"
                ) from None
            if value <= 0:
                raise ConfigError(
                    f"trace {path}: row {r}, column {c}: fitness must be positive, got {cell}"
                )
            parsed.append(value)
        if values and len(parsed) != len(values[0]):
            raise ConfigError(f"trace {path}: row {r}: expected {len(values[0])} columns")
        values.append(parsed)
    if not values:
        raise ConfigError(f"trace {path}: no data rows")
    return values


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def cmd_replicator(args) -> int:
    rows = _load_trace_csv(args.trace)
    n_alleles = len(rows[0])
    steps = args.steps if args.steps is not None else len(rows)
    cycled = [rows[t % len(rows)] for t in range(steps)]

    if args.initial:
        try:
            freqs = tuple(float(x) for x in args.initial.split(","))
        except ValueError:
            raise ConfigError(f"--initial must be comma-separated numbers: {args.initial!r}") from None
        if len(freqs) != n_alleles:
            raise ConfigError(f"--initial must list {n_alleles} frequencies")
        try:
            initial = ReplicatorState(frequencies=freqs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    else:
        initial = ReplicatorState.uniform(n_alleles)

    trace = FitnessTrace(values=tuple(tuple(row) for row in cycled))
    states = run_trace(initial, trace)
    writer = csv.writer(sys.stdout)
    writer.writerow(["step"] + [f"allele{i}" for i in range(n_alleles)])
    for t, state in enumerate(states):
        writer.writerow([t] + [repr(f) for f in state.frequencies])

    if n_alleles == 2:
        report = variance_comparison([r[0] for r in cycled], [r[1] for r in cycled])
        print()
        print(f"arithmetic means: {report.arithmetic_means[0]!r} {report.arithmetic_means[1]!r}")
        print(f"geometric means:  {report.geometric_means[0]!r} {report.geometric_means[1]!r}")
        print(f"variances:        {report.variances[0]!r} {report.variances[1]!r}")
        winner = "tie" if report.winner is None else f"allele{report.winner}"
        print(f"predicted winner: {winner}")
    return EXIT_OK


def cmd_snapshot_info(args) -> int:
    document = read_document(args.file)
    print(f"generation: {document['generation']}")
    print(f"population: {len(document['population'])}")
    print(f"seeds: {len(document['seed_list'])}")
    print(f"elites: {len(document['elites'])}")
    print(f"config_digest: {document['config_digest']}")
    return EXIT_OK


def cmd_progress(args) -> int:
    document = read_document(args.snapshot)
    generation = int(document["generation"])
    window = min(args.window, generation) if generation > 0 else 0
    if window < 1:
        rate = 0.0
        window = 0
    else:
        from .elites import EliteEntry

        ledger = [
            EliteEntry(genome=b"", signature=(), generation_added=int(e["generation_added"]))
            for e in document["elites"]
        ]
        rate = progress_metric(ledger, window, generation)
    print(f"generation={generation} window={window} elites_per_generation={rate}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codefarm",
        description="Evolve programs against per-generation randomized target datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_farm = sub.add_parser("farm", help="run or resume the farming loop")
    p_farm.add_argument("--config", required=True, help="config file (key = value lines)")
    p_farm.add_argument("--snapshot-in", help="resume from this snapshot")
    p_farm.add_argument("--snapshot-out", help="write the final snapshot here")
    p_farm.add_argument("--generations", type=int, help="override termination.max_generations")
    p_farm.add_argument("--seed", type=int, help="override master_seed")
    p_farm.set_defaults(func=cmd_farm)

    p_demo = sub.add_parser("demo", help="control-gene experiment (allele report)")
    p_demo.add_argument("--seed", type=int, default=0, help="first run's seed")
    p_demo.add_argument("--runs", type=int, default=1, help="number of runs (seeds seed..seed+n-1)")
    p_demo.add_argument("--csv", help="write per-interval percentages here")
    p_demo.add_argument("--aggregate-csv", help="write per-run averages here")
    p_demo.set_defaults(func=cmd_demo)

    p_seeds = sub.add_parser("seeds", help="seed-list operations")
    seeds_sub = p_seeds.add_subparsers(dest="seeds_command", required=True)
    p_export = seeds_sub.add_parser("export", help="dump seed genomes, one hex line each")
    p_export.add_argument("--snapshot", required=True)
    p_export.add_argument("--count", type=int, required=True, help="how many recent seeds")
    p_export.add_argument("--dedup", action="store_true", help="drop signature duplicates")
    p_export.add_argument("--step-limit", type=int, default=4096, help="VM budget for dedup signatures")
    p_export.add_argument("--out", help="output file (default stdout)")
    p_export.set_defaults(func=cmd_seeds_export)

    p_repl = sub.add_parser("replicator", help="allele-frequency dynamics over a trace CSV")
    p_repl.add_argument("--trace", required=True, help="CSV: one column per allele, one row per step")
    p_repl.add_argument("--steps", type=int, help="run this many steps, cycling the trace")
    p_repl.add_argument("--initial", help="comma-separated initial frequencies (default uniform)")
    p_repl.set_defaults(func=cmd_replicator)

    p_snap = sub.add_parser("snapshot", help="snapshot utilities")
    snap_sub = p_snap.add_subparsers(dest="snapshot_command", required=True)
    p_info = snap_sub.add_parser("info", help="summarize a snapshot file")
    p_info.add_argument("--file", required=True)
    p_info.set_defaults(func=cmd_snapshot_info)

    p_prog = sub.add_parser("progress", help="elites per generation over a trailing window")
    p_prog.add_argument("--snapshot", required=True)
    p_prog.add_argument("--window", type=int, required=True)
    p_prog.set_defaults(func=cmd_progress)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SnapshotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
