"""Command-line front end.

    subsetconv convolve --f F.json --g G.json --algo fft --exact --out H.json
    subsetconv selftest
    subsetconv bench --n-min 10 --n-max 18 --algos naive,fft --trials 3 --seed 1 --csv bench.csv
    subsetconv precision --n 12 --mag 6 --trials 20 --seed 1 --csv precision.csv

Set functions are stored as ``{"n": int, "kind": "int"|"float", "values": [...]}``
with values in bitmask index order.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import config, precision, selftest
from .convolution import ENGINES, RoundingUnsafeError, round_to_integers, run
from .rng import derive_seed
from .setfn import SetFunction, random_instance

log = logging.getLogger("subsetconv")

BENCH_COLUMNS = ("algo", "n", "trial", "seed", "wall_time_ns")
NAIVE_BENCH_MAX_N = 20


class InputError(ValueError):
    """Malformed or inconsistent set-function file."""


def load_set_function(path: str | os.PathLike) -> SetFunction:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if not isinstance(doc, dict) or not {"n", "kind", "values"} <= doc.keys():
        raise InputError(f"{path}: expected an object with keys n, kind, values")
    n, kind, values = doc["n"], doc["kind"], doc["values"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError(f"{path}: n must be a non-negative integer")
    if kind not in ("int", "float"):
        raise InputError(f"{path}: kind must be 'int' or 'float', got {kind!r}")
    if not isinstance(values, list) or len(values) != 1 << n:
        raise InputError(f"{path}: expected {1 << n} values for n={n}")
    numeric = (int,) if kind == "int" else (int, float)
    if any(isinstance(v, bool) or not isinstance(v, numeric) for v in values):
        raise InputError(f"{path}: values must all be {'integers' if kind == 'int' else 'numbers'}")
    if kind == "float" and not all(math.isfinite(v) for v in values):
        raise InputError(f"{path}: values must be finite")
    try:
        return SetFunction(np.array(values, dtype=np.int64 if kind == "int" else np.float64), kind)
    except (ValueError, OverflowError) as exc:
        raise InputError(f"{path}: {exc}") from None


def dump_set_function(f: SetFunction) -> str:
    values = [int(v) for v in f.values] if f.kind == "int" else [float(v) for v in f.values]
    return json.dumps({"n": f.n, "kind": f.kind, "values": values}, allow_nan=False)


def cmd_convolve(args) -> int:
    try:
        f = load_set_function(args.f)
        g = load_set_function(args.g)
        if f.n != g.n:
            raise InputError(f"dimension mismatch: {args.f} has n={f.n}, {args.g} has n={g.n}")
        h, report = run(args.algo, f, g)
        if args.exact and args.algo == "fft":
            h = round_to_integers(h, report)
    except RoundingUnsafeError as exc:
        print(f"error: rounding unsafe: {exc}", file=sys.stderr)
        return 2
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report.format_line(), file=sys.stderr)
    try:
        Path(args.out).write_text(dump_set_function(h) + "\n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_selftest(args) -> int:
    return 0 if selftest.run_all() else 1


def bench_instances(n: int, trial: int, seed: int) -> tuple[int, SetFunction, SetFunction]:
    """Seeded float instance pair for one (n, trial); identical across engines."""
    base = derive_seed(seed, n, trial)
    f = random_instance(n, derive_seed(base, 0), 1.0, "float")
    g = random_instance(n, derive_seed(base, 1), 1.0, "float")
    return base, f, g


def run_bench(n_min: int, n_max: int, algos: list[str], trials: int, seed: int) -> list[dict]:
    for algo in algos:
        if algo not in ENGINES:
            raise ValueError(f"unknown engine {algo!r}; choose from {sorted(ENGINES)}")
    if n_max > config.max_n():
        raise ValueError(f"n_max={n_max} exceeds the limit {config.max_n()}")
    if "naive" in algos and n_max > NAIVE_BENCH_MAX_N:
        log.warning("naive engine capped at n <= %d", NAIVE_BENCH_MAX_N)
    rows = []
    for n in range(n_min, n_max + 1):
        for trial in range(trials):
            base, f, g = bench_instances(n, trial, seed)
            for algo in algos:
                if algo == "naive" and n > NAIVE_BENCH_MAX_N:
                    continue
                _, report = run(algo, f, g)
                log.info(report.format_line())
                rows.append(
                    {"algo": algo, "n": n, "trial": trial, "seed": base, "wall_time_ns": report.wall_time_ns}
                )
    rows.sort(key=lambda r: (r["algo"], r["n"], r["trial"]))
    return rows


def write_csv(path, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns))
        writer.writeheader()
        writer.writerows(rows)


def cmd_bench(args) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    try:
        rows = run_bench(args.n_min, args.n_max, algos, args.trials, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        write_csv(args.csv, BENCH_COLUMNS, rows)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_precision(args) -> int:
    try:
        config.check_n(args.n)
        rows = precision.run_precision(args.n, args.mag, args.trials, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        write_csv(args.csv, precision.CSV_COLUMNS, rows)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subsetconv", description="Subset convolution engines.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log per-run reports")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convolve", help="convolve two set-function files")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--algo", choices=sorted(ENGINES), default="fft")
    p.add_argument("--exact", action="store_true", help="round the fft result to integers")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("selftest", help="run the fixed-seed property suites")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("bench", help="time engines on seeded random instances")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--algos", default="naive,zeta,fft")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("precision", help="measure floating-point error of zeta and fft")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mag", type=float, required=True, help="magnitude exponent")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_precision)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
