"""Command-line entry point: ``python -m besicovitch <command> ...``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arrangement import build_pv_arrangement, sample_all_but_simple_counts
from .data import load_table, load_tags, rows_to_csv
from .errors import DataIntegrityError
from .expectation import MODELS, expectation_report, expected_random, is_compatible
from .field import primes_in_range
from .pipeline import (
    PRIME_LIMIT,
    SCATTER_KEY,
    compute_complexities,
    reproduce,
    verify_against,
)
from .stats import histogram, mann_whitney_scatter, ols_slope_test, residual_series, shapiro_wilk
from .symmetry import classify_prime, orbit_partition, verify_propositions

COMMANDS = ("complexity", "classify", "orbits", "expect", "montecarlo", "stats", "reproduce", "table")
D2_REFUSAL = (
    "d=2 refused: the reference table lists C_2=1, but the d=2 arrangement "
    "(y=0, x=1, y=x) has 4 points of multiplicity != 1"
)


@dataclass
class RunConfig:
    command: str
    lo: int
    hi: int
    model: str
    seed: int
    samples: int
    fmt: str
    out: Path | None
    fixture: Path | None
    recompute: bool
    workers: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty range {self.lo}:{self.hi}")
        if self.samples < 1:
            raise ValueError("--samples must be >= 1")


def parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        return int(lo), int(lo)
    return int(lo), int(hi)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="besicovitch", description=__doc__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--range", default=None, help="prime range LO:HI (inclusive)")
    parser.add_argument("--model", choices=MODELS, default="random")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=100_000)
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--fixture", type=Path, default=None)
    parser.add_argument("--recompute", action="store_true")
    parser.add_argument("--out", type=Path, default=None)
    parser.add_argument("--workers", type=int, default=1)
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_complexity(cfg: RunConfig) -> int:
    primes = primes_in_range(cfg.lo, cfg.hi)
    if 2 in primes:
        print(D2_REFUSAL, file=sys.stderr)
        primes.remove(2)
        if not primes:
            return 2
    rows = compute_complexities(primes, cfg.workers)
    if cfg.fmt == "json":
        text = _json([{"d": d, "C_d": c, "histogram": h} for d, c, h in rows])
    else:
        text = rows_to_csv(["d", "C_d", "mult_histogram_json"], rows)
    _emit(text, cfg.out)
    if cfg.recompute or cfg.fixture is not None:
        table = load_table(cfg.fixture)
        bad = verify_against(table, rows)
        checked = sum(1 for d, _, _ in rows if d in table)
        print(f"checked {checked} primes against the table: {len(bad)} mismatches", file=sys.stderr)
        for d, ref, got in bad:
            print(f"  d={d}: table {ref}, computed {got}", file=sys.stderr)
        return 1 if bad else 0
    return 0


def cmd_classify(cfg: RunConfig) -> int:
    classes = [classify_prime(d) for d in primes_in_range(cfg.lo, cfg.hi)]
    if cfg.fmt == "json":
        text = _json(
            [
                {"d": c.d, "tag": c.tag, "offending_orbits": [list(o) for o in c.offending_orbits]}
                for c in classes
            ]
        )
    else:
        text = rows_to_csv(["d", "tag", "justification"], [(c.d, c.tag, c.justification) for c in classes])
    _emit(text, cfg.out)
    return 0


def cmd_orbits(cfg: RunConfig) -> int:
    out = []
    for d in primes_in_range(max(cfg.lo, 5), cfg.hi):
        arr = build_pv_arrangement(d)
        part = orbit_partition(arr)
        props = verify_propositions(arr)
        verdicts = {o.labels: o for o in props.orbits}
        orbits = []
        for o in part.orbits:
            entry = {
                "members": list(o.labels),
                "cardinality": o.cardinality,
                "through_origin": o.through_origin,
            }
            if o.labels in verdicts:
                v = verdicts[o.labels]
                entry["propositions"] = {"P1": v.p1, "P2": v.p2, "P3": v.p3}
            orbits.append(entry)
        out.append({"d": d, "orbits": orbits, "lemma1": props.lemma1})
    _emit(_json(out), cfg.out)
    return 0


def cmd_expect(cfg: RunConfig) -> int:
    reps = [
        expectation_report(d, cfg.model)
        for d in primes_in_range(cfg.lo, cfg.hi)
        if is_compatible(d, cfg.model)
    ]
    if cfg.fmt == "json":
        text = _json([r.to_dict() for r in reps])
    else:
        text = rows_to_csv(
            ["d", "model", "value", "asymptotic_main", "residual"],
            [(r.d, r.model, r.value, r.asymptotic_main, r.residual) for r in reps],
        )
    _emit(text, cfg.out)
    return 0


def montecarlo_row(d: int, samples: int, seed: int) -> dict:
    counts = sample_all_but_simple_counts(d, samples, seed)
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.nan
    a_d = expected_random(d)
    z = (mean - a_d) / stderr if stderr and math.isfinite(stderr) else math.nan
    return {"d": d, "samples": samples, "seed": seed, "mean": mean, "stderr": stderr, "A_d": a_d, "z_gap": z}


def cmd_montecarlo(cfg: RunConfig) -> int:
    rows = [montecarlo_row(d, cfg.samples, cfg.seed) for d in primes_in_range(cfg.lo, cfg.hi)]
    if cfg.fmt == "json":
        text = _json(rows)
    else:
        keys = ["d", "samples", "seed", "mean", "stderr", "A_d", "z_gap"]
        text = rows_to_csv(keys, [[r[k] for k in keys] for r in rows])
    _emit(text, cfg.out)
    return 0


def _complexities(cfg: RunConfig) -> dict[int, int]:
    table = load_table(cfg.fixture)
    if not cfg.recompute:
        return table
    rows = compute_complexities(primes_in_range(3, min(cfg.hi, PRIME_LIMIT)), cfg.workers)
    bad = verify_against(table, rows)
    if bad:
        raise DataIntegrityError(*bad[0])
    merged = dict(table)
    merged.update({d: c for d, c, _ in rows})
    return merged


def cmd_stats(cfg: RunConfig) -> int:
    series = residual_series(cfg.model, _complexities(cfg), min(cfg.hi, PRIME_LIMIT))
    lam = series.mean
    if cfg.fmt == "csv":
        text = rows_to_csv(["bin_start", "count"], histogram(series.residuals, 0.25, 0.0))
    else:
        text = _json(
            {
                "model": cfg.model,
                "n": len(series),
                "lambda": lam,
                "ols": ols_slope_test(series).to_dict(),
                "shapiro_wilk": shapiro_wilk(series.residuals).to_dict(),
                "mann_whitney_values": mann_whitney_scatter(series, lam, SCATTER_KEY).to_dict(),
                "mann_whitney_abs_value": mann_whitney_scatter(series, lam, "abs_value").to_dict(),
                "mann_whitney_primes": mann_whitney_scatter(series, lam, "prime_index").to_dict(),
            }
        )
    _emit(text, cfg.out)
    return 0


def cmd_reproduce(cfg: RunConfig) -> int:
    out_dir = cfg.out or Path("reproduction")
    report = reproduce(cfg.fixture, cfg.recompute, out_dir, cfg.workers)
    print(f"star primes: {report['n_star']}, double-star primes: {report['n_double_star']}")
    for c in report["checks"]:
        status = "PASS" if c["pass"] else "FAIL"
        print(f"{status}  {c['name']:<9} got {c['got']:.6g}  expected {c['expected']:g} +/- {c['tol']:g}")
    print(f"outputs written to {out_dir}")
    return 0 if report["all_pass"] else 1


def cmd_table(cfg: RunConfig) -> int:
    table = load_table(cfg.fixture)
    tags = load_tags()
    rows = [(d, c, tags.get(d, "")) for d, c in sorted(table.items()) if cfg.lo <= d <= cfg.hi]
    if cfg.fmt == "json":
        text = _json([{"d": d, "C_d": c, "tag": t} for d, c, t in rows])
    else:
        text = rows_to_csv(["d", "C_d", "tag"], rows)
    _emit(text, cfg.out)
    return 0


_DISPATCH = {
    "complexity": cmd_complexity,
    "classify": cmd_classify,
    "orbits": cmd_orbits,
    "expect": cmd_expect,
    "montecarlo": cmd_montecarlo,
    "stats": cmd_stats,
    "reproduce": cmd_reproduce,
    "table": cmd_table,
}

_DEFAULT_FORMAT = {"orbits": "json", "stats": "json"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    lo, hi = parse_range(args.range) if args.range else (2, PRIME_LIMIT)
    try:
        cfg = RunConfig(
            command=args.command,
            lo=lo,
            hi=hi,
            model=args.model,
            seed=args.seed,
            samples=args.samples,
            fmt=args.format or _DEFAULT_FORMAT.get(args.command, "csv"),
            out=args.out,
            fixture=args.fixture,
            recompute=args.recompute,
            workers=args.workers,
        )
        return _DISPATCH[cfg.command](cfg)
    except DataIntegrityError as exc:
        print(f"data integrity failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
