"""Command-line entry point: ``quatcat {verify,cells,path}``.

Exit codes: 0 when every suite passes, 1 on a suite failure, 2 on a usage
error (argparse's default).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import __version__
from .cover import CoverClass, contraction, sample_class, trace_path
from .hmat import MEMBERSHIP_TOL, fro_norm, identity
from .qproj import cells, poincare_polynomial
from .suites import run_all

_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
PATH_SAMPLE_INDEX = 1


@dataclass(frozen=True)
class SuiteConfig:
    n: int = 3
    samples: int = 100
    time_steps: int = 64
    tol: float = MEMBERSHIP_TOL
    seed: int = 42
    out: Optional[str] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("--n must be >= 1")
        if self.samples < 1:
            raise ValueError("--samples must be >= 1")
        if self.time_steps < 2:
            raise ValueError("--steps must be >= 2")
        if not self.tol > 0:
            raise ValueError("--tol must be > 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("--seed must be an unsigned 64-bit integer")


def worker_count() -> int:
    raw = os.environ.get("QUATCAT_THREADS", "1")
    try:
        k = int(raw)
    except ValueError:
        return 1
    if k <= 0:
        return os.cpu_count() or 1
    return k


def build_report(config: SuiteConfig, workers: int = 1) -> dict:
    suites = run_all(config.n, config.samples, config.time_steps, config.tol, config.seed, workers)
    cfg = asdict(config)
    cfg.pop("out")
    return {
        "config": cfg,
        "suites": [s.to_dict() for s in suites],
        "verdict": "pass" if all(s.passed for s in suites) else "fail",
        "version": __version__,
    }


def render_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def format_polynomial(coeffs: list[int]) -> str:
    terms = []
    for deg, c in enumerate(coeffs):
        if c == 0:
            continue
        if deg == 0:
            terms.append(str(c))
            continue
        power = "t" if deg == 1 else "t" + str(deg).translate(_SUPERSCRIPT)
        terms.append(power if c == 1 else f"{c}{power}")
    return "+".join(terms)


def cells_listing(n: int, as_json: bool = False) -> str:
    cs = cells(n)
    poly = poincare_polynomial(n)
    if as_json:
        payload = {
            "n": n,
            "count": len(cs),
            "cells": [{"indices": list(c.indices), "dimension": c.dimension} for c in cs],
            "poincare": poly,
        }
        return json.dumps(payload, indent=2) + "\n"
    lines = [f"{c}: dim {c.dimension}" for c in cs if not c.is_zero_cell]
    lines.append(f"cells {len(cs)}; P(t)={format_polynomial(poly)}")
    return "\n".join(lines) + "\n"


def path_trace(n: int, which: CoverClass, steps: int, seed: int, tol: float = MEMBERSHIP_TOL) -> str:
    """CSV trace (t, sympl_residual, dist_to_I, in_qn) of one sampled contraction."""
    p = sample_class(n, which, seed, PATH_SAMPLE_INDEX)
    grid = np.linspace(0.0, 1.0, steps)
    mats, sympl, flags = trace_path(contraction(p, which), grid, tol)
    eye = identity(n)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "sympl_residual", "dist_to_I", "in_qn"])
    for t, M, r, ok in zip(grid, mats, sympl, flags):
        writer.writerow([repr(float(t)), repr(r), repr(fro_norm(M - eye)), int(ok)])
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quatcat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the property suites and the cover certificates")
    v.add_argument("--n", type=int, default=3)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--steps", type=int, default=64)
    v.add_argument("--tol", type=float, default=MEMBERSHIP_TOL)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--out")

    c = sub.add_parser("cells", help="list the normal cells of Sp(n)")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--json", action="store_true")
    c.add_argument("--out")

    p = sub.add_parser("path", help="CSV trace of one contraction")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--set", choices=[c.value for c in CoverClass], default="O1")
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=MEMBERSHIP_TOL)
    p.add_argument("--out")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)

    if args.command == "verify":
        try:
            config = SuiteConfig(args.n, args.samples, args.steps, args.tol, args.seed, args.out)
        except ValueError as exc:
            parser.error(str(exc))
        report = build_report(config, worker_count())
        _emit(render_report(report), config.out)
        return 0 if report["verdict"] == "pass" else 1

    if args.command == "cells":
        if args.n < 1:
            parser.error("--n must be >= 1")
        _emit(cells_listing(args.n, args.json), args.out)
        return 0

    if args.n < 1 or args.steps < 2 or not args.tol > 0:
        parser.error("need --n >= 1, --steps >= 2 and --tol > 0")
    _emit(path_trace(args.n, CoverClass(args.set), args.steps, args.seed, args.tol), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
