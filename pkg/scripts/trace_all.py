"""Write CSV contraction traces for O1, O2 and O3 into a directory."""
import argparse
from pathlib import Path

from quatcat.cli import path_trace
from quatcat.cover import CoverClass


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir", type=Path)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--steps", type=int, default=64)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    for which in CoverClass:
        target = args.outdir / f"trace_n{args.n}_{which.value}.csv"
        target.write_text(path_trace(args.n, which, args.steps, args.seed))
        rows = target.read_text().splitlines()[1:]
        left = sum(r.endswith(",0") for r in rows)
        print(f"{target}: {len(rows)} rows, {left} outside Q_n")


if __name__ == "__main__":
    main()
