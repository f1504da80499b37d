#!/usr/bin/env python3
"""Write the data behind every figure into a results directory.

    python3 scripts/reproduce_figures.py --out results --jobs 1
"""
import argparse
import sys
import time
from pathlib import Path

from ltaqfi.cli import main as cli

FIGURES = ("1", "2", "3a", "3b", "4")


def run(out: Path, which, jobs: int) -> int:
    out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for fig in which:
        t0 = time.perf_counter()
        rc = cli(["figure", fig, "--out", str(out / f"figure{fig}.csv"), "--jobs", str(jobs)])
        print(f"figure {fig}: exit {rc} in {time.perf_counter() - t0:.1f}s", flush=True)
        worst = max(worst, rc)
    return worst


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=Path("results"))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--only", nargs="+", choices=FIGURES, default=list(FIGURES))
    args = p.parse_args()
    sys.exit(run(args.out, args.only, args.jobs))
