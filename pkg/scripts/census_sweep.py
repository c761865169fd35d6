"""Sweep the 12-cycle census over a range of n and connection sets.

    python scripts/census_sweep.py --n-range 5..24
    python scripts/census_sweep.py --n-range 13..20 --variant 3 --length 12

Prints one row per n: counts through {e,c,c^-1}, {e,t,c}, {e,t,c^-1}, and
flags rows that differ from the stable value (1, 2, 2).
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from cayleyaut.cycles import census
from cayleyaut.genset import standard_set, variant_set

STABLE = (1, 2, 2)


@dataclass
class SweepConfig:
    lo: int = 5
    hi: int = 20
    length: int = 12
    variant: int | None = None
    workers: int = 1


def sweep(cfg: SweepConfig):
    for n in range(cfg.lo, cfg.hi + 1):
        if cfg.variant is not None and cfg.variant > n - 1:
            continue
        S = standard_set(n) if cfg.variant is None else variant_set(n, cfg.variant)
        t0 = time.perf_counter()
        counts = census(n, S, cfg.length, workers=cfg.workers)
        yield n, counts, time.perf_counter() - t0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-range", default="5..20")
    ap.add_argument("--length", type=int, default=12)
    ap.add_argument("--variant", type=int, help="use transposition (i i+1) in place of (1 2)")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    lo, hi = (int(x) for x in args.n_range.split(".."))
    cfg = SweepConfig(lo, hi, args.length, args.variant, args.workers)

    print(f"{'n':>3}  {'A':>3} {'B+':>3} {'B-':>3}  secs")
    for n, counts, secs in sweep(cfg):
        mark = "" if counts == STABLE else "  *"
        print(f"{n:>3}  {counts[0]:>3} {counts[1]:>3} {counts[2]:>3}  {secs:.2f}{mark}")


if __name__ == "__main__":
    main()
