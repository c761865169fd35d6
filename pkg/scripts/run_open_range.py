"""Vertex stabilizer and normality for the open range n = 9, 10.

    python scripts/run_open_range.py --n 9
    python scripts/run_open_range.py --n 9 10 --workers 4 --out open_range.json

Each row records |Aut_e|, |Aut|, the arc orbits on N(e), the normality
verdict, wall time and peak RSS. n=10 needs roughly 1 GiB and a few minutes.
"""

from __future__ import annotations

import argparse
import json
import os
import resource
import time
from dataclasses import asdict, dataclass, field

from cayleyaut.autgrp import arc_transitivity_check, normality_check, stabilizer_search
from cayleyaut.cayley import build_graph
from cayleyaut.perm import phi_involution


@dataclass
class OpenRangeConfig:
    ns: list[int] = field(default_factory=lambda: [9])
    workers: int = 1
    memory_gib: float = 8.0
    out: str | None = None


def run_one(n: int, cfg: OpenRangeConfig) -> dict:
    t0 = time.perf_counter()
    graph = build_graph(n, memory_budget=int(cfg.memory_gib * 2**30), big=n > 10)
    stab = stabilizer_search(graph, workers=cfg.workers)
    verdict = normality_check(n, graph, stab)
    return {
        "n": n,
        "stabilizer_size": stab.size,
        "aut_order": stab.aut_order,
        "elements": [el.describe() for el in stab.elements],
        "contains_inn_phi": any(el.witness == phi_involution(n) for el in stab.elements),
        "arc_orbits": arc_transitivity_check(n, stab)["orbits"],
        "normal": verdict["normal"],
        "search_nodes": stab.search_stats["nodes"],
        "seconds": round(time.perf_counter() - t0, 1),
        "peak_rss_mib": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss // 1024,
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[9])
    ap.add_argument("--workers", type=int, default=len(os.sched_getaffinity(0)))
    ap.add_argument("--memory-gib", type=float, default=8.0)
    ap.add_argument("--out")
    args = ap.parse_args()
    cfg = OpenRangeConfig(args.n, args.workers, args.memory_gib, args.out)

    rows = []
    for n in cfg.ns:
        row = run_one(n, cfg)
        print(f"n={n}: |Aut_e|={row['stabilizer_size']} |Aut|={row['aut_order']} "
              f"normal={row['normal']} {row['seconds']} s, {row['peak_rss_mib']} MiB", flush=True)
        rows.append(row)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
