"""Batch verification front end.

Every subcommand emits a report ``{version, config, claims}``; each claim
carries ``id, paper_ref, status, data, millis``. Status is one of pass,
fail, finding or not-applicable, and the exit code is 0 iff nothing failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from . import __version__
from .autgrp import (
    SearchRefused,
    StabilizerResult,
    arc_transitivity_check,
    aut_G_S_bruteforce,
    aut_G_S_fast,
    bruteforce_aut,
    build_normalizer_group,
    normality_check,
    s_preserving_automorphisms,
    stabilizer_search,
    structure_probe,
    verify_normalizer,
)
from .cayley import (
    DEFAULT_MEMORY_BUDGET,
    BudgetExceeded,
    CayleyGraph,
    GraphError,
    build_graph,
    dump_edges,
    explicit_bytes,
    verify_local_structure,
)
from .cycles import CASES, SearchStats, anchors_for_case, enumerate_cycles
from .genset import GenSet, GenSetError, check_relations, parse_genset
from .perm import (
    Permutation,
    PermutationError,
    conjugate,
    format_cycles,
    identity,
    inverse,
    n_cycle,
    parse_permutation,
    phi_involution,
    power,
    transposition,
)

PASS, FAIL, FINDING, NA = "pass", "fail", "finding", "not-applicable"

# Expected 12-cycle counts through the three anchor triples once n >= 13.
LARGE_N_CENSUS = {"A": 1, "B+": 2, "B-": 2}
LARGE_N = 13

REFS = {
    "conjugates": "c^-1 (1 2) c = (2 3), c^-2 (1 2) c^2 = (3 4), c (1 2) c^-1 = (n 1)",
    "relations": "identity relations whose walks are the 12-cycles through e",
    "census:A": "exactly one 12-cycle through e, c, c^-1 for n >= 13",
    "census:B+": "exactly two 12-cycles through e, (1 2), c for n >= 13",
    "census:B-": "exactly two 12-cycles through e, (1 2), c^-1 for n >= 13",
    "census:custom": "L-cycle count through a chosen anchor set",
    "local-structure": "radius-2 neighbourhood of e, with N(c) = {e, (1 2)c, c^2}",
    "aut-gs:fast": "Aut(S_n, S) = <Inn(phi)> solved directly",
    "aut-gs:bruteforce": "Aut(S_n, S) = <Inn(phi)> by scanning S_n",
    "aut-gs:exceptional": "only two automorphisms of S_6 preserve S, both inner",
    "stabilizer": "Aut(G)_e computed by propagation from N(e)",
    "order": "|Aut(G)| = n! |Aut(G)_e|",
    "bruteforce": "independent full automorphism search",
    "normality": "Aut(G)_e = Aut(S_n, S) via multiplicativity on S x S",
    "arc-transitivity": "Aut(G)_e fixes (1 2), so G is not arc-transitive",
    "normalizer": "R(S_n) x| Aut(S_n, S) acts by automorphisms",
    "structure": "evidence about R(S_n) x| <Inn(phi)>: left phi, commutation, centre",
    "verdict": "Aut(G) = R(S_n) x| <Inn(phi)>",
}


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    n_range: tuple[int, int] | None = None
    genset: str = "standard"
    length: int = 12
    anchors: str | None = None
    memory: int = DEFAULT_MEMORY_BUDGET
    workers: int = 1
    fmt: str = "json"
    out: str | None = None
    big: bool = False
    mode: str = "full"
    claims: tuple[str, ...] = ()
    timing: bool = False

    def echo(self) -> dict:
        # workers and timing are omitted so reports match across worker counts
        d = asdict(self)
        d.pop("workers")
        d.pop("timing")
        d.pop("out")
        d["n_range"] = list(self.n_range) if self.n_range else None
        d["claims"] = list(self.claims)
        return d


@dataclass
class Claim:
    id: str
    status: str
    data: dict = field(default_factory=dict)
    millis: int | None = None
    paper_ref: str = ""

    def as_dict(self, timing: bool) -> dict:
        return {
            "id": self.id,
            "paper_ref": self.paper_ref or REFS.get(self.id.split("@")[0], ""),
            "status": self.status,
            "data": self.data,
            "millis": self.millis if timing else None,
        }


def _timed(cid: str, fn: Callable[[], tuple[str, dict]]) -> Claim:
    t0 = time.perf_counter()
    try:
        status, data = fn()
    except (SearchRefused, GraphError) as exc:
        status, data = NA, {"reason": str(exc)}
    return Claim(cid, status, data, round((time.perf_counter() - t0) * 1000))


def _strip_millis(stats: dict) -> dict:
    return {k: v for k, v in stats.items() if k != "millis"}


# --- individual claims ---------------------------------------------------------------

def claim_conjugates(n: int) -> Claim:
    def run():
        if n < 4:
            return NA, {"reason": "needs n >= 4"}
        c, t = n_cycle(n), transposition(n, 1, 2)
        got = {
            "c^-1 t c": format_cycles(conjugate(t, c)),
            "c^-2 t c^2": format_cycles(conjugate(t, power(c, 2))),
            "c t c^-1": format_cycles(conjugate(t, inverse(c))),
        }
        want = {"c^-1 t c": "(2 3)", "c^-2 t c^2": "(3 4)", "c t c^-1": f"(1 {n})"}
        return (PASS if got == want else FAIL), {"computed": got, "expected": want}

    return _timed("conjugates", run)


def claim_relations(n_lo: int, n_hi: int) -> list[Claim]:
    t0 = time.perf_counter()
    per: dict[str, dict[str, list[int]]] = {}
    for n in range(n_lo, n_hi + 1):
        for name, ok in check_relations(n).items():
            bucket = per.setdefault(name, {"held": [], "failed": [], "not_applicable": []})
            key = "not_applicable" if ok is None else ("held" if ok else "failed")
            bucket[key].append(n)
    millis = round((time.perf_counter() - t0) * 1000)
    claims = []
    for name, bucket in sorted(per.items()):
        if bucket["failed"]:
            status = FAIL
        elif bucket["held"]:
            status = PASS
        else:
            status = NA
        claims.append(Claim(f"relations:{name}", status, bucket, millis, REFS["relations"]))
    return claims


def claim_census(n: int, S: GenSet, L: int, case: str, workers: int) -> Claim:
    def run():
        stats = SearchStats()
        certs = enumerate_cycles(n, S, L, anchors_for_case(case, S), workers=workers, stats=stats)
        data = {
            "count": len(certs),
            "length": L,
            "certificates": [c.format() for c in certs],
            "dfs_nodes": stats.nodes,
        }
        if L == 12 and n >= LARGE_N and S.kind in ("standard", "variant"):
            data["expected"] = LARGE_N_CENSUS[case]
            return (PASS if len(certs) == LARGE_N_CENSUS[case] else FAIL), data
        return FINDING, data

    return _timed(f"census:{case}", run)


def claim_custom_census(n: int, S: GenSet, L: int, anchors: list[Permutation], workers: int) -> Claim:
    def run():
        stats = SearchStats()
        certs = enumerate_cycles(n, S, L, anchors, workers=workers, stats=stats)
        return FINDING, {
            "anchors": [format_cycles(a) for a in anchors],
            "count": len(certs),
            "length": L,
            "certificates": [c.format() for c in certs],
            "dfs_nodes": stats.nodes,
        }

    return _timed("census:custom", run)


def claim_local(n: int) -> Claim:
    def run():
        rep = verify_local_structure(n)
        if not rep["applicable"]:
            return NA, {"reason": "needs n >= 5"}
        return (PASS if rep["ok"] else FAIL), rep

    return _timed("local-structure", run)


def claim_aut_gs(n: int, S: GenSet) -> list[Claim]:
    out = []
    fast: list[Permutation] = []

    def run_fast():
        nonlocal fast
        fast = aut_G_S_fast(n, S)
        data = {"elements": [format_cycles(g) for g in fast], "size": len(fast)}
        ok = len(fast) == 2
        if S.kind == "standard":
            ok &= set(fast) == {identity(n), phi_involution(n)}
        return (PASS if ok else FAIL), data

    out.append(_timed("aut-gs:fast", run_fast))

    def run_brute():
        brute = aut_G_S_bruteforce(n, S)
        data = {"elements": [format_cycles(g) for g in brute], "agrees_with_fast": set(brute) == set(fast)}
        return (PASS if data["agrees_with_fast"] and len(brute) == 2 else FAIL), data

    out.append(_timed("aut-gs:bruteforce", run_brute))
    if n == 6 and S.kind == "standard":

        def run_exc():
            tables = s_preserving_automorphisms(6)
            return (PASS if len(tables) == 2 else FAIL), {"s_preserving_automorphisms": len(tables)}

        out.append(_timed("aut-gs:exceptional", run_exc))
    return out


def _explicit_graph(n: int, S: GenSet, cfg: RunConfig) -> CayleyGraph | None:
    g = build_graph(n, S, cfg.memory, "auto", cfg.big)
    return g if g.mode == "explicit" else None


def _not_computable(n: int, S: GenSet, cfg: RunConfig) -> dict:
    return {
        "reason": "explicit graph outside budget or ceiling",
        "required_bytes": explicit_bytes(n, len(S)),
        "budget_bytes": cfg.memory,
        "big": cfg.big,
    }


def _expected_stabilizer(n: int, S: GenSet) -> int | None:
    # sizes established for the standard set at n <= 8; larger n are findings
    return 2 if S.kind == "standard" and n <= 8 else None


def claims_stabilizer(
    n: int, S: GenSet, cfg: RunConfig, with_normality: bool
) -> tuple[list[Claim], CayleyGraph | None, StabilizerResult | None]:
    t0 = time.perf_counter()
    graph = _explicit_graph(n, S, cfg)
    if graph is None:
        return [Claim("stabilizer", NA, _not_computable(n, S, cfg))], None, None
    try:
        stab = stabilizer_search(graph, cfg.workers)
    except SearchRefused as exc:
        return [Claim("stabilizer", NA, {"reason": str(exc)})], graph, None
    millis = round((time.perf_counter() - t0) * 1000)
    expected = _expected_stabilizer(n, S)
    phi_map = S.kind == "standard" and any(
        el.witness == phi_involution(n) for el in stab.elements
    )
    data = {
        "size": stab.size,
        "elements": [el.describe() for el in stab.elements],
        "aut_order": stab.aut_order,
        "vertices": graph.vertex_count,
        "contains_inn_phi": phi_map,
        "search_stats": _strip_millis(stab.search_stats),
    }
    if expected is None:
        status = FINDING
    else:
        data["expected"] = expected
        status = PASS if stab.size == expected and phi_map else FAIL
    claims = [Claim("stabilizer", status, data, millis)]
    claims.append(Claim("order", status if expected else FINDING,
                        {"aut_order": stab.aut_order, "formula": f"{n}! * {stab.size}"}, 0))
    if with_normality:
        t1 = time.perf_counter()
        verdict = normality_check(n, graph, stab)
        nstatus = FINDING if expected is None else (PASS if verdict["normal"] and verdict["sizes_agree"] else FAIL)
        if expected is None and verdict["sizes_agree"] is False:
            nstatus = FAIL
        claims.append(Claim("normality", nstatus, verdict, round((time.perf_counter() - t1) * 1000)))
        arc = arc_transitivity_check(n, stab, S)
        astatus = PASS if not arc["transitive_on_neighbourhood"] else (FAIL if expected else FINDING)
        claims.append(Claim("arc-transitivity", astatus, arc, 0))
    return claims, graph, stab


def claim_normalizer(n: int, S: GenSet, graph: CayleyGraph | None) -> Claim:
    def run():
        group = build_normalizer_group(n, S)
        rep = verify_normalizer(group, graph)
        rep["order"] = group.order
        rep["witnesses"] = [format_cycles(g) for g in group.witnesses]
        return (PASS if rep["ok"] else FAIL), rep

    return _timed("normalizer", run)


def claim_bruteforce(n: int, graph: CayleyGraph | None, stab_size: int | None) -> Claim:
    def run():
        if graph is None:
            return NA, {"reason": "explicit graph required"}
        res = bruteforce_aut(graph)
        data = {
            "order": res.order,
            "stabilizer_size": res.stabilizer_size,
            "orbit_of_e": res.orbit_size,
            "search_nodes": res.nodes,
        }
        if stab_size is not None:
            data["matches_stabilizer_formula"] = res.order == math.factorial(n) * stab_size
            return (PASS if data["matches_stabilizer_formula"] else FAIL), data
        return FINDING, data

    return _timed("bruteforce", run)


def claim_structure(n: int) -> Claim:
    def run():
        rep = structure_probe(n)
        ok = rep["left_phi_is_automorphism"] and rep["left_phi_commutes"]
        return (FINDING if ok else FAIL), rep

    return _timed("structure", run)


# --- subcommands ----------------------------------------------------------------------

def cmd_relations(cfg: RunConfig) -> list[Claim]:
    lo, hi = cfg.n_range if cfg.n_range else (cfg.n, cfg.n)
    return claim_relations(lo, hi)


def _ns(cfg: RunConfig) -> list[int]:
    if cfg.n_range:
        return list(range(cfg.n_range[0], cfg.n_range[1] + 1))
    return [cfg.n]


def _tag(claims: list[Claim], n: int, multi: bool) -> list[Claim]:
    if multi:
        for c in claims:
            c.paper_ref = c.paper_ref or REFS.get(c.id, "")
            c.id = f"{c.id}@{n}"
    return claims


def cmd_census(cfg: RunConfig) -> list[Claim]:
    ns = _ns(cfg)
    out = []
    for n in ns:
        S = parse_genset(cfg.genset, n)
        if cfg.anchors:
            anchors = [parse_permutation(a, n) for a in cfg.anchors.split(";") if a.strip()]
            if identity(n) not in anchors:
                anchors.insert(0, identity(n))
            claims = [claim_custom_census(n, S, cfg.length, anchors, cfg.workers)]
        elif S.kind == "custom":
            raise GenSetError("custom sets need --anchors for a census")
        else:
            claims = [claim_census(n, S, cfg.length, case, cfg.workers) for case in CASES]
        out += _tag(claims, n, len(ns) > 1)
    return out


def cmd_aut(cfg: RunConfig) -> list[Claim]:
    n = cfg.n
    S = parse_genset(cfg.genset, n)
    claims, graph, stab = claims_stabilizer(n, S, cfg, with_normality=False)
    if cfg.mode == "full":
        claims.append(claim_normalizer(n, S, graph))
    elif cfg.mode == "bruteforce-oracle":
        claims.append(claim_bruteforce(n, graph, stab.size if stab else None))
    return claims


def cmd_aut_gs(cfg: RunConfig) -> list[Claim]:
    ns = _ns(cfg)
    out = []
    for n in ns:
        out += _tag(claim_aut_gs(n, parse_genset(cfg.genset, n)), n, len(ns) > 1)
    return out


def cmd_normality(cfg: RunConfig) -> list[Claim]:
    n = cfg.n
    return claims_stabilizer(n, parse_genset(cfg.genset, n), cfg, with_normality=True)[0]


def cmd_verify_theorem(cfg: RunConfig) -> list[Claim]:
    n = cfg.n
    S = parse_genset(cfg.genset, n)
    if S.kind == "custom":
        raise GenSetError("verify-theorem needs the standard or a variant set")
    wanted = cfg.claims

    def want(cid: str) -> bool:
        return not wanted or any(cid.startswith(w) for w in wanted)

    claims: list[Claim] = []
    if want("conjugates"):
        claims.append(claim_conjugates(n))
    if want("relations"):
        claims += claim_relations(n, n)
    for case in CASES:
        if want(f"census:{case}"):
            claims.append(claim_census(n, S, 12, case, cfg.workers))
    if want("local-structure") and S.kind == "standard":
        claims.append(claim_local(n))
    if want("aut-gs"):
        claims += [c for c in claim_aut_gs(n, S) if want(c.id)]
    graph = None
    if any(want(x) for x in ("stabilizer", "order", "normality", "arc-transitivity", "normalizer", "verdict")):
        stab_claims, graph, _ = claims_stabilizer(n, S, cfg, with_normality=True)
        claims += [c for c in stab_claims if want(c.id)]
        if want("normalizer"):
            claims.append(claim_normalizer(n, S, graph))
        if want("verdict"):
            claims.append(_verdict(n, claims, stab_claims))
    return claims


def _verdict(n: int, claims: list[Claim], stab_claims: list[Claim]) -> Claim:
    failed = [c.id for c in claims if c.status == FAIL]
    by_id = {c.id: c for c in stab_claims}
    if failed:
        return Claim("verdict", FAIL, {"verdict": "refuted or inconsistent", "failed": failed}, 0)
    norm = by_id.get("normality")
    if norm is None:
        return Claim("verdict", PASS, {"verdict": "consistent with R(S_n) x| <Inn(phi)>",
                                       "stabilizer": "not computable at budget"}, 0)
    verdict = "normal" if norm.data["normal"] else "not normal"
    return Claim("verdict", norm.status, {
        "verdict": verdict,
        "aut_order": norm.data["aut_order"],
        "stabilizer_size": norm.data["stabilizer_size"],
    }, 0)


def cmd_structure(cfg: RunConfig) -> list[Claim]:
    return [claim_structure(cfg.n)]


COMMANDS: dict[str, Callable[[RunConfig], list[Claim]]] = {
    "relations": cmd_relations,
    "census": cmd_census,
    "aut": cmd_aut,
    "aut-gs": cmd_aut_gs,
    "normality": cmd_normality,
    "verify-theorem": cmd_verify_theorem,
    "structure": cmd_structure,
}


# --- report assembly -------------------------------------------------------------------

def build_report(cfg: RunConfig, claims: list[Claim]) -> dict:
    return {
        "version": __version__,
        "config": cfg.echo(),
        "claims": [c.as_dict(cfg.timing) for c in claims],
    }


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_text(report: dict) -> str:
    lines = [f"cayleyaut {report['version']}  {report['config']['command']}"]
    for c in report["claims"]:
        lines.append(f"[{c['status']}] {c['id']}: {c['paper_ref']}")
        for key in sorted(c["data"]):
            val = c["data"][key]
            if key == "certificates":
                for i, cert in enumerate(val, 1):
                    lines.append(f"    cycle {i}:")
                    lines += [f"      {j:2d}. {v}" for j, v in enumerate(cert, 1)]
                continue
            lines.append(f"    {key}: {json.dumps(val, sort_keys=True)}")
        if c["millis"] is not None:
            lines.append(f"    millis: {c['millis']}")
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig) -> tuple[str, int]:
    claims = COMMANDS[cfg.command](cfg)
    report = build_report(cfg, claims)
    text = render_json(report) if cfg.fmt == "json" else render_text(report)
    code = 1 if any(c.status == FAIL for c in claims) else 0
    return text, code


# --- argument parsing -------------------------------------------------------------------

def _n_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from exc
    if lo < 3 or hi < lo:
        raise argparse.ArgumentTypeError(f"need 3 <= A <= B, got {text!r}")
    return lo, hi


def _default_workers() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--n-range", type=_n_range)
    common.add_argument("--set", dest="genset", default="standard")
    common.add_argument("--workers", type=int, default=_default_workers())
    common.add_argument("--memory", type=int, default=DEFAULT_MEMORY_BUDGET, help="bytes")
    common.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")
    common.add_argument("--out")
    common.add_argument("--big", action="store_true", help="allow explicit graphs above n=10")
    common.add_argument("--timing", action="store_true", help="record wall times (breaks byte-identity)")

    p = argparse.ArgumentParser(prog="cayleyaut", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("relations", parents=[common])
    c = sub.add_parser("census", parents=[common])
    c.add_argument("--length", type=int, default=12)
    c.add_argument("--anchors", help='";"-separated permutations, e.g. "(1 2);(1 2 3 4 5)"')
    a = sub.add_parser("aut", parents=[common])
    a.add_argument("--mode", choices=("stabilizer-only", "full", "bruteforce-oracle"), default="full")
    sub.add_parser("aut-gs", parents=[common])
    sub.add_parser("normality", parents=[common])
    v = sub.add_parser("verify-theorem", parents=[common])
    v.add_argument("--claim", action="append", default=[], help="restrict to claim ids with this prefix")
    sub.add_parser("structure", parents=[common])
    sub.add_parser("dump-graph", parents=[common])
    return p


def parse_config(argv: list[str] | None = None) -> RunConfig:
    parser = make_parser()
    ns = parser.parse_args(argv)
    if ns.n is None and ns.n_range is None:
        parser.error("one of --n or --n-range is required")
    if ns.n is not None and ns.n < 3:
        parser.error("--n must be >= 3")
    if ns.workers < 1:
        parser.error("--workers must be >= 1")
    single = {"aut", "normality", "verify-theorem", "structure", "dump-graph"}
    if ns.command in single and ns.n is None:
        parser.error(f"{ns.command} needs --n")
    return RunConfig(
        command=ns.command,
        n=ns.n,
        n_range=ns.n_range,
        genset=ns.genset,
        length=getattr(ns, "length", 12),
        anchors=getattr(ns, "anchors", None),
        memory=ns.memory,
        workers=ns.workers,
        fmt=ns.fmt,
        out=ns.out,
        big=ns.big,
        mode=getattr(ns, "mode", "full"),
        claims=tuple(getattr(ns, "claim", ())),
        timing=ns.timing,
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    cfg = parse_config(argv)
    try:
        if cfg.command == "dump-graph":
            S = parse_genset(cfg.genset, cfg.n)
            graph = build_graph(cfg.n, S, cfg.memory, "explicit", cfg.big)
            _emit(dump_edges(graph), cfg.out)
            return 0
        text, code = run(cfg)
    except (GenSetError, PermutationError, BudgetExceeded, GraphError) as exc:
        print(f"cayleyaut: error: {exc}", file=sys.stderr)
        return 2
    _emit(text, cfg.out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
