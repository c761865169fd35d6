"""Anchored simple-cycle censuses through the identity vertex.

Two independent engines:

* ``enumerate_cycles`` walks simple paths from e in the neighbour oracle and
  never touches more than the radius-L neighbourhood, so it works for any n.
* ``solve_exponent_equation`` enumerates alternating words
  ``c^{i_1} t c^{i_2} t ... c^{i_k}`` (read in walking order) whose length
  fits the budget, keeps those that close at e and whose walk is simple.

Case tags name the anchor triple: ``A`` = {e, c, c^-1}, ``B+`` = {e, t, c},
``B-`` = {e, t, c^-1}.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .cayley import rank_img
from .genset import GenSet, standard_set
from .perm import Permutation, format_cycles, identity, n_cycle, inverse, transposition

CASES = ("A", "B+", "B-")


@dataclass
class SearchStats:
    nodes: int = 0

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes


@dataclass(frozen=True)
class CycleCert:
    """A simple cycle through e, stored in canonical orientation.

    ``vertices[0]`` is the identity; of the two directions the one whose
    second vertex has the smaller rank is kept.
    """

    vertices: tuple[Permutation, ...]
    ranks: tuple[int, ...] = field(compare=False)

    @property
    def length(self) -> int:
        return len(self.vertices)

    @classmethod
    def from_walk(cls, imgs: Sequence[tuple[int, ...]]) -> "CycleCert":
        imgs = list(imgs)
        e = tuple(range(len(imgs[0])))
        start = imgs.index(e)
        fwd = imgs[start:] + imgs[:start]
        bwd = [fwd[0]] + fwd[:0:-1]
        rf = [rank_img(v) for v in fwd]
        rb = [rf[0]] + rf[:0:-1]
        if rb < rf:
            fwd, rf = bwd, rb
        return cls(tuple(Permutation(v) for v in fwd), tuple(rf))

    def contains(self, p: Permutation) -> bool:
        return p in self.vertices

    def verify(self, S: GenSet) -> bool:
        """Consecutive vertices adjacent (wrapping) and all vertices distinct."""
        vs = self.vertices
        if len(set(vs)) != len(vs) or not vs[0].is_identity():
            return False
        simgs = [s.img for s in S]
        for a, b in zip(vs, vs[1:] + vs[:1]):
            if not any(tuple(a.img[i] for i in s) == b.img for s in simgs):
                return False
        return True

    def format(self) -> list[str]:
        return [format_cycles(v) for v in self.vertices]


def anchors_for_case(case: str, S: GenSet) -> tuple[Permutation, ...]:
    n = S.degree
    c, ci, t = S.elements[:3]
    return {
        "A": (identity(n), c, ci),
        "B+": (identity(n), t, c),
        "B-": (identity(n), t, ci),
    }[case]


# --- DFS oracle ----------------------------------------------------------------

def _dfs_from_first_step(args) -> tuple[list[tuple[tuple[int, ...], ...]], int]:
    simgs, L, anchor_imgs, first = args
    n = len(simgs[0])
    e = tuple(range(n))
    start = tuple(e[i] for i in simgs[first])
    path = [e, start]
    on_path = {e, start}
    found = []
    nodes = 1

    def extend() -> None:
        nonlocal nodes
        g = path[-1]
        prev = path[-2]
        for s in simgs:
            h = tuple(g[i] for i in s)
            if h == prev:
                continue
            if len(path) == L:
                if h == e and all(a in on_path for a in anchor_imgs):
                    found.append(tuple(path))
                continue
            if h in on_path:
                continue
            nodes += 1
            path.append(h)
            on_path.add(h)
            extend()
            path.pop()
            on_path.discard(h)

    extend()
    return found, nodes


def enumerate_cycles(
    n: int,
    S: GenSet,
    L: int,
    anchors: Iterable[Permutation],
    workers: int = 1,
    stats: SearchStats | None = None,
) -> list[CycleCert]:
    """All simple L-cycles through every anchor (the identity must be one).

    Explores simple paths of length L-1 from e, partitioned by first step.
    """
    anchors = list(anchors)
    if L < 3:
        raise ValueError("cycle length must be >= 3")
    if identity(n) not in anchors:
        raise ValueError("anchors must contain the identity")
    simgs = [s.img for s in S]
    anchor_imgs = [a.img for a in anchors]
    jobs = [(simgs, L, anchor_imgs, j) for j in range(len(simgs))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_dfs_from_first_step, jobs))
    else:
        results = [_dfs_from_first_step(job) for job in jobs]
    certs = {}
    total_nodes = 0
    for walks, nodes in results:
        total_nodes += nodes
        for walk in walks:
            cert = CycleCert.from_walk(walk)
            certs[cert.ranks] = cert
    if stats is not None:
        stats.nodes += total_nodes
    return [certs[k] for k in sorted(certs)]


def census(
    n: int,
    S: GenSet | None = None,
    L: int = 12,
    workers: int = 1,
) -> tuple[int, int, int]:
    """Counts of L-cycles through {e,c,c^-1}, {e,t,c} and {e,t,c^-1}."""
    S = S if S is not None else standard_set(n)
    return tuple(
        len(enumerate_cycles(n, S, L, anchors_for_case(case, S), workers=workers))
        for case in CASES
    )


# --- exponent sequences ----------------------------------------------------------

@dataclass(frozen=True)
class ExponentSequence:
    """Exponents (i_1, ..., i_k) of an alternating word through the case anchors.

    Case A walks ``c^{i_1} t c^{i_2} t ... t c^{i_k}`` with i_1, i_k >= 1.
    Case B+/B- walks ``t c^{i_1} t c^{i_2} ... t c^{i_k}`` with i_k <= -1
    (resp. >= 1). Every exponent is non-zero.
    """

    case: str
    exponents: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.exponents)

    @property
    def transpositions(self) -> int:
        return self.k - 1 if self.case == "A" else self.k

    @property
    def length(self) -> int:
        return sum(abs(i) for i in self.exponents) + self.transpositions

    def is_valid(self) -> bool:
        ex = self.exponents
        if not ex or any(i == 0 for i in ex):
            return False
        if self.case == "A":
            return ex[0] >= 1 and ex[-1] >= 1
        if self.case == "B+":
            return ex[-1] <= -1
        return ex[-1] >= 1

    def steps(self) -> list[int]:
        """Walk as connection-set positions: 0 = c, 1 = c^-1, 2 = t."""
        out: list[int] = []
        for idx, i in enumerate(self.exponents):
            if self.case != "A" or idx > 0:
                out.append(2)
            out.extend([0 if i > 0 else 1] * abs(i))
        return out

    def word_text(self) -> str:
        parts = []
        for idx, i in enumerate(self.exponents):
            if self.case != "A" or idx > 0:
                parts.append("t")
            parts.append(f"c^{i}")
        return " ".join(parts)


def exponent_sequences(L: int, case: str) -> Iterator[ExponentSequence]:
    """Every valid sequence whose word has exactly L letters, by k then lexicographically."""
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    kmax = (L + 1) // 2 if case == "A" else L // 2
    for k in range(1, kmax + 1):
        budget = L - (k - 1 if case == "A" else k)
        if budget < k:
            continue
        for mags in _compositions(budget, k):
            for signs in _sign_choices(k):
                ex = tuple(m * s for m, s in zip(mags, signs))
                seq = ExponentSequence(case, ex)
                if seq.is_valid():
                    yield seq


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _sign_choices(k: int) -> Iterator[tuple[int, ...]]:
    for mask in range(1 << k):
        yield tuple(-1 if (mask >> (k - 1 - b)) & 1 else 1 for b in range(k))


def is_admissible(seq: ExponentSequence, n: int) -> bool:
    """Necessary conditions for the word to evaluate to the identity.

    Parity: the word must be even. Support: the word equals
    c^{sum} times a product of ``transpositions`` transpositions, whose
    support has at most twice that many points; when that is below n the
    n-point support of any non-trivial power of c forces sum = 0 mod n.
    """
    total = sum(seq.exponents)
    if ((n - 1) * total + seq.transpositions) % 2:
        return False
    if 2 * seq.transpositions < n and total % n:
        return False
    return True


def _letters(n: int, tau: tuple[int, int]) -> list[tuple[int, ...]]:
    c = n_cycle(n)
    return [c.img, inverse(c).img, transposition(n, *tau).img]


def walk(seq: ExponentSequence, n: int, tau: tuple[int, int] = (1, 2)) -> list[tuple[int, ...]]:
    """Vertices visited from e, including the final vertex."""
    letters = _letters(n, tau)
    v = tuple(range(n))
    out = [v]
    for j in seq.steps():
        s = letters[j]
        v = tuple(v[i] for i in s)
        out.append(v)
    return out


def evaluate_sequence(seq: ExponentSequence, n: int, tau: tuple[int, int] = (1, 2)) -> tuple[bool, str | None, CycleCert | None]:
    """(solution?, refutation, certificate) for one sequence."""
    vs = walk(seq, n, tau)
    end = vs[-1]
    if end != vs[0]:
        return False, f"word evaluates to {format_cycles(Permutation(end))}", None
    body = vs[:-1]
    if len(set(body)) != len(body):
        first_dup = next(i for i, v in enumerate(body) if body.index(v) != i)
        return False, f"closed walk revisits {format_cycles(Permutation(body[first_dup]))} at step {first_dup}", None
    return True, None, CycleCert.from_walk(body)


def _solve_chunk(args):
    n, L, case, tau, k = args
    out = []
    for seq in exponent_sequences(L, case):
        if seq.k != k or not is_admissible(seq, n):
            continue
        ok, _, cert = evaluate_sequence(seq, n, tau)
        if ok:
            out.append((seq, cert))
    return out


def solve_exponent_equation(
    n: int,
    L: int,
    case: str,
    tau: tuple[int, int] = (1, 2),
    workers: int = 1,
) -> list[tuple[ExponentSequence, CycleCert]]:
    """Exponent sequences whose word closes at e along a simple walk.

    Returned in order of canonical certificate ranks.
    """
    if n < 3 or L < 3:
        raise ValueError("need n >= 3 and L >= 3")
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    kmax = (L + 1) // 2 if case == "A" else L // 2
    jobs = [(n, L, case, tau, k) for k in range(1, kmax + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_solve_chunk, jobs))
    else:
        chunks = [_solve_chunk(job) for job in jobs]
    found = [item for chunk in chunks for item in chunk]
    found.sort(key=lambda item: (item[1].ranks, item[0].exponents))
    return found


def _pattern_key(seq: ExponentSequence) -> tuple:
    ex = seq.exponents
    if seq.case == "A":
        ends = tuple(sorted((ex[0], ex[-1]), reverse=True)) if seq.k > 1 else (ex[0],)
        return ends, tuple(sorted(ex[1:-1]))
    return (ex[-1],)


def classify_solution_types(
    n: int, L: int, case: str, tau: tuple[int, int] = (1, 2)
) -> dict:
    """Admissible sequences grouped into patterns, each member marked solved or refuted.

    Case A groups by the pair of end exponents plus the multiset of interior
    exponents; case B groups by the terminal exponent, listing the multisets
    of the free exponents inside each group.
    """
    by_k: dict[int, dict[tuple, list[dict]]] = defaultdict(dict)
    for seq in exponent_sequences(L, case):
        if not is_admissible(seq, n):
            continue
        ok, refutation, _ = evaluate_sequence(seq, n, tau)
        key = _pattern_key(seq)
        by_k[seq.k].setdefault(key, []).append(
            {"exponents": list(seq.exponents), "solution": ok, "refutation": refutation}
        )
    kmax = (L + 1) // 2 if case == "A" else L // 2
    report = {"n": n, "length": L, "case": case, "by_k": {}}
    for k in range(1, kmax + 1):
        groups = []
        for key in sorted(by_k.get(k, {})):
            members = by_k[k][key]
            free = sorted({tuple(sorted(m["exponents"][:-1])) for m in members}) if case != "A" else None
            group = {
                "pattern": [list(part) for part in key] if case == "A" else list(key),
                "members": members,
                "solutions": sum(1 for m in members if m["solution"]),
            }
            if free is not None:
                group["free_multisets"] = [list(f) for f in free]
            groups.append(group)
        report["by_k"][str(k)] = groups
    return report


def max_dfs_nodes(L: int) -> int:
    """Upper bound on DFS nodes for a cubic graph: 3 * 2^(L-1)."""
    return 3 * 2 ** (L - 1)
