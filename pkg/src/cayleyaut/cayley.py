"""Cayley graphs on S_n: Lehmer-ranked vertices and a neighbour oracle.

Vertices are permutations; ``g`` and ``h`` are adjacent when ``h g^-1`` is in
the connection set, i.e. ``h = s*g``. Below the memory budget the graph is
materialised as an ``(n!, |S|)`` table of neighbour ranks where column ``j``
holds ``rank(S[j] * g)``; above it only the oracle is available.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .genset import GenSet, standard_set
from .perm import Permutation, compose, identity

DEFAULT_MEMORY_BUDGET = 8 * 2**30
EXPLICIT_CEILING = 10


class GraphError(RuntimeError):
    pass


class BudgetExceeded(GraphError):
    def __init__(self, n: int, required: int, budget: int):
        super().__init__(
            f"explicit graph for n={n} needs {required} bytes, budget is {budget} bytes"
        )
        self.required = required
        self.budget = budget


# --- ranking -----------------------------------------------------------------

def rank(p: Permutation) -> int:
    """Lehmer rank: lexicographic index of the one-line notation."""
    img = p.img
    n = len(img)
    r = 0
    for i in range(n):
        smaller = 0
        vi = img[i]
        for j in range(i + 1, n):
            if img[j] < vi:
                smaller += 1
        r = r * (n - i) + smaller
    return r


def rank_img(img: tuple[int, ...]) -> int:
    n = len(img)
    r = 0
    for i in range(n):
        vi = img[i]
        r = r * (n - i) + sum(1 for j in range(i + 1, n) if img[j] < vi)
    return r


def unrank(r: int, n: int) -> Permutation:
    total = math.factorial(n)
    if not 0 <= r < total:
        raise GraphError(f"rank {r} outside [0, {total - 1}]")
    digits = []
    for base in range(1, n + 1):
        digits.append(r % base)
        r //= base
    digits.reverse()
    pool = list(range(n))
    return Permutation(tuple(pool.pop(d) for d in digits))


def all_permutations(n: int) -> np.ndarray:
    """All permutations of 0..n-1 in rank order, shape (n!, n), dtype int8."""
    table = np.zeros((1, 0), dtype=np.int8)
    for m in range(1, n + 1):
        prev = table
        rows = prev.shape[0]
        out = np.empty((rows * m, m), dtype=np.int8)
        for first in range(m):
            block = out[first * rows:(first + 1) * rows]
            block[:, 0] = first
            block[:, 1:] = prev + (prev >= first)
        table = out
    return table


def rank_rows(perms: np.ndarray) -> np.ndarray:
    """Vectorised Lehmer rank of each row (0-based images)."""
    rows, n = perms.shape
    dtype = np.int64 if math.factorial(n) >= 2**31 else np.int32
    ranks = np.zeros(rows, dtype=dtype)
    for i in range(n):
        col = perms[:, i]
        smaller = np.zeros(rows, dtype=np.int8)
        for j in range(i + 1, n):
            smaller += perms[:, j] < col
        ranks *= n - i
        ranks += smaller
    return ranks


def rank_width(n: int) -> int:
    return 4 if math.factorial(n) - 1 < 2**32 else 8


# --- neighbours --------------------------------------------------------------

def neighbors(g: Permutation, S: GenSet) -> list[Permutation]:
    """``[s*g for s in S]`` in connection-set order."""
    return [compose(s, g) for s in S]


def _left_mul_imgs(S: GenSet) -> list[tuple[int, ...]]:
    return [s.img for s in S]


def neighbor_imgs(g: tuple[int, ...], simgs: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    return [tuple(g[i] for i in s) for s in simgs]


# --- graph -------------------------------------------------------------------

@dataclass
class CayleyGraph:
    degree: int
    genset: GenSet
    mode: str
    vertex_count: int
    adjacency: np.ndarray | None = None
    connected: bool | None = None
    vertices: np.ndarray | None = field(default=None, repr=False)

    @property
    def valency(self) -> int:
        return len(self.genset)

    @property
    def edge_count(self) -> int:
        return self.vertex_count * self.valency // 2

    def require_explicit(self) -> np.ndarray:
        if self.mode != "explicit" or self.adjacency is None:
            raise GraphError(f"operation needs an explicit graph; n={self.degree} is implicit")
        return self.adjacency

    def vertex_table(self) -> np.ndarray:
        if self.vertices is None:
            self.vertices = all_permutations(self.degree)
        return self.vertices

    def neighbors_of_rank(self, r: int) -> list[int]:
        if self.adjacency is not None:
            return self.adjacency[r].tolist()
        g = unrank(r, self.degree)
        return [rank(h) for h in neighbors(g, self.genset)]

    def perm(self, r: int) -> Permutation:
        return unrank(r, self.degree)

    def rank(self, p: Permutation) -> int:
        return rank(p)

    def edges(self) -> Iterator[tuple[int, int]]:
        adj = self.require_explicit()
        for v in range(self.vertex_count):
            for w in adj[v]:
                if v < w:
                    yield v, int(w)


def explicit_bytes(n: int, valency: int = 3) -> int:
    """Adjacency table plus the int8 vertex table used while building it."""
    count = math.factorial(n)
    return valency * count * rank_width(n) + count * n


def build_graph(
    n: int,
    S: GenSet | None = None,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    mode: str = "auto",
    big: bool = False,
) -> CayleyGraph:
    """Build Cay(S_n, S).

    ``mode='auto'`` picks explicit when the table fits ``memory_budget`` and
    n is within the default ceiling (or ``big`` is set); ``mode='explicit'``
    raises BudgetExceeded instead of falling back.
    """
    if n < 3:
        raise GraphError(f"n must be >= 3, got {n}")
    S = S if S is not None else standard_set(n)
    if S.degree != n:
        raise GraphError(f"connection set has degree {S.degree}, expected {n}")
    required = explicit_bytes(n, len(S))
    fits = required <= memory_budget and (n <= EXPLICIT_CEILING or big)
    if mode == "explicit" and not fits:
        if required > memory_budget:
            raise BudgetExceeded(n, required, memory_budget)
        raise GraphError(f"n={n} is above the explicit ceiling {EXPLICIT_CEILING}; pass big=True")
    if mode == "implicit" or (mode == "auto" and not fits):
        return CayleyGraph(n, S, "implicit", math.factorial(n))

    perms = all_permutations(n)
    dtype = np.int32 if rank_width(n) == 4 and math.factorial(n) < 2**31 else np.int64
    adj = np.empty((perms.shape[0], len(S)), dtype=dtype)
    for j, s in enumerate(S):
        # (s*g)[x] = g[s[x]]
        adj[:, j] = rank_rows(perms[:, list(s.img)])
    graph = CayleyGraph(n, S, "explicit", perms.shape[0], adj, vertices=perms)
    graph.connected = _is_connected(adj)
    return graph


def _component_size(adj: np.ndarray, root: int) -> int:
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[root] = True
    frontier = np.array([root])
    total = 1
    while frontier.size:
        nxt = np.unique(adj[frontier].ravel())
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        total += nxt.size
        frontier = nxt
    return total


def _is_connected(adj: np.ndarray) -> bool:
    return _component_size(adj, 0) == adj.shape[0]


def check_regular_symmetric(graph: CayleyGraph) -> dict[str, bool]:
    """Loop-free, symmetric and regular; multi-edges would break the edge count."""
    adj = graph.require_explicit()
    idx = np.arange(adj.shape[0])
    loop_free = not bool((adj == idx[:, None]).any())
    distinct = bool((np.sort(adj, axis=1)[:, 1:] != np.sort(adj, axis=1)[:, :-1]).all())
    inv = graph.genset.inverse_index()
    symmetric = all(bool((adj[adj[:, j], inv[j]] == idx).all()) for j in range(adj.shape[1]))
    return {"loop_free": loop_free, "simple": distinct, "symmetric": symmetric}


def dump_edges(graph: CayleyGraph) -> str:
    """Sorted edge list of rank pairs, one ``a b`` per line with a < b."""
    adj = graph.require_explicit()
    src = np.repeat(np.arange(adj.shape[0], dtype=np.int64), adj.shape[1])
    dst = adj.ravel().astype(np.int64)
    keep = src < dst
    pairs = np.stack([src[keep], dst[keep]], axis=1)
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    return "".join(f"{a} {b}\n" for a, b in pairs.tolist())


# --- balls and local structure -------------------------------------------------

def ball(n: int, S: GenSet, center: Permutation, radius: int) -> dict[Permutation, int]:
    """BFS ball around ``center``; maps each vertex to its exact distance."""
    if radius < 0:
        raise GraphError("radius must be >= 0")
    simgs = _left_mul_imgs(S)
    dist = {center.img: 0}
    queue = deque([center.img])
    while queue:
        g = queue.popleft()
        d = dist[g]
        if d == radius:
            continue
        for h in neighbor_imgs(g, simgs):
            if h not in dist:
                dist[h] = d + 1
                queue.append(h)
    return {Permutation(k): v for k, v in dist.items()}


def local_structure_vertices(n: int) -> dict[str, Permutation]:
    """The ten labelled vertices around e: identity, neighbours and distance-2 layer."""
    S = standard_set(n)
    c, ci, t = S.elements
    return {
        "e": identity(n),
        "t": t,
        "c": c,
        "c^-1": ci,
        "c t": compose(c, t),
        "c^-1 t": compose(ci, t),
        "c^2": compose(c, c),
        "t c": compose(t, c),
        "c^-2": compose(ci, ci),
        "t c^-1": compose(t, ci),
    }


LOCAL_EDGES = (
    ("e", "t"), ("e", "c"), ("e", "c^-1"),
    ("t", "c t"), ("t", "c^-1 t"),
    ("c", "c^2"), ("c", "t c"),
    ("c^-1", "c^-2"), ("c^-1", "t c^-1"),
)


def verify_local_structure(n: int) -> dict:
    """Check the radius-2 ball of e against the labelled local picture.

    Full neighbourhoods of e, t, c, c^-1 must be exactly the drawn ones and
    the ball must hold exactly the ten vertices. Edges between two
    distance-2 vertices (present when n = 5) are counted but not drawn.
    """
    if n < 5:
        return {"applicable": False, "ok": None}
    S = standard_set(n)
    labelled = local_structure_vertices(n)
    by_perm = {p: name for name, p in labelled.items()}
    b = ball(n, S, identity(n), 2)
    checks: dict[str, bool] = {}
    checks["distinct"] = len(by_perm) == 10
    checks["ball_is_labelled_set"] = set(b) == set(labelled.values())
    expected_dist = {"e": 0, "t": 1, "c": 1, "c^-1": 1}
    checks["distances"] = all(
        b.get(p) == expected_dist.get(name, 2) for name, p in labelled.items()
    )
    drawn: dict[str, set[str]] = {name: set() for name in labelled}
    for a, z in LOCAL_EDGES:
        drawn[a].add(z)
        drawn[z].add(a)
    inner_ok = True
    for name in ("e", "t", "c", "c^-1"):
        nbrs = {by_perm.get(h, "?") for h in neighbors(labelled[name], S)}
        inner_ok &= nbrs == drawn[name]
    checks["inner_neighbourhoods"] = inner_ok
    outer = [name for name in labelled if name not in expected_dist]
    extra = 0
    drawn_present = True
    for name in outer:
        nbrs = {by_perm.get(h) for h in neighbors(labelled[name], S)}
        drawn_present &= drawn[name] <= nbrs
        extra += sum(1 for x in nbrs if x in outer)
    checks["drawn_edges_present"] = drawn_present
    return {
        "applicable": True,
        "ok": all(checks.values()),
        "checks": checks,
        "extra_outer_edges": extra // 2,
        "neighbourhoods": {
            "c": sorted(by_perm[h] for h in neighbors(labelled["c"], S)),
            "c^-1": sorted(by_perm[h] for h in neighbors(labelled["c^-1"], S)),
        },
    }


def is_automorphism_on_ball(
    vertex_map, n: int, S: GenSet, center: Permutation, radius: int
) -> bool:
    """Check ``vertex_map`` preserves adjacency on every edge inside the ball."""
    b = ball(n, S, center, radius)
    for g, d in b.items():
        if d == radius:
            continue
        fg = vertex_map(g)
        image_nbrs = set(neighbors(fg, S))
        for h in neighbors(g, S):
            if vertex_map(h) not in image_nbrs:
                return False
    return True

