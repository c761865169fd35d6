"""Automorphisms of Cayley graphs on S_n.

Vertex maps are image tables over Lehmer ranks (``table[v] = image of v``)
or closed forms over group elements:

* ``inn(g)``:   x -> g^-1 x g
* ``right(g)``: x -> x g
* ``left(g)``:  x -> g x
"""

from __future__ import annotations

import itertools
import math
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .cayley import (
    CayleyGraph,
    all_permutations,
    ball,
    build_graph,
    is_automorphism_on_ball,
    rank,
    rank_rows,
    unrank,
)
from .cycles import _dfs_from_first_step
from .genset import GenSet, standard_set
from .perm import (
    Permutation,
    compose,
    conjugate,
    format_cycles,
    identity,
    inverse,
    n_cycle,
    order,
    phi_involution,
)

BRUTEFORCE_MAX_VERTICES = 5040
INVARIANT_LENGTHS = tuple(range(3, 13))


class SearchRefused(RuntimeError):
    pass


# --- vertex maps ---------------------------------------------------------------

@dataclass(frozen=True)
class AutMap:
    """A vertex map: an explicit image table or a closed form over group elements."""

    n: int
    kind: str
    witness: Permutation | None = None
    images: np.ndarray | None = field(default=None, compare=False, repr=False)
    parts: tuple["AutMap", ...] = ()

    @classmethod
    def from_table(cls, table: np.ndarray, n: int, witness: Permutation | None = None) -> "AutMap":
        return cls(n, "table", witness, np.asarray(table))

    def __call__(self, x: Permutation) -> Permutation:
        if self.kind == "identity":
            return x
        if self.kind == "inn":
            return conjugate(x, self.witness)
        if self.kind == "right":
            return compose(x, self.witness)
        if self.kind == "left":
            return compose(self.witness, x)
        if self.kind == "composite":
            for part in self.parts:
                x = part(x)
            return x
        return unrank(int(self.images[rank(x)]), self.n)

    def table(self, V: np.ndarray) -> np.ndarray:
        """Image table over all ranks; ``V`` is the rank-ordered vertex table."""
        if self.kind == "table":
            return self.images
        if self.kind == "identity":
            return np.arange(V.shape[0], dtype=np.int32)
        if self.kind == "composite":
            tab = np.arange(V.shape[0], dtype=np.int32)
            for part in self.parts:
                tab = part.table(V)[tab]
            return tab
        g = np.array(self.witness.img, dtype=np.int8)
        if self.kind == "inn":
            ginv = np.array(inverse(self.witness).img)
            return rank_rows(g[V[:, ginv]])
        if self.kind == "right":
            return rank_rows(g[V])
        if self.kind == "left":
            return rank_rows(V[:, self.witness.img])
        raise ValueError(f"unknown map kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "identity":
            return "identity"
        if self.kind in ("inn", "right", "left"):
            return f"{self.kind}({format_cycles(self.witness)})"
        if self.kind == "composite":
            return " then ".join(p.describe() for p in self.parts)
        if self.witness is not None:
            return f"table = inn({format_cycles(self.witness)})"
        return "table"


def inn(g: Permutation) -> AutMap:
    return AutMap(g.degree, "inn", g)


def right(g: Permutation) -> AutMap:
    return AutMap(g.degree, "right", g)


def left(g: Permutation) -> AutMap:
    return AutMap(g.degree, "left", g)


def audit_table(table: np.ndarray, adj: np.ndarray) -> bool:
    """Exhaustive check that ``table`` is a bijection preserving adjacency."""
    table = np.asarray(table)
    N = adj.shape[0]
    if table.shape != (N,):
        return False
    if np.bincount(table, minlength=N).max(initial=0) != 1:
        return False
    return bool((np.sort(table[adj], axis=1) == np.sort(adj[table], axis=1)).all())


# --- arc invariants --------------------------------------------------------------

def arc_invariants(
    S: GenSet, lengths: Sequence[int] = INVARIANT_LENGTHS, max_arc: int = 3
) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Cycle counts through label walks starting at e.

    Maps a label sequence (positions in S) of length <= ``max_arc`` to the
    number of simple L-cycles, one count per L in ``lengths``, that contain
    the walk from e taking those steps. Right translations preserve labels,
    so the same counts hold for the walk with those labels from any vertex,
    and every automorphism preserves them.
    """
    n = S.degree
    simgs = [s.img for s in S]
    counts: dict[tuple[int, ...], list[int]] = {}
    for li, L in enumerate(lengths):
        for first in range(len(simgs)):
            walks, _ = _dfs_from_first_step((simgs, L, [tuple(range(n))], first))
            for w in walks:
                w = w + (w[0],)
                labels = []
                for a, b in zip(w[:max_arc], w[1 : max_arc + 1]):
                    labels.append(next(j for j, s in enumerate(simgs) if tuple(a[i] for i in s) == b))
                for m in range(1, len(labels) + 1):
                    counts.setdefault(tuple(labels[:m]), [0] * len(lengths))[li] += 1
    return {k: tuple(v) for k, v in counts.items()}


# --- stabilizer search -----------------------------------------------------------

@dataclass
class StabilizerResult:
    n: int
    elements: list[AutMap]
    aut_order: int
    search_stats: dict

    @property
    def size(self) -> int:
        return len(self.elements)


class _Search:
    """Backtracking over label bijections, propagating along a trail of mapped vertices."""

    def __init__(self, adj: list[list[int]], invariants: dict | None):
        self.adj = adj
        self.N = len(adj)
        self.d = len(adj[0])
        self.T = invariants
        self.zero = (0,) * len(next(iter(invariants.values()))) if invariants else ()
        self.nodes = 0
        self.prunes = 0

    def _signatures(self, v: int, w: int, f: list[int]) -> tuple[list, list]:
        """Per-label invariant signatures at v and at its image w."""
        adj, T, zero, d = self.adj, self.T, self.zero, self.d
        ctx_v: list[tuple[int, ...]] = [()]
        ctx_w: list[tuple[int, ...]] = [()]
        av = adj[v]
        for u in av:
            fu = f[u]
            if fu < 0:
                continue
            luv = adj[u].index(v)
            lw = adj[fu].index(w)
            ctx_v.append((luv,))
            ctx_w.append((lw,))
            for p in adj[u]:
                fp = f[p]
                if fp < 0 or p == v:
                    continue
                ctx_v.append((adj[p].index(u), luv))
                ctx_w.append((adj[fp].index(fu), lw))
        sig_v = [tuple(T.get(c + (j,), zero) for c in ctx_v) for j in range(d)]
        sig_w = [tuple(T.get(c + (j,), zero) for c in ctx_w) for j in range(d)]
        return sig_v, sig_w

    def process(self, v: int, f: list[int], finv: list[int], trail: list[int]):
        """Extend the map around v. Returns None on success, False on conflict,
        or (sources, targets) for a class that needs branching."""
        adj = self.adj
        w = f[v]
        av = adj[v]
        aw = adj[w]
        used = [False] * self.d
        free_v = []
        for j in range(self.d):
            fu = f[av[j]]
            if fu >= 0:
                try:
                    jj = aw.index(fu)
                except ValueError:
                    return False
                used[jj] = True
            else:
                free_v.append(j)
        if not free_v:
            return None
        free_w = [jj for jj in range(self.d) if not used[jj]]
        if len(free_w) != len(free_v) or any(finv[aw[jj]] >= 0 for jj in free_w):
            return False
        if len(free_v) == 1:
            x, y = av[free_v[0]], aw[free_w[0]]
            f[x] = y
            finv[y] = x
            trail.append(x)
            return None
        if self.T is None:
            classes_v = {(): free_v}
            classes_w = {(): free_w}
        else:
            sig_v, sig_w = self._signatures(v, w, f)
            for j in range(self.d):
                if f[av[j]] >= 0 and sig_v[j] != sig_w[aw.index(f[av[j]])]:
                    return False
            classes_v, classes_w = {}, {}
            for j in free_v:
                classes_v.setdefault(sig_v[j], []).append(j)
            for jj in free_w:
                classes_w.setdefault(sig_w[jj], []).append(jj)
            if set(classes_v) != set(classes_w) or any(
                len(classes_v[k]) != len(classes_w[k]) for k in classes_v
            ):
                return False
        branch = None
        for key in sorted(classes_v):
            src, dst = classes_v[key], classes_w[key]
            if len(src) == 1:
                x, y = av[src[0]], aw[dst[0]]
                f[x] = y
                finv[y] = x
                trail.append(x)
            elif branch is None:
                branch = (sorted(av[j] for j in src), sorted(aw[jj] for jj in dst))
        return branch

    def run(self, root: int, root_image: int, seed: Sequence[tuple[int, int]] = (), limit: int | None = None):
        """All completions of ``root -> root_image`` plus the ``seed`` pairs."""
        N = self.N
        f = [-1] * N
        finv = [-1] * N
        trail: list[int] = []

        def assign(x: int, y: int) -> bool:
            if f[x] >= 0:
                return f[x] == y
            if finv[y] >= 0:
                return False
            f[x] = y
            finv[y] = x
            trail.append(x)
            return True

        solutions: list[list[int]] = []
        if not assign(root, root_image) or not all(assign(x, y) for x, y in seed):
            self.prunes += 1
            return solutions
        self.nodes += 1
        stack: list[list] = []
        ptr = 0
        while True:
            ok = True
            while ptr < len(trail):
                res = self.process(trail[ptr], f, finv, trail)
                if res is None:
                    ptr += 1
                elif res is False:
                    ok = False
                    break
                else:
                    src, dst = res
                    options = list(itertools.permutations(dst))
                    stack.append([len(trail), ptr, src, options, 0])
                    for x, y in zip(src, options[0]):
                        assign(x, y)
                    self.nodes += 1
            if ok and len(trail) == N:
                solutions.append(list(f))
                if limit is not None and len(solutions) >= limit:
                    return solutions
            elif not ok:
                self.prunes += 1
            while stack:
                top = stack[-1]
                keep, ptr = top[0], top[1]
                for x in trail[keep:]:
                    finv[f[x]] = -1
                    f[x] = -1
                del trail[keep:]
                top[4] += 1
                if top[4] < len(top[3]):
                    for x, y in zip(top[2], top[3][top[4]]):
                        assign(x, y)
                    self.nodes += 1
                    break
                stack.pop()
            else:
                return solutions


def _root_seeds(nb: list[int], invariants: dict | None) -> list[list[tuple[int, int]]]:
    """Bijections N(e) -> N(e) preserving the single-arc invariants."""
    d = len(nb)
    seeds = []
    for perm in itertools.permutations(range(d)):
        if invariants is not None and any(
            invariants.get((j,)) != invariants.get((perm[j],)) for j in range(d)
        ):
            continue
        seeds.append([(nb[j], nb[perm[j]]) for j in range(d)])
    seeds.sort(key=lambda s: [y for _, y in sorted(s)])
    return seeds


_WORKER: dict = {}


def _init_worker(adj: np.ndarray, invariants: dict | None) -> None:
    _WORKER["search"] = _Search(adj.tolist(), invariants)


def _run_seed(seed) -> tuple[list[list[int]], int, int]:
    search: _Search = _WORKER["search"]
    n0, p0 = search.nodes, search.prunes
    sols = search.run(0, 0, seed)
    return sols, search.nodes - n0, search.prunes - p0


def stabilizer_search(
    graph: CayleyGraph,
    workers: int = 1,
    invariant_lengths: Sequence[int] | None = INVARIANT_LENGTHS,
) -> StabilizerResult:
    """All automorphisms of an explicit connected Cayley graph fixing the identity vertex.

    Seeds are the arc-invariant-preserving bijections of N(e); each seed is
    propagated vertex by vertex in trail order, branching on ties between
    unmapped neighbours and pruning on any adjacency or invariant mismatch.
    Every completed map is audited against the full adjacency table.
    """
    adj = graph.require_explicit()
    if not graph.connected:
        raise SearchRefused("stabilizer search needs a connected graph")
    t0 = time.perf_counter()
    invariants = arc_invariants(graph.genset, invariant_lengths) if invariant_lengths else None
    if invariants == {}:
        invariants = None
    seeds = _root_seeds(adj[0].tolist(), invariants)
    if workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(
            max_workers=min(workers, len(seeds)),
            initializer=_init_worker,
            initargs=(adj, invariants),
        ) as pool:
            results = list(pool.map(_run_seed, seeds))
    else:
        _init_worker(adj, invariants)
        results = [_run_seed(seed) for seed in seeds]
        _WORKER.clear()
    tables = []
    nodes = prunes = 0
    for sols, dn, dp in results:
        nodes += dn
        prunes += dp
        tables.extend(sols)
    tables.sort()
    elements = []
    for tab in tables:
        arr = np.array(tab, dtype=np.int32)
        if not audit_table(arr, adj):
            raise AssertionError("stabilizer search produced a non-automorphism")
        elements.append(AutMap.from_table(arr, graph.degree))
    _attach_witnesses(elements, graph)
    stats = {
        "seeds": len(seeds),
        "nodes": nodes,
        "prunes": prunes,
        "millis": round((time.perf_counter() - t0) * 1000),
        "invariant_lengths": list(invariant_lengths) if invariants else [],
    }
    return StabilizerResult(graph.degree, elements, math.factorial(graph.degree) * len(elements), stats)


def _attach_witnesses(elements: list[AutMap], graph: CayleyGraph) -> None:
    """Tag tables that equal inn(g) for some g in Aut(S_n, S)."""
    try:
        candidates = aut_G_S_fast(graph.degree, graph.genset)
    except SearchRefused:
        if graph.degree > 8:
            return
        candidates = aut_G_S_bruteforce(graph.degree, graph.genset)
    V = graph.vertex_table()
    inner = [(g, inn(g).table(V)) for g in candidates]
    for idx, el in enumerate(elements):
        for g, tab in inner:
            if np.array_equal(el.images, tab):
                elements[idx] = AutMap.from_table(el.images, el.n, g)
                break


# --- brute-force oracle ----------------------------------------------------------

class _DistanceCache:
    def __init__(self, adj: np.ndarray):
        self.adj = adj
        self.cache: dict[int, np.ndarray] = {}

    def __call__(self, v: int) -> np.ndarray:
        col = self.cache.get(v)
        if col is None:
            N = self.adj.shape[0]
            col = np.full(N, -1, dtype=np.int16)
            col[v] = 0
            frontier = np.array([v])
            dist = 0
            while frontier.size:
                dist += 1
                nxt = np.unique(self.adj[frontier].ravel())
                nxt = nxt[col[nxt] < 0]
                col[nxt] = dist
                frontier = nxt
            self.cache[v] = col
        return col


def _row_keys(cols: list[np.ndarray]) -> np.ndarray:
    key = np.zeros(cols[0].shape[0], dtype=np.int64)
    for c in cols:
        key = key * 64 + (c.astype(np.int64) + 1)
    return key


def _resolving_base(dist: _DistanceCache, root: int, N: int) -> list[int]:
    """Base points whose distance vectors separate every vertex."""
    base = [root]
    while True:
        keys = _row_keys([dist(b) for b in base])
        uniq, inverse_idx, counts = np.unique(keys, return_inverse=True, return_counts=True)
        if counts.max() == 1:
            return base
        biggest = int(np.argmax(counts))
        members = np.flatnonzero(inverse_idx == biggest)
        base.append(int(members.min()))


def _class_profile(keys: np.ndarray) -> tuple:
    _, counts = np.unique(keys, return_counts=True)
    return tuple(np.sort(counts))


def _distance_search(adj, dist, base, root_image, limit=None):
    """Automorphisms sending base[0] -> root_image, by distance-vector individualization."""
    N = adj.shape[0]
    src_cols = [dist(b) for b in base]
    src_profiles = [_class_profile(_row_keys(src_cols[: i + 1])) for i in range(len(base))]
    found = []
    nodes = 0

    def extend(level: int, images: list[int]) -> bool:
        nonlocal nodes
        nodes += 1
        dst_cols = [dist(y) for y in images]
        if _class_profile(_row_keys(dst_cols)) != src_profiles[level - 1]:
            return False
        if level == len(base):
            src_keys = _row_keys(src_cols)
            dst_keys = _row_keys(dst_cols)
            so, do = np.argsort(src_keys), np.argsort(dst_keys)
            if not np.array_equal(src_keys[so], dst_keys[do]):
                return False
            table = np.empty(N, dtype=np.int32)
            table[so] = do
            if audit_table(table, adj):
                found.append(table)
                return limit is not None and len(found) >= limit
            return False
        target = base[level]
        mask = np.ones(N, dtype=bool)
        for b_col, y_col, b in zip(src_cols[:level], dst_cols, base[:level]):
            mask &= y_col == b_col[target]
        mask[images] = False
        for y in np.flatnonzero(mask):
            if extend(level + 1, images + [int(y)]):
                return True
        return False

    extend(1, [root_image])
    return found, nodes


@dataclass
class BruteforceResult:
    n: int
    tables: np.ndarray
    stabilizer_size: int
    orbit_size: int
    nodes: int

    @property
    def order(self) -> int:
        return self.tables.shape[0]


def bruteforce_aut(graph: CayleyGraph) -> BruteforceResult:
    """Every automorphism of a small explicit graph, without using its group structure.

    Searches maps fixing vertex 0 and, for each other vertex not yet reached
    by the automorphisms found so far, one map sending 0 there; the full
    group is the product of that transversal with the point stabilizer.
    """
    adj = graph.require_explicit()
    N = adj.shape[0]
    if N > BRUTEFORCE_MAX_VERTICES:
        raise SearchRefused(f"bruteforce oracle limited to {BRUTEFORCE_MAX_VERTICES} vertices, got {N}")
    dist = _DistanceCache(adj)
    base = _resolving_base(dist, 0, N)
    stab, nodes = _distance_search(adj, dist, base, 0)
    stab.sort(key=lambda t: t.tolist())
    transversal: dict[int, np.ndarray] = {0: np.arange(N, dtype=np.int32)}
    gens: list[np.ndarray] = []
    for x in range(N):
        if x in transversal:
            continue
        hit, dn = _distance_search(adj, dist, base, x, limit=1)
        nodes += dn
        if not hit:
            continue
        gens.append(hit[0])
        queue = deque(transversal)
        while queue:
            y = queue.popleft()
            for g in gens:
                z = int(g[y])
                if z not in transversal:
                    transversal[z] = g[transversal[y]]
                    queue.append(z)
    tables = np.array(
        [transversal[x][s] for x in sorted(transversal) for s in stab], dtype=np.int32
    )
    for tab in tables:
        if not audit_table(tab, adj):
            raise AssertionError("bruteforce oracle produced a non-automorphism")
    return BruteforceResult(graph.degree, tables, len(stab), len(transversal), nodes)


# --- Aut(S_n, S) -----------------------------------------------------------------

def _standard_shape(n: int, S: GenSet) -> tuple[int, int] | None:
    c = n_cycle(n)
    els = set(S.elements)
    if len(els) != 3 or c not in els or inverse(c) not in els:
        return None
    (t,) = els - {c, inverse(c)}
    moved = sorted(i + 1 for i, v in enumerate(t.img) if i != v)
    if len(moved) != 2 or moved[1] != moved[0] + 1:
        return None
    return moved[0], moved[1]


def aut_G_S_fast(n: int, S: GenSet | None = None) -> list[Permutation]:
    """All g with g^-1 S g = S for S = {c, c^-1, (i i+1)}, in O(n) each.

    g must send the pair {i, i+1} to itself and conjugate c to c^{+-1}, so
    g(x+1) = g(x) +- 1 (mod n) from either anchor g(i) in {i, i+1}.
    """
    if S is None:
        shape = (1, 2)
    elif S.kind in ("standard", "variant") and S.degree == n:
        shape = S.transposition
    else:
        shape = _standard_shape(n, S)
    if shape is None:
        raise SearchRefused("aut_G_S_fast only handles {c, c^-1, (i i+1)}")
    i, j = shape
    found = []
    for anchor in (i, j):
        for sign in (1, -1):
            img = [((anchor - 1) + sign * (x - i)) % n for x in range(1, n + 1)]
            if {img[i - 1], img[j - 1]} != {i - 1, j - 1}:
                continue
            g = Permutation(tuple(img))
            if g not in found:
                found.append(g)
    found.sort(key=lambda g: (not g.is_identity(), g.img))
    return found


def aut_G_S_bruteforce(n: int, S: GenSet | None = None) -> list[Permutation]:
    """Scan all n! permutations for those conjugating S onto itself."""
    if n > 8:
        raise SearchRefused(f"aut_G_S_bruteforce limited to n <= 8, got {n}")
    S = S if S is not None else standard_set(n)
    V = all_permutations(n).astype(np.int64)
    rows = np.arange(V.shape[0])[:, None]
    ok = np.ones(V.shape[0], dtype=bool)
    targets = np.array([s.img for s in S], dtype=np.int64)
    for s in S:
        # conjugate(s, g): out[g[i]] = g[s[i]]
        conj = np.empty_like(V)
        conj[rows, V] = V[:, list(s.img)]
        ok &= (conj[:, None, :] == targets[None, :, :]).all(axis=2).any(axis=1)
    found = [Permutation(tuple(int(x) for x in V[r])) for r in np.flatnonzero(ok)]
    found.sort(key=lambda g: (not g.is_identity(), g.img))
    return found


def multiplication_table(n: int) -> np.ndarray:
    """``table[a, b] = rank(unrank(a) * unrank(b))``."""
    V = all_permutations(n)
    N = V.shape[0]
    out = np.empty((N, N), dtype=np.int32)
    for b in range(N):
        # (x b)[i] = b[x[i]]
        out[:, b] = rank_rows(V[b][V])
    return out


def extend_generator_map(
    n: int, image_of_t: Permutation, image_of_c: Permutation
) -> np.ndarray | None:
    """Extend t -> image_of_t, c -> image_of_c to an automorphism of S_n.

    Returns the image table over ranks, or None when the assignment does not
    extend (order mismatch, inconsistency along the closure, not bijective,
    or not multiplicative on some pair).
    """
    if n > 6:
        raise SearchRefused(f"extend_generator_map limited to n <= 6, got {n}")
    t = standard_set(n).by_label("T")
    c = n_cycle(n)
    if order(image_of_t) != order(t) or order(image_of_c) != order(c):
        return None
    N = math.factorial(n)
    f: dict[tuple[int, ...], tuple[int, ...]] = {identity(n).img: identity(n).img}
    gens = [(t.img, image_of_t.img), (c.img, image_of_c.img)]
    queue = deque([identity(n).img])
    while queue:
        x = queue.popleft()
        fx = f[x]
        for g, fg in gens:
            y = tuple(g[i] for i in x)
            fy = tuple(fg[i] for i in fx)
            if y in f:
                if f[y] != fy:
                    return None
            else:
                f[y] = fy
                queue.append(y)
    if len(f) != N:
        return None
    table = np.empty(N, dtype=np.int32)
    for x, fx in f.items():
        table[rank(Permutation(x))] = rank(Permutation(fx))
    if np.bincount(table, minlength=N).max() != 1:
        return None
    mult = multiplication_table(n)
    if not (table[mult] == mult[table[:, None], table[None, :]]).all():
        return None
    return table


def s_preserving_automorphisms(n: int) -> list[np.ndarray]:
    """Every automorphism of S_n (inner or not) mapping S onto itself, n <= 6.

    Tries all 9 assignments of (t, c) into S; an automorphism is fixed by
    the images of the generators t and c.
    """
    S = standard_set(n)
    members = {rank(s) for s in S}
    out = []
    for it in S:
        for ic in S:
            table = extend_generator_map(n, it, ic)
            if table is None:
                continue
            if {int(table[r]) for r in members} == members:
                out.append(table)
    out.sort(key=lambda a: a.tolist())
    return out


# --- normalizer R(S_n) x| Aut(S_n, S) ---------------------------------------------

def right_translation_tables(n: int, S: GenSet | None = None) -> Iterable[tuple[Permutation, np.ndarray]]:
    """Yield (h, table of x -> x h) for every h in S_n, walking a BFS tree by generators."""
    S = S if S is not None else standard_set(n)
    V = all_permutations(n)
    gens = [(s, rank_rows(np.array(s.img, dtype=np.int8)[V])) for s in S]
    start = identity(n)
    tables = {start.img: np.arange(V.shape[0], dtype=np.int32)}
    seen = {start.img}
    yield start, tables[start.img]
    queue = deque([start])
    while queue:
        h = queue.popleft()
        tab = tables.pop(h.img)
        for s, stab in gens:
            hs = compose(h, s)
            if hs.img in seen:
                continue
            seen.add(hs.img)
            # x (h s) = (x h) s
            new = stab[tab]
            tables[hs.img] = new
            queue.append(hs)
            yield hs, new


@dataclass
class NormalizerGroup:
    n: int
    witnesses: list[Permutation]

    @property
    def order(self) -> int:
        return math.factorial(self.n) * len(self.witnesses)

    def element(self, g: Permutation, h: Permutation) -> AutMap:
        """x -> (g^-1 x g) h."""
        return AutMap(self.n, "composite", parts=(inn(g), right(h)))

    def sample(self, count: int, seed: int = 0) -> list[AutMap]:
        rng = np.random.default_rng(seed)
        out = []
        for _ in range(count):
            g = self.witnesses[int(rng.integers(len(self.witnesses)))]
            h = Permutation(tuple(int(x) for x in rng.permutation(self.n)))
            out.append(self.element(g, h))
        return out

    def tables(self, graph: CayleyGraph) -> np.ndarray:
        """All image tables (explicit graphs only), witnesses outer, h in rank order."""
        V = graph.vertex_table()
        N = V.shape[0]
        inner = [inn(g).table(V) for g in self.witnesses]
        rt = np.empty((N, N), dtype=np.int32)
        for h, tab in right_translation_tables(self.n, graph.genset):
            rt[rank(h)] = tab
        return np.concatenate([rt[:, ig] for ig in inner])


def build_normalizer_group(n: int, S: GenSet | None = None) -> NormalizerGroup:
    S = S if S is not None else standard_set(n)
    return NormalizerGroup(n, aut_G_S_fast(n, S))


def verify_normalizer(
    group: NormalizerGroup,
    graph: CayleyGraph | None = None,
    sample: int = 50,
    radius: int = 4,
) -> dict:
    """Audit the normalizer: every element when explicit and small, else a ball sample."""
    if graph is not None and graph.mode == "explicit" and group.n <= 7:
        adj = graph.require_explicit()
        tabs = group.tables(graph)
        ok = all(audit_table(t, adj) for t in tabs)
        distinct = len({t.tobytes() for t in tabs})
        return {"mode": "exhaustive", "checked": int(tabs.shape[0]), "distinct": distinct, "ok": ok}
    S = graph.genset if graph is not None else standard_set(group.n)
    e = identity(group.n)
    checked = group.sample(sample)
    ok = all(is_automorphism_on_ball(m, group.n, S, e, radius) for m in checked)
    return {"mode": f"ball-r{radius}", "checked": len(checked), "ok": ok}


# --- normality -------------------------------------------------------------------

def normality_check(n: int, graph: CayleyGraph, stab: StabilizerResult | None = None, workers: int = 1) -> dict:
    """Normal iff every stabilizer element is multiplicative on S x S."""
    stab = stab if stab is not None else stabilizer_search(graph, workers)
    S = graph.genset
    failures = 0
    for sigma in stab.elements:
        img = sigma.images
        for s in S:
            for t in S:
                lhs = unrank(int(img[rank(compose(s, t))]), n)
                rhs = compose(unrank(int(img[rank(s)]), n), unrank(int(img[rank(t)]), n))
                failures += lhs != rhs
    try:
        ags = aut_G_S_fast(n, S)
    except SearchRefused:
        ags = aut_G_S_bruteforce(n, S) if n <= 8 else None
    return {
        "normal": failures == 0,
        "stabilizer_size": stab.size,
        "aut_G_S_size": None if ags is None else len(ags),
        "sizes_agree": None if ags is None else len(ags) == stab.size,
        "multiplicativity_failures": int(failures),
        "aut_order": stab.aut_order,
    }


def arc_transitivity_check(n: int, stab: StabilizerResult, S: GenSet | None = None) -> dict:
    """Orbits of the stabilizer on N(e)."""
    S = S if S is not None else standard_set(n)
    ranks = [rank(s) for s in S]
    parent = list(range(len(ranks)))

    def find(a: int) -> int:
        while parent[a] != a:
            a = parent[a]
        return a

    for sigma in stab.elements:
        for a, r in enumerate(ranks):
            b = ranks.index(int(sigma.images[r]))
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[str]] = {}
    for a, label in enumerate(S.labels):
        groups.setdefault(find(a), []).append(label)
    orbits = sorted(groups.values(), key=lambda g: (len(g), g))
    return {"orbits": orbits, "transitive_on_neighbourhood": len(orbits) == 1}


# --- structure probe --------------------------------------------------------------

def _generated_group(gens: list[np.ndarray]) -> list[np.ndarray]:
    N = gens[0].shape[0]
    start = np.arange(N, dtype=np.int32)
    seen = {start.tobytes(): start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g[x]
            key = y.tobytes()
            if key not in seen:
                seen[key] = y
                queue.append(y)
    return list(seen.values())


def structure_probe(n: int, radius: int = 5) -> dict:
    """Evidence about the shape of R(S_n) x| <inn(phi)> without naming it.

    (a) x -> phi x preserves adjacency; (b) it commutes with every right
    translation and with inn(phi); (c) centre order of the group generated by
    right translations by S and inn(phi) (n <= 6).
    """
    phi = phi_involution(n)
    S = standard_set(n)
    lphi = left(phi)
    report: dict = {"n": n}
    if n <= 8:
        graph = build_graph(n, S)
        adj = graph.require_explicit()
        V = graph.vertex_table()
        L = lphi.table(V)
        report["left_phi_is_automorphism"] = audit_table(L, adj)
        report["left_phi_check"] = "exhaustive"
        I = inn(phi).table(V)
        commutes = bool(np.array_equal(L[I], I[L]))
        checked = 0
        for _, R in right_translation_tables(n, S):
            commutes &= bool(np.array_equal(L[R], R[L]))
            checked += 1
        report["left_phi_commutes"] = commutes
        report["commutation_checked"] = checked
        if n <= 6:
            gens = [right(s).table(V) for s in S] + [I]
            group = _generated_group(gens)
            centre = [z for z in group if all(np.array_equal(z[g], g[z]) for g in gens)]
            report["generated_group_order"] = len(group)
            report["center_order_of_generated_group"] = len(centre)
        else:
            report["center_order_of_generated_group"] = None
    else:
        e = identity(n)
        report["left_phi_is_automorphism"] = is_automorphism_on_ball(lphi, n, S, e, radius)
        report["left_phi_check"] = f"ball-r{radius}"
        rng = np.random.default_rng(0)
        commutes = True
        pts = list(ball(n, S, e, 3))
        for _ in range(20):
            h = Permutation(tuple(int(x) for x in rng.permutation(n)))
            for x in pts:
                commutes &= lphi(right(h)(x)) == right(h)(lphi(x))
                commutes &= lphi(inn(phi)(x)) == inn(phi)(lphi(x))
        report["left_phi_commutes"] = commutes
        report["commutation_checked"] = "sampled: 20 translations on the radius-3 ball"
        report["center_order_of_generated_group"] = None
    return report

