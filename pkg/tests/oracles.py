"""Independent reference implementations used only by the tests.

None of these share code with the package: permutation algebra goes through
sympy, ranks through itertools order, cycles and automorphisms through
networkx on small induced subgraphs.
"""

from __future__ import annotations

import itertools
import math

import networkx as nx
from sympy.combinatorics import Permutation as SymPerm


def sym(img: tuple[int, ...]) -> SymPerm:
    return SymPerm(list(img))


def sym_compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # sympy multiplies left to right: (p*q)(i) = q(p(i))
    return tuple((sym(p) * sym(q)).array_form)


def sym_conjugate(p: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    return tuple((~sym(g) * sym(p) * sym(g)).array_form)


def lex_rank_table(n: int) -> dict[tuple[int, ...], int]:
    return {p: r for r, p in enumerate(itertools.permutations(range(n)))}


def lex_rank(img: tuple[int, ...]) -> int:
    """Rank by counting smaller permutations digit by digit (no Lehmer table)."""
    n = len(img)
    remaining = sorted(img)
    r = 0
    for i, v in enumerate(img):
        r += remaining.index(v) * math.factorial(n - 1 - i)
        remaining.remove(v)
    return r


def left_mul(s: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(g[s[i]] for i in range(len(g)))


def cayley_nx(n: int, gens: list[tuple[int, ...]]) -> nx.Graph:
    G = nx.Graph()
    for g in itertools.permutations(range(n)):
        for s in gens:
            G.add_edge(g, left_mul(s, g))
    return G


def ball_nx(n: int, gens: list[tuple[int, ...]], radius: int) -> nx.Graph:
    """Induced subgraph on the ball of the given radius around e."""
    e = tuple(range(n))
    seen = {e}
    frontier = [e]
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for s in gens:
                h = left_mul(s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    G = nx.Graph()
    G.add_nodes_from(seen)
    for g in seen:
        for s in gens:
            h = left_mul(s, g)
            if h in seen:
                G.add_edge(g, h)
    return G


def count_cycles_through(G: nx.Graph, length: int, anchors: list[tuple[int, ...]]) -> int:
    """Simple cycles of exactly ``length`` through anchors[0] and every other anchor.

    A cycle through v leaves and re-enters v by two distinct neighbours, so it
    is one simple path of ``length - 2`` edges between them avoiding v.
    """
    v = anchors[0]
    H = G.copy()
    H.remove_node(v)
    count = 0
    for a, b in itertools.combinations(sorted(G[v]), 2):
        for path in nx.all_simple_paths(H, a, b, cutoff=length - 2):
            if len(path) == length - 1 and all(x in path for x in anchors[1:]):
                count += 1
    return count


def automorphism_count(G: nx.Graph) -> int:
    matcher = nx.algorithms.isomorphism.GraphMatcher(G, G)
    return sum(1 for _ in matcher.isomorphisms_iter())


def standard_gens(n: int) -> list[tuple[int, ...]]:
    c = tuple((i + 1) % n for i in range(n))
    ci = tuple((i - 1) % n for i in range(n))
    t = (1, 0) + tuple(range(2, n))
    return [c, ci, t]
