import math

import numpy as np
import pytest

from cayleyaut.cayley import (
    EXPLICIT_CEILING,
    LOCAL_EDGES,
    BudgetExceeded,
    GraphError,
    all_permutations,
    ball,
    build_graph,
    check_regular_symmetric,
    dump_edges,
    explicit_bytes,
    is_automorphism_on_ball,
    local_structure_vertices,
    neighbors,
    rank,
    rank_rows,
    rank_width,
    unrank,
    verify_local_structure,
)
from cayleyaut.genset import custom_set, standard_set, variant_set
from cayleyaut.perm import Permutation, compose, conjugate, identity, inverse, n_cycle, phi_involution, transposition
from oracles import cayley_nx, left_mul, standard_gens


def test_rank_examples():
    assert rank(identity(5)) == 0
    assert rank(Permutation((4, 3, 2, 1, 0))) == 119
    assert unrank(1, 3) == Permutation((0, 2, 1))
    with pytest.raises(GraphError):
        unrank(6, 3)
    with pytest.raises(GraphError):
        unrank(-1, 3)


def test_rank_width():
    assert rank_width(12) == 4
    assert rank_width(13) == 8


def test_all_permutations_is_rank_ordered():
    V = all_permutations(4)
    assert V.shape == (24, 4) and V.dtype == np.int8
    assert (rank_rows(V) == np.arange(24)).all()


def test_neighbors_rule():
    n = 6
    S = standard_set(n)
    g = Permutation.from_cycles(n, [(1, 4, 2)])
    for s, h in zip(S, neighbors(g, S)):
        # h g^-1 is the connection-set element
        assert compose(h, inverse(g)) == s


def test_build_modes_and_budget():
    g = build_graph(5)
    assert g.mode == "explicit" and g.vertex_count == 120 and g.connected
    assert g.valency == 3 and g.edge_count == 180
    assert build_graph(5, mode="implicit").mode == "implicit"
    small = explicit_bytes(6) - 1
    assert build_graph(6, memory_budget=small).mode == "implicit"
    with pytest.raises(BudgetExceeded) as info:
        build_graph(6, memory_budget=small, mode="explicit")
    assert str(explicit_bytes(6)) in str(info.value)
    with pytest.raises(GraphError):
        build_graph(EXPLICIT_CEILING + 1, mode="explicit")
    with pytest.raises(GraphError):
        build_graph(2)
    with pytest.raises(GraphError):
        build_graph(5, standard_set(6))
    with pytest.raises(GraphError):
        build_graph(13, mode="implicit").require_explicit()


def test_implicit_mode_at_large_n():
    g = build_graph(13)
    assert g.mode == "implicit"
    assert g.vertex_count == math.factorial(13)


def test_disconnected_custom_set():
    g = build_graph(4, custom_set(4, [transposition(4, 1, 2)]))
    assert not g.connected
    assert g.vertex_count == 24


def test_explicit_table_matches_networkx():
    n = 4
    g = build_graph(n)
    G = cayley_nx(n, standard_gens(n))
    V = g.vertex_table()
    for r in range(g.vertex_count):
        mine = {tuple(V[x]) for x in g.neighbors_of_rank(r)}
        assert mine == set(G[tuple(int(v) for v in V[r])])


def test_graph_accessors():
    g = build_graph(4)
    p = g.perm(7)
    assert g.rank(p) == 7
    edges = list(g.edges())
    assert len(edges) == g.edge_count
    assert all(a < b for a, b in edges)


def test_dump_edges_deterministic():
    g = build_graph(3)
    text = dump_edges(g)
    assert text == dump_edges(build_graph(3))
    lines = text.splitlines()
    assert len(lines) == 9
    assert lines == sorted(lines, key=lambda s: tuple(map(int, s.split())))


def test_ball_distances():
    n = 13
    S = standard_set(n)
    b = ball(n, S, identity(n), 2)
    assert len(b) == 10
    assert b[identity(n)] == 0 and b[n_cycle(n)] == 1
    with pytest.raises(GraphError):
        ball(n, S, identity(n), -1)


@pytest.mark.parametrize("n", [5, 13, 20])
def test_local_structure(n):
    rep = verify_local_structure(n)
    assert rep["applicable"] and rep["ok"]
    assert rep["neighbourhoods"]["c"] == sorted(["e", "t c", "c^2"])
    assert rep["extra_outer_edges"] == (1 if n == 5 else 0)


def test_local_structure_below_range():
    assert verify_local_structure(4) == {"applicable": False, "ok": None}


def test_local_edges_cover_labels():
    names = set(local_structure_vertices(13))
    assert {a for e in LOCAL_EDGES for a in e} == names
    assert len(LOCAL_EDGES) == 9


def test_ball_automorphism_check():
    n = 13
    S = standard_set(n)
    phi = phi_involution(n)
    assert is_automorphism_on_ball(lambda x: conjugate(x, phi), n, S, identity(n), 5)
    swap = transposition(n, 2, 3)
    assert not is_automorphism_on_ball(lambda x: conjugate(x, swap), n, S, identity(n), 3)


def test_variant_graph_is_simple_and_connected():
    g = build_graph(6, variant_set(6, 3))
    assert g.connected
    assert all(check_regular_symmetric(g).values())


def test_left_multiplication_oracle_agrees():
    n = 5
    S = standard_set(n)
    g = Permutation.from_cycles(n, [(1, 3), (2, 5, 4)])
    assert [h.img for h in neighbors(g, S)] == [left_mul(s.img, g.img) for s in S]
