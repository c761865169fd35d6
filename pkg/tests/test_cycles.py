import pytest
from hypothesis import given, strategies as st

from cayleyaut.cycles import (
    CASES,
    CycleCert,
    ExponentSequence,
    SearchStats,
    anchors_for_case,
    census,
    classify_solution_types,
    enumerate_cycles,
    evaluate_sequence,
    exponent_sequences,
    is_admissible,
    max_dfs_nodes,
    solve_exponent_equation,
)
from cayleyaut.genset import parse_word, evaluate_word, standard_set, variant_set
from cayleyaut.perm import identity, n_cycle
from oracles import ball_nx, count_cycles_through, standard_gens
import reference as ref


def cert_from_words(words, n):
    return CycleCert.from_walk([evaluate_word(parse_word(w), n).img for w in words])


@pytest.mark.parametrize("n", [5, 7, 8, 12, 13, 16])
def test_census_matches_path_oracle(n):
    gens = standard_gens(n)
    G = ball_nx(n, gens, 6)
    e = tuple(range(n))
    expected = tuple(
        count_cycles_through(G, 12, [e] + anchors)
        for anchors in ([gens[0], gens[1]], [gens[2], gens[0]], [gens[2], gens[1]])
    )
    assert census(n) == expected


@pytest.mark.parametrize("n", [13, 14, 15, 16, 20])
def test_census_large_n(n):
    assert census(n) == ref.CENSUS_LARGE_N


@pytest.mark.parametrize("n, counts", sorted(ref.CENSUS_SMALL_N.items()))
def test_census_small_n(n, counts):
    assert census(n) == counts


def test_certificates_equal_explicit_cycles():
    n = 13
    S = standard_set(n)
    for case, lists in (("A", [ref.CYCLE_A]), ("B+", ref.CYCLES_B_PLUS), ("B-", ref.CYCLES_B_MINUS)):
        got = enumerate_cycles(n, S, 12, anchors_for_case(case, S))
        want = [cert_from_words(w, n) for w in lists]
        assert sorted(c.ranks for c in got) == sorted(c.ranks for c in want)
        assert all(c.verify(S) for c in got)


def test_certificate_canonical_form():
    n = 13
    cert = cert_from_words(ref.CYCLE_A, n)
    assert cert.vertices[0] == identity(n)
    assert cert.ranks[1] < cert.ranks[-1]
    reversed_walk = [cert.vertices[0]] + list(cert.vertices[:0:-1])
    assert CycleCert.from_walk([v.img for v in reversed_walk]) == cert
    rotated = list(cert.vertices[5:]) + list(cert.vertices[:5])
    assert CycleCert.from_walk([v.img for v in rotated]) == cert
    assert cert.contains(n_cycle(n))
    assert len(cert.format()) == 12


def test_broken_certificate_fails_verification():
    n = 13
    S = standard_set(n)
    cert = cert_from_words(ref.CYCLE_A, n)
    bad = CycleCert(cert.vertices[:6] + cert.vertices[7:], cert.ranks)
    assert not bad.verify(S)


def test_enumerate_requires_identity_and_length():
    n = 13
    S = standard_set(n)
    with pytest.raises(ValueError):
        enumerate_cycles(n, S, 12, [n_cycle(n)])
    with pytest.raises(ValueError):
        enumerate_cycles(n, S, 2, [identity(n)])


def test_dfs_node_bound_and_workers():
    n = 13
    S = standard_set(n)
    stats = SearchStats()
    one = enumerate_cycles(n, S, 12, anchors_for_case("A", S), stats=stats)
    assert stats.nodes <= max_dfs_nodes(12)
    assert enumerate_cycles(n, S, 12, anchors_for_case("A", S), workers=3) == one


def test_variant_set_census():
    assert census(13, variant_set(13, 3)) == (1, 2, 2)
    assert census(14, variant_set(14, 2)) == (1, 2, 2)


@pytest.mark.parametrize("n", [12, 13, 14, 15, 16])
@pytest.mark.parametrize("case", CASES)
def test_solver_agrees_with_dfs(n, case):
    S = standard_set(n)
    solved = {cert.ranks for _, cert in solve_exponent_equation(n, 12, case)}
    walked = {cert.ranks for cert in enumerate_cycles(n, S, 12, anchors_for_case(case, S))}
    assert solved == walked


@pytest.mark.parametrize("case", CASES)
def test_solution_exponents(case):
    found = {seq.exponents for seq, _ in solve_exponent_equation(13, 12, case)}
    assert found == ref.SOLUTIONS[case]


def test_classification_counts():
    a = classify_solution_types(13, 12, "A")
    assert len(a["by_k"]["5"]) == ref.PATTERNS_A_K5
    assert len(a["by_k"]["1"]) == 0
    assert len(a["by_k"]["3"]) == 2
    b = classify_solution_types(13, 12, "B+")
    groups = {g["pattern"][0]: g["free_multisets"] for g in b["by_k"]["4"]}
    assert len(groups) == ref.PATTERNS_BPLUS_K4
    assert groups == ref.BPLUS_K4_GROUPS
    assert [g["solutions"] for g in b["by_k"]["4"] if g["pattern"][0] == -2] == [1]
    assert len(b["by_k"]["2"]) == 1 and len(b["by_k"]["6"]) == 1


def test_refutations_are_explained():
    seq = ExponentSequence("A", (12,))
    ok, why, cert = evaluate_sequence(seq, 13)
    assert not ok and cert is None and "evaluates" in why
    ok, why, cert = evaluate_sequence(seq, 12)
    assert ok and cert.length == 12


@pytest.mark.parametrize("case", CASES)
def test_sequences_fit_length(case):
    seqs = list(exponent_sequences(12, case))
    assert seqs and all(s.is_valid() and s.length == 12 for s in seqs)
    assert len(set(seqs)) == len(seqs)


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("n", [13, 17])
def test_admissibility_filter_is_sound(case, n):
    for seq in exponent_sequences(12, case):
        if not is_admissible(seq, n):
            assert not evaluate_sequence(seq, n)[0]


@given(st.integers(12, 30), st.sampled_from(CASES))
def test_every_solution_is_a_genuine_cycle(n, case):
    S = standard_set(n)
    for seq, cert in solve_exponent_equation(n, 12, case):
        assert cert.verify(S)
        assert all(a in cert.vertices for a in anchors_for_case(case, S))


def test_relation_walk_is_a_cycle():
    n = 13
    w = parse_word("c t c^-2 t c^2 t c^-2 t c")
    assert evaluate_word(w, n) == identity(n)
    # edges are g -> s g, so the walk from e grows the word on the left
    walk = [evaluate_word(w[len(w) - k:], n) for k in range(12)]
    assert CycleCert.from_walk([v.img for v in walk]) == cert_from_words(ref.CYCLE_A, n)
