import pytest
from hypothesis import given, strategies as st

from cayleyaut.perm import (
    Permutation,
    PermutationError,
    compose,
    compose_all,
    conjugate,
    cycle_decomposition,
    cycle_type,
    format_cycles,
    format_oneline,
    identity,
    inverse,
    n_cycle,
    order,
    parity,
    parse_permutation,
    phi_involution,
    power,
    support,
    transposition,
)
from oracles import sym, sym_compose, sym_conjugate


def perms(n_min=1, n_max=12):
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.permutations(range(n)).map(lambda p: Permutation(tuple(p)))
    )


def same_degree(k, n_min=1, n_max=12):
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.tuples(*[st.permutations(range(n)).map(lambda p: Permutation(tuple(p)))] * k)
    )


def test_product_applies_left_factor_first():
    p = Permutation.from_cycles(3, [(1, 2)])
    q = Permutation.from_cycles(3, [(2, 3)])
    # 1 -> 2 under p, then 2 -> 3 under q
    assert compose(p, q)(1) == 3
    assert format_cycles(p * q) == "(1 3 2)"


@pytest.mark.parametrize("n", [4, 13, 50])
def test_conjugates_of_the_transposition(n):
    c, t = n_cycle(n), transposition(n, 1, 2)
    assert conjugate(t, c) == transposition(n, 2, 3)
    assert conjugate(t, power(c, 2)) == transposition(n, 3, 4)
    assert conjugate(t, inverse(c)) == transposition(n, n, 1)


def test_conjugate_is_g_inverse_p_g():
    p = Permutation.from_cycles(5, [(1, 2, 3)])
    g = Permutation.from_cycles(5, [(1, 4), (2, 5)])
    assert conjugate(p, g) == compose_all([inverse(g), p, g], 5)
    assert format_cycles(conjugate(p, g)) == "(3 4 5)"


def test_constructors_and_formatting():
    p = Permutation.from_images([2, 3, 1, 4])
    assert format_cycles(p) == "(1 2 3)"
    assert format_oneline(p) == "[2,3,1,4]"
    assert p.images == (2, 3, 1, 4)
    assert p.degree == 4
    assert format_cycles(identity(4)) == "()"
    assert repr(p) == "Permutation((1 2 3), n=4)"


@pytest.mark.parametrize(
    "text, n, expected",
    [
        ("(1 2)(3 13)", 13, "(1 2)(3 13)"),
        ("()", 4, "()"),
        ("e", 4, "()"),
        ("[2,1,3]", 3, "(1 2)"),
        ("(1,2,3)", 3, "(1 2 3)"),
    ],
)
def test_parse_permutation(text, n, expected):
    assert format_cycles(parse_permutation(text, n)) == expected


@pytest.mark.parametrize("text, n", [("(1 2", 3), ("(1 4)", 3), ("(1 1)", 3), ("[1,2]", 3), ("[1,1,2]", 3), ("xyz", 3)])
def test_parse_errors(text, n):
    with pytest.raises(PermutationError):
        parse_permutation(text, n)


def test_invalid_images_rejected():
    with pytest.raises(PermutationError):
        Permutation((0, 0, 1))
    with pytest.raises(PermutationError):
        compose(identity(3), identity(4))


@pytest.mark.parametrize("n", [1, 2])
def test_small_degree_cycle_and_phi_refused(n):
    with pytest.raises(PermutationError):
        n_cycle(n)
    with pytest.raises(PermutationError):
        phi_involution(n)


def test_transposition_errors():
    with pytest.raises(PermutationError):
        transposition(5, 2, 2)
    with pytest.raises(PermutationError):
        transposition(5, 0, 2)


@pytest.mark.parametrize(
    "n, expected",
    [(3, "(1 2)"), (4, "(1 2)(3 4)"), (5, "(1 2)(3 5)"), (13, "(1 2)(3 13)(4 12)(5 11)(6 10)(7 9)")],
)
def test_phi_involution(n, expected):
    phi = phi_involution(n)
    assert format_cycles(phi) == expected
    c = n_cycle(n)
    assert conjugate(c, phi) == inverse(c)
    assert conjugate(transposition(n, 1, 2), phi) == transposition(n, 1, 2)


def test_cycle_queries():
    p = Permutation.from_cycles(7, [(3, 1, 5), (6, 7)])
    assert cycle_decomposition(p) == [(1, 5, 3), (6, 7)]
    assert cycle_type(p) == (1, 1, 2, 3)
    assert support(p) == frozenset({1, 3, 5, 6, 7})
    assert order(p) == 6
    assert parity(p) == 1
    assert order(identity(5)) == 1


def test_negative_power():
    c = n_cycle(9)
    assert power(c, -2) == inverse(power(c, 2))
    assert c ** 9 == identity(9)
    assert ~c == inverse(c)


@given(same_degree(3))
def test_associativity(ps):
    p, q, r = ps
    assert compose(compose(p, q), r) == compose(p, compose(q, r))


@given(same_degree(2))
def test_matches_sympy_product(ps):
    p, q = ps
    assert compose(p, q).img == sym_compose(p.img, q.img)
    assert conjugate(p, q).img == sym_conjugate(p.img, q.img)


@given(perms())
def test_inverse_and_identity(p):
    e = identity(p.degree)
    assert compose(p, inverse(p)) == e == compose(inverse(p), p)
    assert compose(p, e) == p
    assert inverse(inverse(p)) == p


@given(same_degree(2))
def test_parity_homomorphism(ps):
    p, q = ps
    assert parity(compose(p, q)) == (parity(p) + parity(q)) % 2


@given(same_degree(2))
def test_conjugation_preserves_cycle_type(ps):
    p, g = ps
    assert cycle_type(conjugate(p, g)) == cycle_type(p)


@given(perms())
def test_order_and_parity_match_sympy(p):
    s = sym(p.img)
    assert order(p) == s.order()
    assert parity(p) == s.parity()
    assert power(p, order(p)).is_identity()


@given(perms(), st.integers(-30, 30), st.integers(-30, 30))
def test_power_laws(p, a, b):
    assert compose(power(p, a), power(p, b)) == power(p, a + b)


@given(perms())
def test_format_parse_roundtrip(p):
    assert parse_permutation(format_cycles(p), p.degree) == p
    assert parse_permutation(format_oneline(p), p.degree) == p
