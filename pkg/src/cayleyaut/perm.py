"""Permutations of {1, ..., n} with a left-to-right product.

The written product ``p * q`` applies ``p`` first and then ``q``, so
``(p * q)(x) = q(p(x))``. Every conjugate computed below relies on this.
Points are 1-based on the public surface; the image table is stored 0-based.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence


class PermutationError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Permutation:
    """A permutation stored as a 0-based image table.

    ``img[i] = j`` means point ``i + 1`` is sent to ``j + 1``.
    """

    img: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.img) != list(range(len(self.img))):
            raise PermutationError(f"not a bijection: {self.img}")

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "Permutation":
        """Build from 1-based one-line notation ``[x.p for x in 1..n]``."""
        return cls(tuple(int(v) - 1 for v in images))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 1 <= x <= n:
                    raise PermutationError(f"point {x} outside 1..{n}")
                if x in seen:
                    raise PermutationError(f"point {x} repeated in cycle notation")
                seen.add(x)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                img[a - 1] = b - 1
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.img)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(v + 1 for v in self.img)

    def __call__(self, x: int) -> int:
        return self.img[x - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Permutation":
        return power(self, k)

    def __invert__(self) -> "Permutation":
        return inverse(self)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.img))

    def __str__(self) -> str:
        return format_cycles(self)

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)}, n={self.degree})"


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return ``pq``: apply ``p`` first, then ``q``."""
    if p.degree != q.degree:
        raise PermutationError(f"degree mismatch: {p.degree} vs {q.degree}")
    qi = q.img
    return Permutation(tuple(qi[i] for i in p.img))


def compose_all(perms: Iterable[Permutation], n: int) -> Permutation:
    """Left-to-right product of ``perms`` (identity when empty)."""
    acc = tuple(range(n))
    for p in perms:
        if p.degree != n:
            raise PermutationError(f"degree mismatch: {p.degree} vs {n}")
        pi = p.img
        acc = tuple(pi[i] for i in acc)
    return Permutation(acc)


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.degree
    for i, v in enumerate(p.img):
        inv[v] = i
    return Permutation(tuple(inv))


def power(p: Permutation, k: int) -> Permutation:
    if k < 0:
        return power(inverse(p), -k)
    result = identity(p.degree)
    base = p
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def conjugate(p: Permutation, g: Permutation) -> Permutation:
    """Return ``g^-1 p g``; relabels each cycle ``(a b ...)`` of p as ``(g(a) g(b) ...)``."""
    if p.degree != g.degree:
        raise PermutationError(f"degree mismatch: {p.degree} vs {g.degree}")
    out = [0] * p.degree
    gi = g.img
    for i, v in enumerate(p.img):
        out[gi[i]] = gi[v]
    return Permutation(tuple(out))


def cycle_decomposition(p: Permutation) -> list[tuple[int, ...]]:
    """Non-trivial cycles, 1-based, each starting at its minimum, sorted by first point."""
    seen = [False] * p.degree
    cycles = []
    for start in range(p.degree):
        if seen[start] or p.img[start] == start:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x + 1)
            x = p.img[x]
        cycles.append(tuple(cyc))
    return cycles


def cycle_type(p: Permutation) -> tuple[int, ...]:
    """Sorted cycle lengths including fixed points."""
    lengths = [len(c) for c in cycle_decomposition(p)]
    lengths += [1] * (p.degree - sum(lengths))
    return tuple(sorted(lengths))


def support(p: Permutation) -> frozenset[int]:
    return frozenset(i + 1 for i, v in enumerate(p.img) if i != v)


def order(p: Permutation) -> int:
    return math.lcm(1, *(len(c) for c in cycle_decomposition(p)))


def parity(p: Permutation) -> int:
    """0 for even, 1 for odd."""
    return (p.degree - len(cycle_type(p))) % 2


def n_cycle(n: int) -> Permutation:
    """The cycle (1 2 ... n)."""
    if n < 3:
        raise PermutationError(f"n must be >= 3, got {n}")
    return Permutation(tuple((i + 1) % n for i in range(n)))


def transposition(n: int, i: int, j: int) -> Permutation:
    if i == j:
        raise PermutationError("transposition needs two distinct points")
    if not (1 <= i <= n and 1 <= j <= n):
        raise PermutationError(f"points ({i} {j}) outside 1..{n}")
    img = list(range(n))
    img[i - 1], img[j - 1] = j - 1, i - 1
    return Permutation(tuple(img))


def phi_involution(n: int) -> Permutation:
    """The involution (1 2)(3 n)(4 n-1)...: 1<->2 and k -> n+3-k for k >= 3.

    Conjugation by it fixes (1 2) and inverts the n-cycle (1 2 ... n).
    """
    if n < 3:
        raise PermutationError(f"n must be >= 3, got {n}")
    img = [1, 0] + [n + 3 - k - 1 for k in range(3, n + 1)]
    return Permutation(tuple(img))


def format_cycles(p: Permutation) -> str:
    cycles = cycle_decomposition(p)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def format_oneline(p: Permutation) -> str:
    return "[" + ",".join(map(str, p.images)) + "]"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, n: int) -> Permutation:
    """Parse cycle notation ``(1 2)(3 13)`` / ``()`` / ``e`` or one-line ``[2,1,3]``."""
    s = text.strip()
    if s in ("", "e", "()"):
        return identity(n)
    if s.startswith("["):
        if not s.endswith("]"):
            raise PermutationError(f"unterminated one-line notation: {text!r}")
        vals = [int(v) for v in re.split(r"[,\s]+", s[1:-1].strip()) if v]
        if len(vals) != n:
            raise PermutationError(f"one-line notation has {len(vals)} entries, expected {n}")
        return Permutation.from_images(vals)
    if _CYCLE_RE.sub("", s).strip():
        raise PermutationError(f"cannot parse permutation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(s):
        pts = [int(v) for v in re.split(r"[,\s]+", body.strip()) if v]
        if pts:
            cycles.append(pts)
    return Permutation.from_cycles(n, cycles)
