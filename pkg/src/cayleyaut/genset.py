"""Connection sets, words over {c, c^-1, t}, and group closure."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .perm import (
    Permutation,
    PermutationError,
    compose_all,
    format_cycles,
    identity,
    inverse,
    n_cycle,
    parse_permutation,
    transposition,
)

C, CINV, T = "C", "CINV", "T"
LETTERS = (C, CINV, T)

DEFAULT_CLOSURE_CAP = 40_000_000


class GenSetError(ValueError):
    pass


class ClosureOverflow(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"closure exceeded cap of {cap} elements")
        self.cap = cap


@dataclass(frozen=True)
class GenSet:
    """Ordered, inverse-closed, identity-free connection set."""

    degree: int
    elements: tuple[Permutation, ...]
    labels: tuple[str, ...]
    kind: str = "custom"
    transposition: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if len(self.elements) != len(self.labels):
            raise GenSetError("labels and elements differ in length")
        if not self.elements:
            raise GenSetError("empty connection set")
        for s in self.elements:
            if s.degree != self.degree:
                raise GenSetError(f"element {s} has degree {s.degree}, expected {self.degree}")
            if s.is_identity():
                raise GenSetError("connection set contains the identity")
        if len(set(self.elements)) != len(self.elements):
            raise GenSetError("connection set has duplicates")
        members = set(self.elements)
        for s in self.elements:
            if inverse(s) not in members:
                raise GenSetError(f"inverse of {s} missing from connection set")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def index(self, p: Permutation) -> int:
        return self.elements.index(p)

    def inverse_index(self) -> tuple[int, ...]:
        """For each position j, the position of elements[j]^-1."""
        return tuple(self.elements.index(inverse(s)) for s in self.elements)

    def by_label(self, label: str) -> Permutation:
        return self.elements[self.labels.index(label)]

    def describe(self) -> str:
        if self.kind == "standard":
            return "standard"
        if self.kind == "variant":
            return f"variant:{self.transposition[0]}"
        return "custom:" + ";".join(format_cycles(s) for s in self.elements)


def standard_set(n: int) -> GenSet:
    if n < 3:
        raise GenSetError(f"n must be >= 3, got {n}")
    c = n_cycle(n)
    return GenSet(n, (c, inverse(c), transposition(n, 1, 2)), (C, CINV, T), "standard", (1, 2))


def variant_set(n: int, i: int) -> GenSet:
    """{c_n, c_n^-1, (i i+1)}; i = 1 gives the standard set."""
    if n < 3:
        raise GenSetError(f"n must be >= 3, got {n}")
    if not 1 <= i <= n - 1:
        raise GenSetError(f"variant index must satisfy 1 <= i <= n-1, got {i}")
    if i == 1:
        return standard_set(n)
    c = n_cycle(n)
    return GenSet(n, (c, inverse(c), transposition(n, i, i + 1)), (C, CINV, T), "variant", (i, i + 1))


def custom_set(n: int, perms: Sequence[Permutation]) -> GenSet:
    labels = tuple(f"s{k + 1}" for k in range(len(perms)))
    return GenSet(n, tuple(perms), labels, "custom")


def parse_genset(spec: str, n: int) -> GenSet:
    """Parse ``standard``, ``variant:i`` or ``custom:(1 2);(1 2 3);(1 3 2)``."""
    s = spec.strip()
    if s == "standard":
        return standard_set(n)
    if s.startswith("variant:"):
        try:
            i = int(s.split(":", 1)[1])
        except ValueError as exc:
            raise GenSetError(f"bad variant index in {spec!r}") from exc
        return variant_set(n, i)
    if s.startswith("custom:"):
        body = s.split(":", 1)[1].strip().strip('"')
        parts = [p for p in re.split(r"[;,]\s*(?=[(\[]|e\b)", body) if p.strip()]
        try:
            perms = [parse_permutation(p, n) for p in parts]
        except PermutationError as exc:
            raise GenSetError(str(exc)) from exc
        return custom_set(n, perms)
    raise GenSetError(f"unknown generator-set spec {spec!r}")


Word = tuple[str, ...]

_TOKEN_RE = re.compile(r"^(c-|c|t)(?:\^(-?\d+))?$")


def parse_word(text: str) -> Word:
    """Tokens ``c``, ``c-``, ``t``; ``c^k`` / ``c^-k`` expand to |k| letters."""
    letters: list[str] = []
    for tok in text.split():
        m = _TOKEN_RE.match(tok)
        if not m:
            raise GenSetError(f"bad word token {tok!r}")
        base, exp = m.group(1), m.group(2)
        k = 1 if exp is None else int(exp)
        if base == "t":
            letters.extend([T] * abs(k))
            continue
        letter = C if base == "c" else CINV
        if k < 0:
            letter = CINV if letter == C else C
        letters.extend([letter] * abs(k))
    return tuple(letters)


def format_word(w: Word) -> str:
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        run = j - i
        if w[i] == T:
            out.extend(["t"] * run)
        else:
            sign = "" if w[i] == C else "-"
            out.append("c" if run == 1 and not sign else f"c^{sign}{run}")
        i = j
    return " ".join(out)


def letter_values(n: int, tau: tuple[int, int] = (1, 2)) -> dict[str, Permutation]:
    c = n_cycle(n)
    return {C: c, CINV: inverse(c), T: transposition(n, *tau)}


def evaluate_word(w: Word, n: int, tau: tuple[int, int] = (1, 2)) -> Permutation:
    """Product of the letters as written; the leftmost letter applies first."""
    if n < 3:
        raise GenSetError(f"n must be >= 3, got {n}")
    vals = letter_values(n, tau)
    return compose_all((vals[x] for x in w), n)


def power_word(k: int) -> Word:
    return (C,) * k if k >= 0 else (CINV,) * (-k)


@dataclass(frozen=True)
class Relation:
    name: str
    word: Word
    min_n: int


def _w(text: str) -> Word:
    return parse_word(text)


# Identity relations behind the 12-cycles through the identity vertex.
RELATIONS: tuple[Relation, ...] = (
    Relation("ecc", _w("c t c^-2 t c^2 t c^-2 t c"), 4),
    Relation("etc-a", _w("c^-2 t c^2 t c^-2 t c^2 t"), 4),
    Relation("etc-b", _w("c^-1 t c t c^-1 t c t c^-1 t c t"), 3),
    Relation("etci-a", _w("c^2 t c^-2 t c^2 t c^-2 t"), 4),
    Relation("etci-b", _w("c t c^-1 t c t c^-1 t c t c^-1 t"), 3),
)


def check_relations(n: int) -> dict[str, bool | None]:
    """Evaluate each relation word; None marks n below the relation's floor."""
    report: dict[str, bool | None] = {}
    for rel in RELATIONS:
        if n < rel.min_n:
            report[rel.name] = None
        else:
            report[rel.name] = evaluate_word(rel.word, n).is_identity()
    return report


def closure(gens: Iterable[Permutation], cap: int = DEFAULT_CLOSURE_CAP) -> list[Permutation]:
    """All elements generated by ``gens`` in BFS discovery order from the identity.

    Neighbours of x are x*g for g in generator order. Raises ClosureOverflow
    rather than returning a truncated group.
    """
    gens = list(gens)
    if not gens:
        raise GenSetError("closure needs at least one generator")
    n = gens[0].degree
    if any(g.degree != n for g in gens):
        raise GenSetError("generators have mixed degrees")
    gimgs = [g.img for g in gens]
    start = identity(n).img
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for gi in gimgs:
            y = tuple(gi[i] for i in x)
            if y not in seen:
                if len(seen) >= cap:
                    raise ClosureOverflow(cap)
                seen.add(y)
                order.append(y)
                queue.append(y)
    return [Permutation(p) for p in order]
