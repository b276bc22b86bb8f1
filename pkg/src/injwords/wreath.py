"""Finite wreath products ``S_n`` semidirect ``G^n`` and the derangement count.

An element ``(pi; g_1, ..., g_n)`` acts on letter/label pairs by
``(a, x) -> (pi(a), g_a * x)`` and on words entrywise. The product

    (pi; g) * (sigma; h) = (pi o sigma; a -> g_{sigma(a)} * h_a)

is the one that makes this a left action.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb, factorial
from pathlib import Path
from typing import Iterator, Sequence

from .words import LabeledWord, face


class GroupTableError(ValueError):
    """A multiplication table violating one of the group axioms."""

    def __init__(self, axiom: str, detail: str):
        super().__init__(f"{axiom} fails: {detail}")
        self.axiom = axiom


class BudgetError(RuntimeError):
    pass


class FiniteGroup:
    """A group on ``0..order-1`` given by its table, identity at ``0``."""

    def __init__(self, table: Sequence[Sequence[int]], name: str = ""):
        self.table = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self.name = name or f"group of order {self.order}"
        self._validate()
        self.inverse = tuple(
            next(y for y in range(self.order) if self.table[x][y] == 0) for x in range(self.order)
        )

    def _validate(self):
        n = self.order
        if n == 0:
            raise GroupTableError("nonempty", "table has no elements")
        for i, row in enumerate(self.table):
            if len(row) != n:
                raise GroupTableError("closure", f"row {i} has length {len(row)}, expected {n}")
            bad = [v for v in row if not 0 <= v < n]
            if bad:
                raise GroupTableError("closure", f"row {i} contains {bad[0]} outside 0..{n - 1}")
        t = self.table
        for x in range(n):
            if t[0][x] != x or t[x][0] != x:
                raise GroupTableError("identity", f"0 is not neutral for {x}")
        for x, y, z in itertools.product(range(n), repeat=3):
            if t[t[x][y]][z] != t[x][t[y][z]]:
                raise GroupTableError("associativity", f"({x}*{y})*{z} != {x}*({y}*{z})")
        for x in range(n):
            if not any(t[x][y] == 0 and t[y][x] == 0 for y in range(n)):
                raise GroupTableError("inverse", f"{x} has no two-sided inverse")

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    @classmethod
    def cyclic(cls, order: int) -> "FiniteGroup":
        if order < 1:
            raise ValueError(f"cyclic group order must be >= 1, got {order}")
        return cls([[(x + y) % order for y in range(order)] for x in range(order)], f"Z/{order}")

    @classmethod
    def from_json(cls, doc: dict) -> "FiniteGroup":
        """``{"order": k, "table": [[...]], "identity": i}``; relabels so ``i -> 0``."""
        table = doc["table"]
        order = doc.get("order", len(table))
        if order != len(table):
            raise GroupTableError("closure", f"order {order} but table has {len(table)} rows")
        e = doc.get("identity", 0)
        if not 0 <= e < order:
            raise GroupTableError("identity", f"identity index {e} outside 0..{order - 1}")
        # swap labels 0 and e
        relabel = list(range(order))
        relabel[0], relabel[e] = e, 0
        try:
            new = [[relabel[table[relabel[x]][relabel[y]]] for y in range(order)] for x in range(order)]
        except (IndexError, TypeError) as exc:
            raise GroupTableError("closure", f"malformed table ({exc})") from None
        return cls(new, doc.get("name", ""))

    @classmethod
    def parse(cls, spec: str) -> "FiniteGroup":
        """``cyclic:k`` or ``file:PATH``."""
        kind, _, arg = spec.partition(":")
        if kind == "cyclic":
            return cls.cyclic(int(arg))
        if kind == "file":
            return cls.from_json(json.loads(Path(arg).read_text()))
        raise ValueError(f"unknown group spec {spec!r}; use cyclic:k or file:PATH")


@dataclass(frozen=True)
class WreathElement:
    pi: tuple[int, ...]  # one-line notation: pi[a-1] = pi(a)
    gs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "pi", tuple(self.pi))
        object.__setattr__(self, "gs", tuple(self.gs))
        if sorted(self.pi) != list(range(1, len(self.pi) + 1)):
            raise ValueError(f"{self.pi} is not a permutation of 1..{len(self.pi)}")
        if len(self.gs) != len(self.pi):
            raise ValueError("need one group element per letter")

    @property
    def n(self) -> int:
        return len(self.pi)

    @classmethod
    def identity(cls, n: int) -> "WreathElement":
        return cls(tuple(range(1, n + 1)), (0,) * n)


def cycle(n: int, points: Sequence[int]) -> tuple[int, ...]:
    """One-line form of the cycle ``(points[0] points[1] ... points[-1])``."""
    img = list(range(1, n + 1))
    for i, x in enumerate(points):
        img[x - 1] = points[(i + 1) % len(points)]
    return tuple(img)


def wreath_multiply(G: FiniteGroup, u: WreathElement, v: WreathElement) -> WreathElement:
    if u.n != v.n:
        raise ValueError(f"cannot multiply elements of G_{u.n} and G_{v.n}")
    pi = tuple(u.pi[s - 1] for s in v.pi)
    gs = tuple(G.mul(u.gs[v.pi[a] - 1], v.gs[a]) for a in range(v.n))
    return WreathElement(pi, gs)


def wreath_inverse(G: FiniteGroup, u: WreathElement) -> WreathElement:
    inv = [0] * u.n
    for a, b in enumerate(u.pi, start=1):
        inv[b - 1] = a
    return WreathElement(tuple(inv), tuple(G.inverse[u.gs[inv[a] - 1]] for a in range(u.n)))


def act_on_point(G: FiniteGroup, u: WreathElement, point: tuple[int, int]) -> tuple[int, int]:
    a, x = point
    return u.pi[a - 1], G.mul(u.gs[a - 1], x)


def act_on_word(G: FiniteGroup, u: WreathElement, w: LabeledWord) -> LabeledWord:
    return LabeledWord(
        tuple(u.pi[a - 1] for a in w.letters),
        tuple(G.mul(u.gs[a - 1], x) for a, x in zip(w.letters, w.labels)),
    )


def elements(G: FiniteGroup, n: int) -> Iterator[WreathElement]:
    """All ``n! * |G|**n`` elements, permutation-major."""
    for pi in itertools.permutations(range(1, n + 1)):
        for gs in itertools.product(range(G.order), repeat=n):
            yield WreathElement(pi, gs)


def group_order(G: FiniteGroup, n: int) -> int:
    return factorial(n) * G.order**n


def basepoint(n: int, r: int) -> LabeledWord:
    """``x_r = (n-r+1, ..., n | e, ..., e)``."""
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
    return LabeledWord(tuple(range(n - r + 1, n + 1)), (0,) * r)


def orbit(G: FiniteGroup, n: int, w: LabeledWord) -> set[LabeledWord]:
    return {act_on_word(G, u, w) for u in elements(G, n)}


@dataclass
class StabilizerReport:
    r: int
    elements: list[WreathElement]
    matches_small_wreath: bool
    expected_size: int

    @property
    def ok(self) -> bool:
        return self.matches_small_wreath and len(self.elements) == self.expected_size


def stabilizer(G: FiniteGroup, n: int, r: int) -> StabilizerReport:
    """Stabilizer of ``x_r``, compared with the copy of ``G_{n-r}`` on ``1..n-r``."""
    x = basepoint(n, r)
    stab = [u for u in elements(G, n) if act_on_word(G, u, x) == x]
    fixed = range(n - r + 1, n + 1)
    small = [
        u for u in elements(G, n) if all(u.pi[a - 1] == a and u.gs[a - 1] == 0 for a in fixed)
    ]
    return StabilizerReport(
        r=r,
        elements=stab,
        matches_small_wreath=set(stab) == set(small),
        expected_size=factorial(n - r) * G.order ** (n - r),
    )


@dataclass
class ConjugationReport:
    n: int
    r: int
    i: int
    moves_face_to_basepoint: bool
    centralizes_stabilizer: bool
    witness: WreathElement | None = None

    @property
    def ok(self) -> bool:
        return self.moves_face_to_basepoint and self.centralizes_stabilizer


def conjugation_check(G: FiniteGroup, n: int, r: int, i: int) -> ConjugationReport:
    """With ``y = face(x_r, i-1)`` and ``t`` the cycle ``(n-r+1 ... n-r+i)``
    carrying trivial labels, check ``t.y = x_{r-1}`` and that ``t`` commutes
    with every element of ``Stab(x_r)``.
    """
    if not 1 <= i <= r <= n:
        raise ValueError(f"need 1 <= i <= r <= n, got i={i}, r={r}, n={n}")
    y = face(basepoint(n, r), i - 1)
    t = WreathElement(cycle(n, range(n - r + 1, n - r + i + 1)), (0,) * n)
    t_inv = wreath_inverse(G, t)
    moves = act_on_word(G, t, y) == basepoint(n, r - 1)
    witness = None
    for u in stabilizer(G, n, r).elements:
        if wreath_multiply(G, wreath_multiply(G, t, u), t_inv) != u:
            witness = u
            break
    return ConjugationReport(n, r, i, moves, witness is None, witness)


def derangement_formula(labels: int, n: int) -> int:
    """``sum_{i=0}^{n} (-1)^i * n!/i! * labels^(n-i)``, exactly."""
    if labels < 1 or n < 0:
        raise ValueError("need labels >= 1 and n >= 0")
    return sum((-1) ** i * (factorial(n) // factorial(i)) * labels ** (n - i) for i in range(n + 1))


DEFAULT_BUDGET = 2_000_000


def fixed_point_free_count(G: FiniteGroup, n: int, budget: int = DEFAULT_BUDGET) -> int:
    """Brute-force count of elements of ``G_n`` fixing no pair ``(a, x)``."""
    size = group_order(G, n)
    if size > budget:
        raise BudgetError(f"|G_{n}| = {size} exceeds budget {budget}")
    points = [(a, x) for a in range(1, n + 1) for x in range(G.order)]
    return sum(
        1 for u in elements(G, n) if all(act_on_point(G, u, pt) != pt for pt in points)
    )


def fixed_point_condition_count(labels: int, n: int) -> int:
    """Count ``(pi, x_1..x_n)`` with ``x_a != e`` wherever ``pi(a) = a``."""
    total = 0
    for pi in itertools.permutations(range(1, n + 1)):
        fixed = sum(1 for a, b in enumerate(pi, start=1) if a == b)
        total += (labels - 1) ** fixed * labels ** (n - fixed)
    return total


def intersection_size(labels: int, n: int, subset: Sequence[int]) -> int:
    """Brute-force size of the set of ``(pi, x)`` with ``pi(a) = a`` and
    ``x_a = e`` for every ``a`` in ``subset``.
    """
    count = 0
    for pi in itertools.permutations(range(1, n + 1)):
        if any(pi[a - 1] != a for a in subset):
            continue
        for xs in itertools.product(range(labels), repeat=n):
            if all(xs[a - 1] == 0 for a in subset):
                count += 1
    return count


def intersection_count_check(labels: int, n: int, subset: Sequence[int]) -> bool:
    subset = sorted(set(subset))
    if not subset or not set(subset) <= set(range(1, n + 1)):
        raise ValueError(f"subset must be a nonempty subset of 1..{n}")
    i = len(subset)
    return intersection_size(labels, n, subset) == factorial(n - i) * labels ** (n - i)


def inclusion_exclusion_total(labels: int, n: int) -> int:
    """``|S_n x G^n| - |T_1 u ... u T_n|`` from the intersection sizes."""
    union = sum(
        (-1) ** (i + 1) * comb(n, i) * factorial(n - i) * labels ** (n - i) for i in range(1, n + 1)
    )
    return factorial(n) * labels**n - union
