"""The chain complex of labeled injective words.

A word of length ``r`` sits in degree ``r`` and

    d(w) = sum_{i=1}^{r} (-1)**(i-1) * face(w, i-1),

so the complex on ``n`` letters is concentrated in degrees ``0..n``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .linalg import SparseIntMatrix
from .words import Alphabet, LabeledWord, boundary_terms, words_over

# bump whenever basis ordering changes; it is part of every cache key
BASIS_ORDER_VERSION = 1


@dataclass
class ChainComplex:
    """Graded bases plus boundary matrices ``D_r : C_r -> C_{r-1}``.

    ``boundaries[r]`` is present for every degree ``r`` above the bottom one.
    ``alpha`` is ``None`` for derived complexes (filtration pieces, quotients).
    """

    bottom_degree: int
    bases: list[list[LabeledWord]]
    boundaries: dict[int, SparseIntMatrix]
    alpha: Optional[Alphabet] = None
    letters: tuple[int, ...] = ()
    labels: int = 1
    note: str = ""
    _index: dict = field(default_factory=dict, repr=False, compare=False)
    _snf: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def top_degree(self) -> int:
        return self.bottom_degree + len(self.bases) - 1

    @property
    def degrees(self) -> range:
        return range(self.bottom_degree, self.top_degree + 1)

    def basis(self, r: int) -> list[LabeledWord]:
        if r not in self.degrees:
            return []
        return self.bases[r - self.bottom_degree]

    def rank(self, r: int) -> int:
        return len(self.basis(r))

    def index(self, r: int) -> dict[LabeledWord, int]:
        """Word -> column position in degree ``r``."""
        if r not in self._index:
            self._index[r] = {w: k for k, w in enumerate(self.basis(r))}
        return self._index[r]

    def boundary(self, r: int) -> SparseIntMatrix:
        """``D_r``, or the zero map of the right shape outside the stored range."""
        if r in self.boundaries:
            return self.boundaries[r]
        return SparseIntMatrix.zero(self.rank(r - 1), self.rank(r))

    def chain(self, r: int, coeffs: dict[LabeledWord, int]) -> dict[int, int]:
        idx = self.index(r)
        return {idx[w]: v for w, v in coeffs.items() if v}

    def words_of(self, r: int, vec: dict[int, int]) -> dict[LabeledWord, int]:
        basis = self.basis(r)
        return {basis[k]: v for k, v in vec.items() if v}

    def to_json(self) -> dict:
        return {
            "basis_order_version": BASIS_ORDER_VERSION,
            "n": self.alpha.n if self.alpha else None,
            "labels": self.labels,
            "letters": list(self.letters),
            "bottom_degree": self.bottom_degree,
            "degrees": list(self.degrees),
            "bases": {str(r): [str(w) for w in self.basis(r)] for r in self.degrees},
            "boundaries": {
                str(r): {"shape": list(m.shape), "triplets": [list(t) for t in m.triplets()]}
                for r, m in sorted(self.boundaries.items())
            },
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ChainComplex":
        bottom = doc["bottom_degree"]
        degrees = doc["degrees"]
        bases = [[LabeledWord.parse(s) for s in doc["bases"][str(r)]] for r in degrees]
        boundaries = {
            int(r): SparseIntMatrix(*m["shape"], [tuple(t) for t in m["triplets"]])
            for r, m in doc["boundaries"].items()
        }
        n = doc.get("n")
        return cls(
            bottom_degree=bottom,
            bases=bases,
            boundaries=boundaries,
            alpha=Alphabet(n, doc["labels"]) if n is not None else None,
            letters=tuple(doc.get("letters", ())),
            labels=doc["labels"],
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def boundary_matrix(
    source: Sequence[LabeledWord], target_index: dict[LabeledWord, int], n_target: int
) -> SparseIntMatrix:
    """Alternating-sum differential, dropping faces that are not in the target."""
    m = SparseIntMatrix(n_target, len(source))
    ent = m.entries
    for col, w in enumerate(source):
        for sign, f in boundary_terms(w):
            row = target_index.get(f)
            if row is not None:
                ent[row, col] = ent.get((row, col), 0) + sign
    m.entries = {k: v for k, v in ent.items() if v}
    return m


def complex_on(letters: Iterable[int], labels: int, alpha: Optional[Alphabet] = None) -> ChainComplex:
    letters = tuple(sorted(letters))
    bases = [words_over(letters, labels, r) for r in range(len(letters) + 1)]
    c = ChainComplex(0, bases, {}, alpha=alpha, letters=letters, labels=labels)
    for r in range(1, len(bases)):
        c.boundaries[r] = boundary_matrix(bases[r], c.index(r - 1), len(bases[r - 1]))
    return c


def build_complex(alpha: Alphabet) -> ChainComplex:
    return complex_on(alpha.letters, alpha.labels, alpha)


def restrict_complex(alpha: Alphabet, removed: Iterable[int]) -> ChainComplex:
    """The complex on ``1..n`` minus ``removed``; letters keep their names."""
    removed = set(removed)
    if not removed <= set(alpha.letters):
        raise ValueError(f"cannot remove {sorted(removed)} from 1..{alpha.n}")
    kept = [a for a in alpha.letters if a not in removed]
    return complex_on(kept, alpha.labels)


def suspension(c: ChainComplex, p: int) -> ChainComplex:
    """Shift every degree up by ``p``; bases and matrices are untouched."""
    if p < 1:
        raise ValueError(f"suspension needs p >= 1, got {p}")
    return ChainComplex(
        bottom_degree=c.bottom_degree + p,
        bases=c.bases,
        boundaries={r + p: m for r, m in c.boundaries.items()},
        alpha=None,
        letters=c.letters,
        labels=c.labels,
        note=f"suspension^{p}" + (f" of {c.note}" if c.note else ""),
    )


def verify_dd_zero(c: ChainComplex) -> bool:
    for r in c.degrees:
        if r - 1 in c.boundaries and r in c.boundaries:
            if not (c.boundaries[r - 1] @ c.boundaries[r]).is_zero():
                return False
    return True
