"""Labeled injective words and their face maps.

Letters are the integers ``1..n`` and labels the integers ``0..l-1``; label
``0`` is the distinguished element ``e``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import perm
from typing import Iterable, Sequence


class DegreeError(ValueError):
    """A degree or face index outside the admissible range."""


@dataclass(frozen=True)
class Alphabet:
    n: int
    labels: int = 1

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"alphabet size must be >= 0, got {self.n}")
        if self.labels < 1:
            raise ValueError(f"label count must be >= 1, got {self.labels}")

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def count(self, r: int) -> int:
        """Number of generators of length ``r``."""
        if not 0 <= r <= self.n:
            return 0
        return perm(self.n, r) * self.labels**r


@dataclass(frozen=True, order=True)
class LabeledWord:
    letters: tuple[int, ...] = ()
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        # accept lists from callers, store tuples
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.letters) != len(self.labels):
            raise ValueError("letters and labels must have equal length")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError(f"letters must be pairwise distinct: {self.letters}")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "()"
        return "({}|{})".format(
            ",".join(map(str, self.letters)), ",".join(map(str, self.labels))
        )

    @classmethod
    def parse(cls, text: str) -> "LabeledWord":
        """Inverse of ``str``: ``"(1,2|0,1)"`` or ``"()"``."""
        text = text.strip()
        if text == "()":
            return cls()
        m = re.fullmatch(r"\(([\d,\s]+)\|([\d,\s]+)\)", text)
        if m is None:
            raise ValueError(f"not a labeled word: {text!r}")
        letters = [int(x) for x in m.group(1).split(",")]
        labels = [int(x) for x in m.group(2).split(",")]
        return cls(tuple(letters), tuple(labels))

    def prepend(self, letter: int, label: int) -> "LabeledWord":
        return LabeledWord((letter,) + self.letters, (label,) + self.labels)

    def position(self, letter: int) -> int:
        """1-based position of ``letter``, or 0 if it does not occur."""
        try:
            return self.letters.index(letter) + 1
        except ValueError:
            return 0


EMPTY = LabeledWord()


def words_over(letters: Sequence[int], labels: int, r: int) -> list[LabeledWord]:
    """Generators of length ``r`` over an arbitrary letter set, in lex order."""
    letters = sorted(letters)
    if not 0 <= r <= len(letters):
        raise DegreeError(f"degree {r} outside 0..{len(letters)}")
    label_tuples = list(itertools.product(range(labels), repeat=r))
    return [
        LabeledWord(arr, lab)
        for arr in itertools.permutations(letters, r)
        for lab in label_tuples
    ]


def enumerate_generators(alpha: Alphabet, r: int) -> list[LabeledWord]:
    """All generators of degree ``r`` in canonical (lexicographic) order.

    ``itertools.permutations`` of a sorted input is already lexicographic,
    and labels vary fastest, so letters are compared before labels.
    """
    return words_over(alpha.letters, alpha.labels, r)


def face(w: LabeledWord, j: int) -> LabeledWord:
    """Delete entry ``j + 1`` (1-based) from both letters and labels."""
    r = len(w)
    if not 0 <= j < r:
        raise DegreeError(f"face index {j} out of range for word of length {r}")
    return LabeledWord(
        w.letters[:j] + w.letters[j + 1:], w.labels[:j] + w.labels[j + 1:]
    )


def boundary_terms(w: LabeledWord, start: int = 0) -> Iterable[tuple[int, LabeledWord]]:
    """Signed faces ``(-1)**j * face(w, j)`` for ``j >= start``."""
    for j in range(start, len(w)):
        yield (-1 if j % 2 else 1), face(w, j)
