"""Integral homology of bounded chain complexes via Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .complex import ChainComplex
from .linalg import SmithForm, SparseIntMatrix, kernel_basis, smith_normal_form
from .words import DegreeError

# invariant-factor provider taking (matrix, degree), e.g. a disk cache
SnfFn = Callable[[SparseIntMatrix, int], tuple]


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if any(t <= 1 for t in self.torsion):
            raise ValueError("torsion coefficients must exceed 1")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def invariant_factors(c: ChainComplex, r: int, snf: Optional[SnfFn] = None) -> tuple[int, ...]:
    """Invariant factors of ``D_r``, memoized on the complex."""
    if r not in c._snf:
        m = c.boundary(r)
        if m.is_zero():
            c._snf[r] = ()
        elif snf is not None:
            c._snf[r] = tuple(snf(m, r))
        else:
            c._snf[r] = smith_normal_form(m).diag
    return c._snf[r]


def homology_at(c: ChainComplex, r: int, snf: Optional[SnfFn] = None) -> HomologyGroup:
    """``H_r = ker D_r / im D_{r+1}``."""
    if r not in c.degrees:
        raise DegreeError(f"degree {r} outside {c.bottom_degree}..{c.top_degree}")
    out_rank = len(invariant_factors(c, r, snf)) if r > c.bottom_degree else 0
    into = invariant_factors(c, r + 1, snf) if r < c.top_degree else ()
    return HomologyGroup(
        free_rank=c.rank(r) - out_rank - len(into),
        torsion=tuple(d for d in into if d > 1),
    )


def betti_table(c: ChainComplex, snf: Optional[SnfFn] = None) -> list[HomologyGroup]:
    return [homology_at(c, r, snf) for r in c.degrees]


def euler_characteristic(c: ChainComplex) -> int:
    return sum((-1) ** r * c.rank(r) for r in c.degrees)


@dataclass
class HomologyBasis:
    """Explicit generators of the free part of ``H_r``.

    ``cycles`` is a ``rank(r) x free_rank`` matrix whose columns are cycle
    representatives. ``coordinates`` maps any cycle to its class.
    """

    degree: int
    group: HomologyGroup
    cycles: SparseIntMatrix
    _kernel: SparseIntMatrix
    _kernel_snf: SmithForm
    _quotient_snf: SmithForm

    def coordinates(self, vec: dict[int, int]) -> tuple[list[int], list[int]]:
        """Class of a cycle as (free coordinates, torsion residues).

        Raises ``ValueError`` if ``vec`` is not a cycle.
        """
        # kernel coordinates: K = V[:, rank:], so y = (V^-1 x)[rank:]
        ks = self._kernel_snf
        full = ks.V_inv.matvec(vec)
        if any(i < ks.rank for i in full):
            raise ValueError("vector is not a cycle")
        y = {i - ks.rank: v for i, v in full.items()}
        z = self._quotient_snf.U.matvec(y)
        diag = self._quotient_snf.diag
        torsion = [z.get(i, 0) % d for i, d in enumerate(diag) if d > 1]
        k = self._kernel.cols
        free = [z.get(i, 0) for i in range(len(diag), k)]
        return free, torsion


def homology_basis(c: ChainComplex, r: int) -> HomologyBasis:
    """Cycle representatives for ``H_r`` built from SNF transforms.

    Kernel of ``D_r`` comes from the column transform of its SNF. Boundaries
    ``D_{r+1}`` are rewritten in kernel coordinates and diagonalized again;
    the trailing columns of the inverse row transform give free generators.
    """
    if r not in c.degrees:
        raise DegreeError(f"degree {r} outside {c.bottom_degree}..{c.top_degree}")
    K, ks = kernel_basis(c.boundary(r))
    B = c.boundary(r + 1)
    # express each boundary column in kernel coordinates
    b_in_k = SparseIntMatrix(K.cols, B.cols)
    proj = ks.V_inv @ B
    for (i, j), v in proj.entries.items():
        if i < ks.rank:
            raise AssertionError("boundary is not a cycle; d o d != 0")
        b_in_k.entries[i - ks.rank, j] = v
    qs = smith_normal_form(b_in_k, want_transforms=True)
    free_cols = range(qs.rank, K.cols)
    gens_in_k = qs.U_inv.submatrix(range(K.cols), free_cols)
    cycles = K @ gens_in_k
    group = HomologyGroup(K.cols - qs.rank, tuple(d for d in qs.diag if d > 1))
    return HomologyBasis(r, group, cycles, K, ks, qs)
