"""Exact homology of the labeled complex of injective words."""

from .words import Alphabet, LabeledWord, enumerate_generators, face
from .linalg import SparseIntMatrix, SmithForm, smith_normal_form
from .complex import (
    ChainComplex,
    build_complex,
    restrict_complex,
    suspension,
    verify_dd_zero,
)
from .homology import HomologyGroup, betti_table, euler_characteristic, homology_at

__all__ = [
    "Alphabet",
    "LabeledWord",
    "enumerate_generators",
    "face",
    "SparseIntMatrix",
    "SmithForm",
    "smith_normal_form",
    "ChainComplex",
    "build_complex",
    "restrict_complex",
    "suspension",
    "verify_dd_zero",
    "HomologyGroup",
    "betti_table",
    "euler_characteristic",
    "homology_at",
]
