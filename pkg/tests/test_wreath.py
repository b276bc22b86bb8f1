import itertools
import json
from math import factorial

import pytest
from hypothesis import given, strategies as st

from injwords import Alphabet, enumerate_generators, face
from injwords.wreath import (
    BudgetError,
    FiniteGroup,
    GroupTableError,
    WreathElement,
    act_on_point,
    act_on_word,
    basepoint,
    conjugation_check,
    cycle,
    derangement_formula,
    elements,
    fixed_point_condition_count,
    fixed_point_free_count,
    group_order,
    inclusion_exclusion_total,
    intersection_count_check,
    intersection_size,
    orbit,
    stabilizer,
    wreath_inverse,
    wreath_multiply,
)

from conftest import FIXED_POINT_FREE

Z2 = FiniteGroup.cyclic(2)


def brute_derangements(n):
    return sum(all(p[i] != i for i in range(n)) for p in itertools.permutations(range(n)))


def klein_four():
    return FiniteGroup([[a ^ b for b in range(4)] for a in range(4)], "V4")


def s3_table():
    perms = list(itertools.permutations(range(3)))
    idx = {p: k for k, p in enumerate(perms)}
    return [[idx[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]


def test_cycle():
    assert cycle(4, [2, 3, 4]) == (1, 3, 4, 2)
    assert cycle(3, [2]) == (1, 2, 3)


def test_identity_multiplication():
    e = WreathElement.identity(2)
    for v in elements(Z2, 2):
        assert wreath_multiply(Z2, e, v) == v == wreath_multiply(Z2, v, e)
        assert wreath_multiply(Z2, v, wreath_inverse(Z2, v)) == e


def test_mismatched_sizes():
    with pytest.raises(ValueError):
        wreath_multiply(Z2, WreathElement.identity(2), WreathElement.identity(3))


def test_action_law_on_points_exhaustive():
    els = list(elements(Z2, 2))
    assert len(els) == 8
    points = [(a, x) for a in (1, 2) for x in (0, 1)]
    for u in els:
        for v in els:
            uv = wreath_multiply(Z2, u, v)
            for p in points:
                assert act_on_point(Z2, uv, p) == act_on_point(Z2, u, act_on_point(Z2, v, p))


@pytest.mark.parametrize("G", [Z2, FiniteGroup.cyclic(3), FiniteGroup(s3_table(), "S3")])
def test_action_law_on_words(G):
    n = 2 if G.order > 2 else 3
    els = list(elements(G, n))
    words = [w for r in range(n + 1) for w in enumerate_generators(Alphabet(n, G.order), r)]
    for u in els[:: max(1, len(els) // 12)]:
        for v in els:
            uv = wreath_multiply(G, u, v)
            for w in words[:: max(1, len(words) // 20)]:
                assert act_on_word(G, uv, w) == act_on_word(G, u, act_on_word(G, v, w))


def test_group_orders():
    for n in range(5):
        for ell in (1, 2, 3):
            G = FiniteGroup.cyclic(ell)
            els = list(elements(G, n))
            assert len(els) == len(set(els)) == factorial(n) * ell**n == group_order(G, n)


def test_identity_fixes_words_and_points():
    e = WreathElement.identity(3)
    for r in range(4):
        for w in enumerate_generators(Alphabet(3, 2), r):
            assert act_on_word(Z2, e, w) == w
    assert all(act_on_point(Z2, e, (a, x)) == (a, x) for a in (1, 2, 3) for x in (0, 1))


def test_faces_are_equivariant():
    words = [w for r in range(1, 4) for w in enumerate_generators(Alphabet(3, 2), r)]
    for u in elements(Z2, 3):
        for w in words:
            uw = act_on_word(Z2, u, w)
            for j in range(len(w)):
                assert act_on_word(Z2, u, face(w, j)) == face(uw, j)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_transitive_on_generators(r):
    assert orbit(Z2, 3, basepoint(3, r)) == set(enumerate_generators(Alphabet(3, 2), r))


def test_point_orbit():
    pts = {act_on_point(Z2, u, (1, 0)) for u in elements(Z2, 3)}
    assert len(pts) == 6


def test_stabilizer_examples():
    st0 = stabilizer(Z2, 3, 0)
    assert len(st0.elements) == 48 and st0.ok
    st1 = stabilizer(Z2, 3, 1)
    assert len(st1.elements) == 8 and st1.ok
    assert len(orbit(Z2, 3, basepoint(3, 1))) * 8 == 48
    st3 = stabilizer(Z2, 3, 3)
    assert len(st3.elements) == 1 and st3.ok


@pytest.mark.parametrize("n", range(1, 5))
def test_orbit_stabilizer(n):
    for r in range(n + 1):
        st = stabilizer(Z2, n, r)
        assert st.ok
        assert len(orbit(Z2, n, basepoint(n, r))) * len(st.elements) == group_order(Z2, n)


def test_conjugation_examples():
    rep = conjugation_check(Z2, 3, 2, 2)
    assert rep.ok
    # Stab(x_2) in G_3 is a copy of G_1: (3-2)! * 2 = 2 elements
    assert len(stabilizer(Z2, 3, 2).elements) == 2
    rep = conjugation_check(Z2, 3, 2, 1)
    assert rep.ok  # t is the identity here
    assert conjugation_check(Z2, 4, 3, 3).ok
    with pytest.raises(ValueError):
        conjugation_check(Z2, 3, 2, 3)


@pytest.mark.parametrize("n", range(1, 5))
def test_conjugation_all(n):
    for r in range(1, n + 1):
        for i in range(1, r + 1):
            assert conjugation_check(Z2, n, r, i).ok


def test_conjugation_in_nonabelian_labels():
    G = FiniteGroup(s3_table(), "S3")
    for r in range(1, 3):
        for i in range(1, r + 1):
            assert conjugation_check(G, 2, r, i).ok


def test_derangement_formula_examples():
    assert derangement_formula(1, 3) == 2 == brute_derangements(3)
    assert derangement_formula(5, 0) == 1
    assert derangement_formula(2, 2) == 5


def test_derangements_are_the_one_label_case():
    for n in range(8):
        assert derangement_formula(1, n) == brute_derangements(n)


def test_fixed_point_free_examples():
    assert fixed_point_free_count(Z2, 2) == 5
    assert fixed_point_free_count(FiniteGroup.cyclic(1), 4) == 9
    assert fixed_point_free_count(FiniteGroup.cyclic(3), 0) == 1
    with pytest.raises(BudgetError):
        fixed_point_free_count(Z2, 4, budget=10)


@pytest.mark.parametrize("n", range(5))
@pytest.mark.parametrize("ell", [1, 2, 3])
def test_three_counts_agree(n, ell):
    G = FiniteGroup.cyclic(ell)
    expected = FIXED_POINT_FREE[n, ell]
    assert fixed_point_free_count(G, n) == expected
    assert derangement_formula(ell, n) == expected
    assert fixed_point_condition_count(ell, n) == expected
    assert inclusion_exclusion_total(ell, n) == expected


def test_count_depends_only_on_order():
    assert fixed_point_free_count(klein_four(), 2) == derangement_formula(4, 2)
    assert fixed_point_free_count(FiniteGroup(s3_table()), 2) == derangement_formula(6, 2)


def test_intersection_examples():
    assert intersection_size(2, 3, [1]) == 8
    assert intersection_size(3, 3, [1, 2, 3]) == 1
    assert intersection_size(1, 4, [2, 3]) == 2
    assert intersection_count_check(2, 3, [1])
    with pytest.raises(ValueError):
        intersection_count_check(2, 3, [])


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("ell", [1, 2, 3])
def test_inclusion_exclusion_all_subsets(n, ell):
    for i in range(1, n + 1):
        for s in itertools.combinations(range(1, n + 1), i):
            assert intersection_count_check(ell, n, s)


def test_group_validation():
    with pytest.raises(GroupTableError, match="associativity"):
        FiniteGroup([[0, 1, 2], [1, 0, 1], [2, 2, 0]])
    with pytest.raises(GroupTableError, match="inverse"):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupTableError, match="closure"):
        FiniteGroup([[0, 1], [1, 2]])
    with pytest.raises(GroupTableError, match="identity"):
        FiniteGroup([[1, 0], [0, 1]])


def test_group_from_json_relabels_identity(tmp_path):
    # Z/2 written with identity at index 1
    doc = {"order": 2, "table": [[1, 0], [0, 1]], "identity": 1}
    path = tmp_path / "g.json"
    path.write_text(json.dumps(doc))
    G = FiniteGroup.parse(f"file:{path}")
    assert G.table == ((0, 1), (1, 0))
    assert FiniteGroup.parse("cyclic:3").order == 3
    with pytest.raises(ValueError):
        FiniteGroup.parse("dihedral:4")


@given(st.permutations(range(1, 5)), st.lists(st.integers(0, 2), min_size=4, max_size=4),
       st.permutations(range(1, 5)), st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_inverse_and_associativity(p, g, q, h):
    G = FiniteGroup.cyclic(3)
    u, v = WreathElement(p, g), WreathElement(q, h)
    w = wreath_multiply(G, u, v)
    assert wreath_multiply(G, wreath_multiply(G, w, wreath_inverse(G, v)), wreath_inverse(G, u)) == WreathElement.identity(4)
    assert wreath_multiply(G, u, wreath_multiply(G, v, u)) == wreath_multiply(G, w, u)
