import pytest

from injwords import Alphabet, HomologyGroup, LabeledWord, verify_dd_zero
from injwords.complex import restrict_complex
from injwords.filtration import (
    check_null_homotopy,
    d1_top,
    decomposition_iso,
    e1_page,
    filtered_subcomplex,
    graded_quotient,
    level,
    null_homotopy,
    null_homotopy_matrices,
    preserves_filtration,
    vanishing_lines,
)
from injwords.homology import homology_at

GRID = [(n, l) for n in range(1, 5) for l in (1, 2)]


def test_level():
    w = LabeledWord((2, 1, 3), (0, 0, 0))
    assert level(w, 1) == 2 and level(w, 2) == 1 and level(w, 4) == 0


def test_f0_of_two_letters(complexes):
    f0 = filtered_subcomplex(complexes(2, 1), 1, 0)
    assert [len(b) for b in f0.bases] == [1, 1, 0]


@pytest.mark.parametrize("n,labels", GRID)
def test_f0_is_restriction_and_filtration_exhausts(complexes, n, labels):
    c = complexes(n, labels)
    for a in range(1, n + 1):
        f0 = filtered_subcomplex(c, a, 0)
        small = restrict_complex(Alphabet(n, labels), {a})
        for r in small.degrees:
            assert f0.basis(r) == small.basis(r)
            if r:
                assert f0.boundary(r) == small.boundary(r)
        top = filtered_subcomplex(c, a, n)
        assert top.bases == c.bases and top.boundaries == c.boundaries


def test_differential_respects_levels(complexes):
    c = complexes(3, 2)
    for a in range(1, 4):
        assert preserves_filtration(c, a)
        for p in range(4):
            assert verify_dd_zero(filtered_subcomplex(c, a, p))


def test_quotient_at_top_level(complexes):
    q = graded_quotient(complexes(2, 1), 1, 2)
    assert q.basis(2) == [LabeledWord((2, 1), (0, 0))]
    assert q.basis(1) == [] and q.basis(0) == []
    assert q.boundary(2).is_zero()


def test_quotient_bases_partition(complexes):
    c = complexes(3, 2)
    for a in range(1, 4):
        for r in c.degrees:
            parts = [filtered_subcomplex(c, a, 0).basis(r)] + [
                graded_quotient(c, a, p).basis(r) for p in range(1, 4)
            ]
            flat = [w for part in parts for w in part]
            assert sorted(flat) == sorted(c.basis(r)) and len(set(flat)) == len(flat)


def test_quotients_square_to_zero(complexes):
    c = complexes(4, 1)
    for a in range(1, 5):
        for p in range(1, 5):
            assert verify_dd_zero(graded_quotient(c, a, p))


def test_decomposition_counts(complexes):
    rep = decomposition_iso(complexes(3, 1), 3, 1)
    assert rep.summand_count == rep.expected_summand_count == 1
    rep = decomposition_iso(complexes(3, 2), 1, 3)
    assert rep.summand_count == rep.expected_summand_count == 16


@pytest.mark.parametrize("n,labels", GRID)
def test_decomposition_verified(complexes, n, labels):
    c = complexes(n, labels)
    for a in range(1, n + 1):
        for p in range(1, n + 1):
            rep = decomposition_iso(c, a, p)
            assert rep.bijective and rep.twisted_iso and rep.plain_commutes_up_to_sign
            assert rep.verified and rep.counterexample is None


def test_plain_bijection_needs_sign_for_odd_levels(complexes):
    # p = 1 on three letters: the suffix sits one place to the right, so the
    # unsigned bijection anticommutes with the differentials
    rep = decomposition_iso(complexes(3, 1), 1, 1)
    assert not rep.plain_commutes
    assert rep.plain_commutes_up_to_sign and rep.twisted_iso
    rep = decomposition_iso(complexes(3, 1), 1, 2)
    assert rep.plain_commutes


def test_e1_examples(complexes):
    page = {(e.p, e.q): e.group for e in e1_page(complexes(3, 1), 3)}
    assert page[0, 2] == HomologyGroup(1)
    assert page[1, 2] == HomologyGroup(1)
    page2 = e1_page(complexes(2, 1), 1)
    assert all(e.group.is_zero for e in page2 if e.p + e.q < 2)
    for e in page2:
        assert 0 <= e.p <= 2 and 0 <= e.p + e.q <= 2


@pytest.mark.parametrize("n,labels", GRID)
def test_e1_vanishing_lines(complexes, n, labels):
    c = complexes(n, labels)
    for a in range(1, n + 1):
        page = e1_page(c, a)
        assert vanishing_lines(page, n) == (True, True)
        # column 0 is the homology of the smaller complex
        small = restrict_complex(Alphabet(n, labels), {a})
        for e in page:
            if e.p == 0 and e.q < n:
                assert e.group == homology_at(small, e.q)


def test_d1_examples(complexes):
    rep = d1_top(complexes(3, 1), 3)
    assert rep.matrix.to_dense() == [[1]]
    assert rep.cokernel.is_zero
    rep = d1_top(complexes(2, 2), 1)
    assert rep.matrix.to_dense() == [[1, 1]]
    assert rep.blocks_identity and rep.surjective and rep.spans_e1


@pytest.mark.parametrize("n,labels", GRID)
def test_d1_identity_blocks(complexes, n, labels):
    c = complexes(n, labels)
    for a in range(1, n + 1):
        rep = d1_top(c, a)
        assert rep.blocks_identity and rep.spans_e1
        assert rep.surjective and rep.cokernel == HomologyGroup()
        assert rep.matrix.cols == labels * rep.summand_rank


def test_null_homotopy_words():
    alpha = Alphabet(2, 2)
    assert null_homotopy(alpha, 1, LabeledWord((2,), (1,))) == LabeledWord((1, 2), (0, 1))
    assert null_homotopy(alpha, 1, LabeledWord()) == LabeledWord((1,), (0,))
    with pytest.raises(ValueError):
        null_homotopy(alpha, 1, LabeledWord((1,), (0,)))


def test_null_homotopy_by_hand():
    # d s(w) + s d(w) = w for w = (2|g) with a = 1
    alpha = Alphabet(2, 1)
    full, small, S, I = null_homotopy_matrices(alpha, 1)
    w = LabeledWord((2,), (0,))
    col = small.index(1)[w]
    ds = full.boundary(2).matvec(S[1].column(col))
    assert full.words_of(1, ds) == {LabeledWord((2,), (0,)): 1, LabeledWord((1,), (0,)): -1}
    sd = S[0].matvec(small.boundary(1).column(col))
    assert full.words_of(1, sd) == {LabeledWord((1,), (0,)): 1}


@pytest.mark.parametrize("n,labels", GRID + [(4, 2)])
def test_null_homotopy_identity(n, labels):
    for a in range(1, n + 1):
        rep = check_null_homotopy(Alphabet(n, labels), a)
        assert rep.holds, rep.per_degree


def test_bad_letter(complexes):
    with pytest.raises(ValueError):
        e1_page(complexes(2, 1), 5)
    with pytest.raises(ValueError):
        graded_quotient(complexes(2, 1), 1, 0)
