import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubecoh.ars import Path
from cubecoh.cells import MINUS, PLUS, SIGNS, Eps, Inv, Square, Vertex, boundary, compose, face
from cubecoh.contraction import Contraction
from cubecoh.errors import FoldMismatch
from cubecoh.folding import fold_Phi, fold_psi, fold_square, unfold_Phi
from cubecoh.normal import Verdict, equal, squares_verdict, validate_square
from cubecoh.polygraph import generate
from cubecoh.sampling import CellSampler, random_system


def _setup(seed):
    rng = random.Random(seed)
    R = random_system(rng)
    while not R.edges:
        R = random_system(rng)
    T = generate(R, 3, "local")
    C = Contraction(T)
    return rng, C, CellSampler(rng, T, C)


def _filler(rng, C, m, x, S):
    """Either the folded cell itself or the contraction filler of the folded square."""
    if rng.random() < 0.5:
        return fold_Phi(m, x)
    T = fold_square("Phi", m, S)
    return compose(1, C.sigma(T.face(1, MINUS)), Inv(1, C.sigma(T.face(1, PLUS))))


def test_golden_fold(golden_local):
    ctx = golden_local.ctx
    e = ctx.edge
    S = Square(1, ((e("f3"), e("g2")), (e("f2"), e("g3"))))
    T = fold_square("Phi", 2, S)
    assert equal(T.face(1, MINUS), ctx.path(Path("x", ("f3", "g3")))) is Verdict.EQUAL
    assert equal(T.face(1, PLUS), ctx.path(Path("x", ("f2", "g2")))) is Verdict.EQUAL
    assert equal(T.face(2, MINUS), Eps(1, Vertex("x"))) is Verdict.EQUAL
    assert equal(T.face(2, PLUS), Eps(1, Vertex("z"))) is Verdict.EQUAL


def test_unfold_rejects_wrong_filler(golden_local):
    e = golden_local.ctx.edge
    S = Square(1, ((e("f3"), e("g2")), (e("f2"), e("g3"))))
    wrong = golden_local.lookup((Path("x", ("f1",)), Path("x", ("f2",))))
    with pytest.raises(FoldMismatch):
        unfold_Phi(2, S, wrong)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_unfolding_lemma(data):
    rng, C, sampler = _setup(data.draw(st.integers(0, 10**6)))
    m = data.draw(st.integers(2, 4))
    x = sampler.cell(m, 2)
    S = boundary(x)
    assert validate_square(S)
    A = _filler(rng, C, m, x, S)
    B = unfold_Phi(m, S, A)
    assert squares_verdict(boundary(B), S) is Verdict.EQUAL


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_folded_square_is_degenerate_above_one(data):
    rng, C, sampler = _setup(data.draw(st.integers(0, 10**6)))
    m = data.draw(st.integers(2, 3))
    T = fold_square("Phi", m, boundary(sampler.cell(m, 2)))
    for k in range(2, m + 1):
        for a in SIGNS:
            Tk = T.face(k, a)
            assert equal(Tk, Eps(1, face(Tk, 1, MINUS))) is Verdict.EQUAL


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_phi_is_the_psi_product(data):
    rng, C, sampler = _setup(data.draw(st.integers(0, 10**6)))
    m = data.draw(st.integers(2, 3))
    x = sampler.cell(m, 2)
    k = rng.randint(1, m)
    # psi_1 (psi_2 psi_1) ... (psi_{k-1} ... psi_1), rightmost block first
    y = x
    for j in range(k, 0, -1):
        for i in range(1, j):
            y = fold_psi(i, y)
    assert squares_verdict(boundary(y), boundary(fold_Phi(k, x))) is Verdict.EQUAL
