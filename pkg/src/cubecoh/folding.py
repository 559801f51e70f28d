"""Folding maps, which push all of a cube's data into direction 1, and the
unfolding maps that rebuild a filler of the original square."""

from __future__ import annotations

from .cells import (
    MINUS,
    PLUS,
    Cell,
    Conn,
    Eps,
    Formal,
    Square,
    boundary,
    compose,
    face,
)
from .errors import FoldMismatch, IndexOutOfRange
from .normal import Verdict, squares_verdict


def fold_psi(i: int, x: Cell) -> Cell:
    m = x.dim
    if not 1 <= i <= m - 1:
        raise IndexOutOfRange(f"psi_{i} on a {m}-cell")
    left = Conn(i, PLUS, face(x, i + 1, MINUS))
    right = Conn(i, MINUS, face(x, i + 1, PLUS))
    return compose(i + 1, compose(i + 1, left, x), right)


def fold_Psi(j: int, x: Cell) -> Cell:
    if not 1 <= j <= x.dim:
        raise IndexOutOfRange(f"Psi_{j} on a {x.dim}-cell")
    for i in range(1, j):
        x = fold_psi(i, x)
    return x


def fold_Phi(k: int, x: Cell) -> Cell:
    if not 0 <= k <= x.dim:
        raise IndexOutOfRange(f"Phi_{k} on a {x.dim}-cell")
    for j in range(k, 0, -1):
        x = fold_Psi(j, x)
    return x


_FOLDS = {"psi": fold_psi, "Psi": fold_Psi, "Phi": fold_Phi}


def fold_square(kind: str, index: int, S: Square) -> Square:
    """Apply a folding map to a square by folding a formal filler of it."""
    return boundary(_FOLDS[kind](index, Formal(S)))


def _unfold_psi(i: int, S: Square, A: Cell) -> Cell:
    top = compose(i + 1, Eps(i, S.face(i, MINUS)), Conn(i, PLUS, S.face(i + 1, PLUS)))
    bottom = compose(i + 1, Conn(i, MINUS, S.face(i + 1, MINUS)), Eps(i, S.face(i, PLUS)))
    return compose(i, compose(i, top, A), bottom)


def _unfold_Psi(j: int, S: Square, A: Cell) -> Cell:
    if j == 1:
        return A
    inner = _unfold_psi(j - 1, fold_square("Psi", j - 1, S), A)
    return _unfold_Psi(j - 1, S, inner)


def _unfold_Phi(k: int, S: Square, A: Cell) -> Cell:
    if k == 0:
        return A
    return _unfold_Psi(k, S, _unfold_Phi(k - 1, fold_square("Psi", k, S), A))


def _check(kind: str, index: int, S: Square, A: Cell) -> None:
    if A.dim != S.k + 1:
        raise FoldMismatch(f"a {A.dim}-cell cannot fill a {S.k}-square")
    v = squares_verdict(boundary(A), fold_square(kind, index, S))
    if v is not Verdict.EQUAL:
        raise FoldMismatch(f"boundary of the filler is not the {kind}_{index}-folded square ({v.value})")


def unfold_psi(i: int, S: Square, A: Cell) -> Cell:
    _check("psi", i, S, A)
    return _unfold_psi(i, S, A)


def unfold_Psi(j: int, S: Square, A: Cell) -> Cell:
    _check("Psi", j, S, A)
    return _unfold_Psi(j, S, A)


def unfold_Phi(k: int, S: Square, A: Cell) -> Cell:
    _check("Phi", k, S, A)
    return _unfold_Phi(k, S, A)
