"""The contraction built from the normalisation strategy, its boundary
squares, the filling algorithm for squares and re-sectioning."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .ars import Path, Strategy
from .cells import (
    MINUS,
    PLUS,
    Cell,
    Comp,
    Conn,
    Eps,
    EdgeCell,
    Formal,
    GenCell,
    Inv,
    SigmaGen,
    Square,
    Transp,
    Vertex,
    boundary,
    compose,
    degenerate,
    face,
    show,
    word,
)
from .errors import IllTyped, InvalidSection, NotComposable
from .folding import fold_square, unfold_Phi
from .normal import Verdict, nf, squares_verdict, validate_square
from .polygraph import GeneratorTable


def _conn_chain(c: Cell, top: int) -> Cell:
    """Gamma_top^- ... Gamma_1^- c."""
    for n in range(1, top + 1):
        c = Conn(n, MINUS, c)
    return c


class Contraction:
    """sigma on cells of the groupoid freely generated by a generator table.

    ``resection`` composes every image with the way back from the old normal
    form along a second section; it is ``None`` for the plain contraction.
    """

    def __init__(self, table: GeneratorTable, resection: Strategy | None = None):
        self.table = table
        self.strategy = table.strategy
        self.ctx = table.ctx
        self.resection = resection
        self._memo: dict = {}
        self._lock = threading.Lock()

    # -- sections

    def hat(self, v: str) -> str:
        if self.resection is not None:
            return self.resection.normal_form[v]
        return self.strategy.normal_form[v]

    def source_vertex(self, f: Cell) -> str:
        while f.dim > 0:
            f = face(f, 1, MINUS)
        return f.name

    # -- sigma

    def sigma(self, f: Cell) -> Cell:
        base = self._base_sigma(f)
        if self.resection is None:
            return base
        x = self.source_vertex(f)
        back = Inv(1, self.resection_path(x))
        tail = back
        for n in range(2, f.dim + 2):
            tail = Eps(n, tail)
        return compose(1, base, tail)

    def resection_path(self, v: str) -> Cell:
        """sigma at the old normal form of ``v`` computed for the new section."""
        old = self.strategy.normal_form[v]
        return self.ctx.path(self.resection.sigma_path[old])

    def _base_sigma(self, f: Cell) -> Cell:
        if f.dim == 1:
            f = nf(f)
        hit = self._memo.get(f)
        if hit is not None:
            return hit
        out = self._sigma(f)
        with self._lock:
            self._memo[f] = out
        return out

    def _sigma(self, f: Cell) -> Cell:
        s = self._base_sigma
        if isinstance(f, Vertex):
            return self.ctx.sigma_path(f.name)
        if isinstance(f, EdgeCell):
            return SigmaGen(f"σ({f.name})", self._sigma_leg(Path(f.source, (f.name,))))
        leg = self._path_leg(f)
        if leg is not None:
            return SigmaGen(f"σ({leg})", self._sigma_leg(leg))
        if isinstance(f, GenCell):
            return SigmaGen(f"σ({show(f)})", self._sigma_gen(f))
        if isinstance(f, SigmaGen):
            return s(f.body)
        if isinstance(f, Eps):
            return Eps(f.i + 1, s(f.sub))
        if isinstance(f, Conn):
            return Conn(f.i + 1, f.sign, s(f.sub))
        if isinstance(f, Comp):
            return Comp(f.i + 1, s(f.a), s(f.b))
        if isinstance(f, Inv):
            return Inv(f.i + 1, s(f.sub))
        if isinstance(f, Transp):
            return Transp(f.i + 1, s(f.sub))
        if isinstance(f, Formal):
            raise IllTyped("the contraction is not defined on formal cells")
        raise IllTyped(f"no contraction rule for {f.kind}")

    def _path_leg(self, f: Cell) -> Path | None:
        """In paths mode a composite forward path that is a table leg is a generator."""
        if f.dim != 1 or not isinstance(f, Comp) or self.table.mode != "paths":
            return None
        w = word(f)
        if not all(fwd and isinstance(a, EdgeCell) for a, fwd in w.steps):
            return None
        p = Path(w.start, tuple(a.name for a, _ in w.steps))
        eta = Path(w.start, (self.strategy.eta[w.start],))
        return p if (eta, p) in self.table else None

    def _sigma_leg(self, p: Path) -> Cell:
        v = p.start
        eta = Path(v, (self.strategy.eta[v],))
        x1 = self.table.system.end(eta)
        if p == eta:
            return compose(1, Conn(1, MINUS, self.ctx.path(p)), Eps(2, self.ctx.sigma_path(x1)))
        gen = self.table.lookup((eta, p))
        return compose(1, gen, Conn(1, MINUS, self.ctx.sigma_path(x1)))

    def _sigma_gen(self, A: GenCell) -> Cell:
        v = A.source
        k = A.dim
        eta = Path(v, (self.strategy.eta[v],))
        x1 = self.table.system.end(eta)
        sig = self.ctx.sigma_path(x1)
        if A.legs[0] == eta:
            return compose(1, Conn(1, MINUS, A), Eps(2, _conn_chain(sig, k - 1)))
        bigger = self.table.lookup((eta,) + A.legs)
        return compose(1, bigger, _conn_chain(sig, k))

    # -- boundaries

    def boundary_square(self, f: Cell) -> Square:
        x = self.source_vertex(f)
        if f.dim == 0:
            return Square(0, ((f, Vertex(self.hat(x))),))
        faces = [(f, degenerate(self.hat(x), f.dim))]
        for i in range(2, f.dim + 2):
            faces.append((self.sigma(face(f, i - 1, MINUS)), self.sigma(face(f, i - 1, PLUS))))
        return Square(f.dim, tuple(faces))


# ---------------------------------------------------------------- filling squares


@dataclass
class Filling:
    square: Square
    folded_square: Square
    g_minus: Cell
    g_plus: Cell
    A: Cell
    B: Cell
    verified: bool


def fill_square(C: Contraction, S: Square, bound: int = 4) -> Filling:
    """Fill an (m-1)-square through the folded square and the contraction."""
    m = S.k + 1
    if m > bound:
        raise ValueError(f"squares of dimension {S.k} exceed the configured bound {bound}")
    check = validate_square(S)
    if not check:
        raise NotComposable(f"not a valid square: {check}")
    T = fold_square("Phi", m, S)
    g_minus, g_plus = T.face(1, MINUS), T.face(1, PLUS)
    A = compose(1, C.sigma(g_minus), Inv(1, C.sigma(g_plus)))
    B = unfold_Phi(m, S, A)
    ok = squares_verdict(boundary(B), S) is Verdict.EQUAL
    return Filling(S, T, g_minus, g_plus, A, B, ok)


def resection(C: Contraction, new_section: Strategy) -> Contraction:
    """Contraction for another section with the same normal-form classes."""
    for v, n in new_section.normal_form.items():
        if v not in C.strategy.normal_form:
            raise InvalidSection(f"unknown vertex {v}")
        p = new_section.sigma_path[v]
        if p.start != v or C.table.system.end(p) != n:
            raise InvalidSection(f"sigma path at {v} does not end at {n}")
        old = C.strategy.normal_form[v]
        if new_section.normal_form[old] != n:
            raise InvalidSection(f"{v} and its normal form {old} are sent to different representatives")
    for n in set(new_section.normal_form.values()):
        if new_section.normal_form[n] != n or new_section.sigma_path[n].steps:
            raise InvalidSection(f"section is not unital at {n}")
    return Contraction(C.table, resection=new_section)
