"""Normalising confluence fillers: local and Newman fillers for 2-branchings,
Church-Rosser fillers for zigzags, 3-confluence fillers, residuals, the cube
law and the Squier witness filling a square of zigzags."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .ars import Branching, Path, Zigzag, reduce_zigzag
from .cells import (
    MINUS,
    PLUS,
    Cell,
    Conn,
    Eps,
    Inv,
    Square,
    Transp,
    boundary,
    compose,
    compose_all,
    degenerate,
    face,
    word,
    word_zigzag,
)
from .errors import DifferentSources, IllTyped, NotComposable
from .normal import Verdict, squares_verdict
from .polygraph import GeneratorTable


def _check_common_source(legs) -> str:
    sources = {p.start for p in legs}
    if len(sources) != 1:
        raise DifferentSources("legs " + ", ".join(f"{p} from {p.start}" for p in legs))
    return sources.pop()


class Confluence:
    """Fillers over a generator table, all of normalising shape.

    A 2-filler of (f, g) has top g, left f, bottom sigma at the end of f and
    right sigma at the end of g.
    """

    def __init__(self, table: GeneratorTable, fill=None):
        self.table = table
        self.system = table.system
        self.strategy = table.strategy
        self.ctx = table.ctx
        # fills the degenerate base cases of 3-branchings (repeated or empty legs)
        self._fill = fill
        self._a2: dict = {}
        self._a3: dict = {}
        self._cr: dict = {}

    # -- helpers

    def sigma(self, v: str) -> Path:
        return self.strategy.sigma_path[v]

    def as_path(self, c: Cell) -> Path:
        w = word(c)
        if not all(fwd for _, fwd in w.steps):
            raise IllTyped(f"{word_zigzag(w)} is not a rewriting path")
        return Path(w.start, tuple(a.name for a, _ in w.steps))

    def _diagonal(self, f: Path) -> Cell:
        y = self.system.end(f)
        return compose(1, Conn(1, MINUS, self.ctx.path(f)), Conn(1, PLUS, self.ctx.path(self.sigma(y))))

    # -- 2-branchings

    def local_filler(self, f: Path, g: Path) -> Cell:
        _check_common_source((f, g))
        if not f.steps:
            return Eps(1, self.ctx.path(g))
        if not g.steps:
            return Eps(2, self.ctx.path(f))
        if f == g:
            return self._diagonal(f)
        if (f, g) in self.table:
            return self.table.lookup((f, g))
        if (g, f) in self.table:
            return Transp(1, self.table.lookup((g, f)))
        return self.newman_extend(Branching(f.start, (f, g)))

    def newman_extend(self, b: Branching) -> Cell:
        f1, f2 = b.legs
        _check_common_source((f1, f2))
        key = (f1, f2)
        hit = self._a2.get(key)
        if hit is None:
            hit = self._newman(f1, f2)
            self._a2[key] = hit
        return hit

    def _newman(self, f1: Path, f2: Path) -> Cell:
        x = f1.start
        ctx = self.ctx
        if f1 == f2:
            return self._diagonal(f1)
        if not f1.steps:
            if f2 == self.sigma(x):
                return Eps(1, ctx.path(f2))
            return compose(2, Conn(1, PLUS, ctx.path(self.sigma(x))), self.church_rosser(Zigzag.of_path(f2)))
        if not f2.steps:
            if f1 == self.sigma(x):
                return Eps(2, ctx.path(f1))
            return Transp(1, self._newman(f2, f1))
        if len(f1) == 1 and len(f2) == 1:
            return self.local_filler(f1, f2)
        g1, h1 = Path(x, f1.steps[:1]), Path(self.system.end(Path(x, f1.steps[:1])), f1.steps[1:])
        g2, h2 = Path(x, f2.steps[:1]), Path(self.system.end(Path(x, f2.steps[:1])), f2.steps[1:])
        first = self.local_filler(g1, g2)
        second = self.newman_extend(Branching(h2.start, (self.sigma(h2.start), h2)))
        top = compose(2, first, second)
        third = self.newman_extend(Branching(h1.start, (h1, self.sigma(h1.start))))
        return compose(1, top, third)

    def residual(self, f: Path, g: Path) -> Path:
        """f|g: the right side of the normalising filler of (f, g)."""
        _check_common_source((f, g))
        return self.as_path(face(self.newman_extend(Branching(f.start, (f, g))), 2, PLUS))

    # -- Church-Rosser

    def _edge_filler(self, name: str) -> Cell:
        """Normalising Church-Rosser filler of a single forward edge."""
        e = self.system.edge(name)
        eta = self.strategy.eta[e.source]
        x1 = self.system.edge(eta).target
        tail = self.ctx.path(self.sigma(x1))
        if name == eta:
            return compose(1, Conn(1, MINUS, self.ctx.edge(name)), Eps(2, tail))
        filler = self.local_filler(Path(e.source, (eta,)), Path(e.source, (name,)))
        return compose(1, filler, Conn(1, MINUS, tail))

    def church_rosser(self, z: Zigzag) -> Cell:
        z = reduce_zigzag(z, self.system)
        hit = self._cr.get(z)
        if hit is None:
            hit = self._church_rosser(z)
            self._cr[z] = hit
        return hit

    def _church_rosser(self, z: Zigzag) -> Cell:
        ctx = self.ctx
        if not z.steps:
            return Eps(2, ctx.path(self.sigma(z.start)))
        (name, fwd), rest = z.steps[0], z.steps[1:]
        e = self.system.edge(name)
        if fwd:
            head = self._edge_filler(name)
            if not rest:
                return head
            return compose(2, head, self.church_rosser(Zigzag(e.target, rest)))
        if not rest:
            return Inv(2, self._edge_filler(name))
        # backward head: the step runs x <- x' along e
        tail = self.church_rosser(Zigzag(e.source, rest))
        g = self.sigma(e.source)
        A = self.newman_extend(Branching(e.source, (Path(e.source, (name,)), g)))
        row1 = compose_all(2, [Eps(1, Inv(1, ctx.edge(name))), Conn(1, PLUS, ctx.path(g)), tail])
        row2 = compose(2, Inv(2, Conn(1, MINUS, ctx.edge(name))), A)
        row3 = Conn(1, MINUS, face(A, 1, PLUS))
        return compose(1, compose(1, row1, row2), row3)

    # -- 3-branchings

    def target_square_3(self, b: Branching) -> Square:
        """Faces a 3-confluence filler of ``b`` must have."""
        f1, f2, f3 = b.legs
        _check_common_source(b.legs)
        A = lambda p, q: self.newman_extend(Branching(p.start, (p, q)))  # noqa: E731
        a12, a13, a23 = A(f1, f2), A(f1, f3), A(f2, f3)
        P = self.as_path
        faces = (
            (a23, A(P(face(a12, 1, PLUS)), P(face(a13, 1, PLUS)))),
            (a13, A(P(face(a12, 2, PLUS)), P(face(a23, 1, PLUS)))),
            (a12, A(P(face(a13, 2, PLUS)), P(face(a23, 2, PLUS)))),
        )
        return Square(2, faces)

    def fill_3_branching(self, b: Branching) -> Cell:
        _check_common_source(b.legs)
        if len(b.legs) != 3:
            raise ValueError("a 3-branching has three legs")
        hit = self._a3.get(b.legs)
        if hit is None:
            hit = self._fill3(b)
            target = self.target_square_3(b)
            v = squares_verdict(boundary(hit), target)
            if v is not Verdict.EQUAL:
                raise NotComposable(f"3-filler of {b} does not have the prescribed faces ({v.value})")
            self._a3[b.legs] = hit
        return hit

    def _fill3(self, b: Branching) -> Cell:
        legs = b.legs
        if any(not p.steps for p in legs) or (b.is_local and len(set(legs)) < 3):
            return self._degenerate_fill(b)
        if b.is_local:
            return self._local3(legs)
        x = b.source
        P = self.as_path
        split = []
        for p in legs:
            head = Path(x, p.steps[:1])
            split.append((head, Path(self.system.end(head), p.steps[1:])))
        (g1, h1), (g2, h2), (g3, h3) = split
        B = self.fill_3_branching(Branching(x, (g1, g2, g3)))
        C = self._fill_or_unit(P(face(face(B, 3, PLUS), 2, MINUS)), P(face(face(B, 3, PLUS), 1, MINUS)), h3)
        BC = compose(3, B, C)
        D = self._fill_or_unit(P(face(face(B, 2, PLUS), 2, MINUS)), h2, P(face(face(BC, 2, PLUS), 1, MINUS)))
        BCD = compose(2, BC, D)
        E = self._fill_or_unit(h1, P(face(face(BCD, 1, PLUS), 2, MINUS)), P(face(face(BCD, 1, PLUS), 1, MINUS)))
        return compose(1, BCD, E)

    def _fill_or_unit(self, p: Path, q: Path, r: Path) -> Cell:
        return self.fill_3_branching(Branching(p.start, (p, q, r)))

    def _local3(self, legs: tuple[Path, ...]) -> Cell:
        order = sorted(range(3), key=lambda n: self.system.rank(legs[n].steps[0]))
        ordered = tuple(legs[n] for n in order)
        cell = self.table.lookup(ordered)
        # bubble the sorted legs into the requested order; T_i swaps legs i, i+1
        current = list(order)
        target = list(range(3))
        for end in range(2, 0, -1):
            for i in range(end):
                if current[i] > current[i + 1]:
                    current[i], current[i + 1] = current[i + 1], current[i]
                    cell = Transp(i + 1, cell)
        assert current == target
        return cell

    def _degenerate_fill(self, b: Branching) -> Cell:
        if self._fill is None:
            raise NotComposable(f"no filler for the degenerate 3-branching {b}")
        return self._fill(self.target_square_3(b))

    # -- cube law

    def check_cube_law(self, b: Branching) -> "CubeLawReport":
        legs = b.legs
        _check_common_source(legs)
        res = {}
        for i, j in itertools.permutations(range(3), 2):
            res[(i + 1, j + 1)] = self.residual(legs[i], legs[j])
        report = CubeLawReport(b, res)
        for i, j, k in itertools.permutations(range(3), 3):
            lhs = self.residual(res[(i + 1, j + 1)], res[(k + 1, j + 1)])
            rhs = self.residual(res[(i + 1, k + 1)], res[(j + 1, k + 1)])
            report.instances.append(((i + 1, j + 1, k + 1), lhs, rhs))
            if lhs != rhs:
                report.failures.append(f"({i+1},{j+1},{k+1}): {lhs} != {rhs}")
        if b.is_local and len(set(legs)) == 3 and tuple(sorted(legs, key=lambda p: self.system.rank(p.steps[0]))) in self.table:
            A3 = self.fill_3_branching(b)
            a = self.as_path(face(face(A3, 2, PLUS), 2, PLUS))
            c = self.as_path(face(face(A3, 3, PLUS), 2, PLUS))
            report.face_route = (a, c)
            # the face route computes (f1|f2)|(f3|f2) and (f1|f3)|(f2|f3)
            expected = {inst: (lhs, rhs) for inst, lhs, rhs in report.instances}[(1, 2, 3)]
            if a != c or (a, c) != expected:
                report.failures.append(f"face route: {a}, {c} against residuals {expected[0]}, {expected[1]}")
        return report

    # -- Squier

    def squier_witness(self, S: Square) -> Cell:
        """Fill a 1-square of zigzags with the 3x3 pasting of Church-Rosser fillers."""
        if S.k != 1:
            raise ValueError("the witness fills 1-squares")
        top, bottom = S.face(1, MINUS), S.face(1, PLUS)
        left, right = S.face(2, MINUS), S.face(2, PLUS)
        Z = lambda c: word_zigzag(word(c))  # noqa: E731
        ctx = self.ctx
        x, y1, y2 = word(top).start, word(left).end, word(top).end
        y = word(bottom).end
        s = lambda v: ctx.path(self.sigma(v))  # noqa: E731
        B = self.church_rosser
        row1 = compose_all(2, [Conn(1, PLUS, s(x)), B(Z(top)), Inv(2, Conn(1, PLUS, s(y2)))])
        hat = self.strategy.normal_form[x]
        row2 = compose_all(2, [Transp(1, B(Z(left))), degenerate(hat, 2), Inv(2, Transp(1, B(Z(right))))])
        row3 = compose_all(2, [Inv(1, Conn(1, PLUS, s(y1))), Inv(1, B(Z(bottom))), Inv(1, Inv(2, Conn(1, PLUS, s(y))))])
        return compose_all(1, [row1, row2, row3])


@dataclass
class CubeLawReport:
    branching: Branching
    residuals: dict
    instances: list = field(default_factory=list)
    face_route: tuple | None = None
    failures: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.failures

    def to_json(self):
        return {
            "branching": [p.to_json() for p in self.branching.legs],
            "residuals": {f"{i}|{j}": p.to_json() for (i, j), p in sorted(self.residuals.items())},
            "instances": [
                {"ijk": list(ijk), "lhs": lhs.to_json(), "rhs": rhs.to_json()} for ijk, lhs, rhs in self.instances
            ],
            "face_route": None if self.face_route is None else [p.to_json() for p in self.face_route],
            "holds": self.holds,
            "failures": list(self.failures),
        }
