"""Expression trees for cells of the free cubical omega-groupoid over a
polygraph, with structural face computation.

Cells are hash-consed: building the same expression twice returns the same
object, so identity comparison is structural comparison and caches can key on
cells directly.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

from .ars import Path, RewritingSystem, Strategy, Zigzag
from .errors import DimensionMismatch, IllTyped, IndexOutOfRange, NotComposable

MINUS, PLUS = "-", "+"
SIGNS = (MINUS, PLUS)


def flip(s: str) -> str:
    return PLUS if s == MINUS else MINUS


_TABLE: dict = {}
_LOCK = threading.Lock()


def _intern(key, build):
    c = _TABLE.get(key)
    if c is None:
        c = build()
        with _LOCK:
            c = _TABLE.setdefault(key, c)
    return c


class Cell:
    __slots__ = ("dim",)
    kind = "cell"

    def __repr__(self):
        return show(self)

    def __reduce__(self):
        raise TypeError("cells are interned; serialise with to_json")


class Vertex(Cell):
    __slots__ = ("name",)
    kind = "vertex"

    def __new__(cls, name: str):
        def build():
            c = object.__new__(cls)
            c.name, c.dim = name, 0
            return c

        return _intern((cls, name), build)


class EdgeCell(Cell):
    __slots__ = ("name", "source", "target")
    kind = "edge"

    def __new__(cls, name: str, source: str, target: str):
        def build():
            c = object.__new__(cls)
            c.name, c.source, c.target, c.dim = name, source, target, 1
            return c

        return _intern((cls, name, source, target), build)


class GenCell(Cell):
    """A confluence generator with k nonempty legs sharing a source.

    ``leg_cells`` are the legs as 1-cells and ``tails`` the strategy paths at
    the leg targets, both fixed by the ambient system when the generator is
    created. ``normal_legs`` flags the legs equal to the normalisation path of
    the source; a generator with such a leg is degenerate and carries no
    content.
    """

    __slots__ = ("legs", "leg_cells", "tails", "normal_legs")
    kind = "gen"

    def __new__(cls, legs: tuple[Path, ...], leg_cells: tuple[Cell, ...], tails: tuple[Cell, ...],
                normal_legs: tuple[bool, ...] = ()):
        def build():
            if len(legs) < 2 or not (len(legs) == len(leg_cells) == len(tails)):
                raise IllTyped("a generator needs at least two legs")
            if len({p.start for p in legs}) != 1 or any(len(p) == 0 for p in legs):
                raise IllTyped("generator legs must be nonempty paths with a common source")
            c = object.__new__(cls)
            c.legs, c.leg_cells, c.tails, c.dim = legs, leg_cells, tails, len(legs)
            c.normal_legs = normal_legs or (False,) * len(legs)
            return c

        return _intern((cls, legs, leg_cells, tails, normal_legs), build)

    @property
    def degenerate(self) -> bool:
        return any(self.normal_legs)

    @property
    def source(self) -> str:
        return self.legs[0].start


class Formal(Cell):
    """A formal filler of a prescribed square; its faces are read off the square."""

    __slots__ = ("square", "label")
    kind = "formal"

    def __new__(cls, square: "Square", label: str = "A"):
        def build():
            c = object.__new__(cls)
            c.square, c.label, c.dim = square, label, square.k + 1
            return c

        return _intern((cls, square, label), build)


class SigmaGen(Cell):
    """Provenance wrapper around the expanded contraction image of a generator."""

    __slots__ = ("label", "body")
    kind = "sigma"

    def __new__(cls, label: str, body: Cell):
        def build():
            c = object.__new__(cls)
            c.label, c.body, c.dim = label, body, body.dim
            return c

        return _intern((cls, label, body), build)


class Eps(Cell):
    __slots__ = ("i", "sub")
    kind = "eps"

    def __new__(cls, i: int, sub: Cell):
        def build():
            if not 1 <= i <= sub.dim + 1:
                raise IndexOutOfRange(f"eps_{i} on a {sub.dim}-cell")
            c = object.__new__(cls)
            c.i, c.sub, c.dim = i, sub, sub.dim + 1
            return c

        return _intern((cls, i, sub), build)


class Conn(Cell):
    __slots__ = ("i", "sign", "sub")
    kind = "conn"

    def __new__(cls, i: int, sign: str, sub: Cell):
        def build():
            if not 1 <= i <= sub.dim or sign not in SIGNS:
                raise IndexOutOfRange(f"Gamma_{i}^{sign} on a {sub.dim}-cell")
            c = object.__new__(cls)
            c.i, c.sign, c.sub, c.dim = i, sign, sub, sub.dim + 1
            return c

        return _intern((cls, i, sign, sub), build)


class Comp(Cell):
    __slots__ = ("i", "a", "b")
    kind = "comp"

    def __new__(cls, i: int, a: Cell, b: Cell):
        def build():
            if a.dim != b.dim:
                raise DimensionMismatch(f"composing a {a.dim}-cell with a {b.dim}-cell")
            if not 1 <= i <= a.dim:
                raise IndexOutOfRange(f"composition o_{i} of {a.dim}-cells")
            c = object.__new__(cls)
            c.i, c.a, c.b, c.dim = i, a, b, a.dim
            return c

        return _intern((cls, i, a, b), build)


class Inv(Cell):
    __slots__ = ("i", "sub")
    kind = "inv"

    def __new__(cls, i: int, sub: Cell):
        def build():
            if not 1 <= i <= sub.dim:
                raise IndexOutOfRange(f"R_{i} on a {sub.dim}-cell")
            c = object.__new__(cls)
            c.i, c.sub, c.dim = i, sub, sub.dim
            return c

        return _intern((cls, i, sub), build)


class Transp(Cell):
    __slots__ = ("i", "sub")
    kind = "transp"

    def __new__(cls, i: int, sub: Cell):
        def build():
            if not 1 <= i <= sub.dim - 1:
                raise IndexOutOfRange(f"T_{i} on a {sub.dim}-cell")
            c = object.__new__(cls)
            c.i, c.sub, c.dim = i, sub, sub.dim
            return c

        return _intern((cls, i, sub), build)


@dataclass(frozen=True)
class Square:
    """A k-square: faces[i-1] = (minus face, plus face) in direction i, for i = 1..k+1."""

    k: int
    faces: tuple[tuple[Cell, Cell], ...]

    def __post_init__(self):
        if len(self.faces) != self.k + 1:
            raise IllTyped(f"a {self.k}-square has {self.k + 1} directions")
        for pair in self.faces:
            for f in pair:
                if f.dim != self.k:
                    raise DimensionMismatch(f"face of dimension {f.dim} in a {self.k}-square")

    def face(self, i: int, sign: str) -> Cell:
        return self.faces[i - 1][0 if sign == MINUS else 1]

    def items(self):
        for i, pair in enumerate(self.faces, start=1):
            yield (i, MINUS), pair[0]
            yield (i, PLUS), pair[1]

    @classmethod
    def from_map(cls, k: int, faces: dict) -> "Square":
        return cls(k, tuple((faces[(i, MINUS)], faces[(i, PLUS)]) for i in range(1, k + 2)))


# ---------------------------------------------------------------- faces

_FACES: dict = {}


def face(c: Cell, i: int, sign: str) -> Cell:
    """The face of ``c`` in direction ``i``, computed from the axiom tables."""
    key = (c, i, sign)
    hit = _FACES.get(key)
    if hit is not None:
        return hit
    if c.dim < 1 or not 1 <= i <= c.dim:
        raise IndexOutOfRange(f"face {i}{sign} of a {c.dim}-cell")
    out = _face(c, i, sign)
    _FACES[key] = out
    return out


def _face(c: Cell, j: int, s: str) -> Cell:
    if isinstance(c, EdgeCell):
        return Vertex(c.source if s == MINUS else c.target)
    if isinstance(c, GenCell):
        k = c.dim
        if s == MINUS:
            rest = [n for n in range(k) if n != j - 1]
            if k == 2:
                return c.leg_cells[rest[0]]
            return GenCell(
                tuple(c.legs[n] for n in rest),
                tuple(c.leg_cells[n] for n in rest),
                tuple(c.tails[n] for n in rest),
                tuple(c.normal_legs[n] for n in rest),
            )
        out = c.tails[j - 1]
        for n in range(1, k - 1):
            out = Conn(n, MINUS, out)
        return out
    if isinstance(c, Formal):
        return c.square.face(j, s)
    if isinstance(c, SigmaGen):
        return face(c.body, j, s)
    if isinstance(c, Eps):
        i = c.i
        if j < i:
            return Eps(i - 1, face(c.sub, j, s))
        if j == i:
            return c.sub
        return Eps(i, face(c.sub, j - 1, s))
    if isinstance(c, Conn):
        i = c.i
        if j < i:
            return Conn(i - 1, c.sign, face(c.sub, j, s))
        if j in (i, i + 1):
            return c.sub if s == c.sign else Eps(i, face(c.sub, i, s))
        return Conn(i, c.sign, face(c.sub, j - 1, s))
    if isinstance(c, Comp):
        i = c.i
        if j < i:
            return Comp(i - 1, face(c.a, j, s), face(c.b, j, s))
        if j == i:
            return face(c.a, i, MINUS) if s == MINUS else face(c.b, i, PLUS)
        return Comp(i, face(c.a, j, s), face(c.b, j, s))
    if isinstance(c, Inv):
        i = c.i
        if j < i:
            return Inv(i - 1, face(c.sub, j, s))
        if j == i:
            return face(c.sub, i, flip(s))
        return Inv(i, face(c.sub, j, s))
    if isinstance(c, Transp):
        i = c.i
        if j < i:
            return Transp(i - 1, face(c.sub, j, s))
        if j == i:
            return face(c.sub, i + 1, s)
        if j == i + 1:
            return face(c.sub, i, s)
        return Transp(i, face(c.sub, j, s))
    raise IllTyped(f"no faces for {c.kind}")


def boundary(c: Cell) -> Square:
    if c.dim < 1:
        raise IndexOutOfRange("a vertex has no boundary")
    return Square(
        c.dim - 1,
        tuple((face(c, i, MINUS), face(c, i, PLUS)) for i in range(1, c.dim + 1)),
    )


def is_thin(c: Cell) -> bool:
    if isinstance(c, (Eps, Conn)):
        return True
    if isinstance(c, Comp):
        return is_thin(c.a) and is_thin(c.b)
    if isinstance(c, (Inv, Transp)):
        return is_thin(c.sub)
    if isinstance(c, SigmaGen):
        return is_thin(c.body)
    return False


def size(c: Cell) -> int:
    seen = set()
    stack = [c]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        stack.extend(children(x))
    return len(seen)


def children(c: Cell) -> tuple[Cell, ...]:
    if isinstance(c, (Eps, Conn, Inv, Transp)):
        return (c.sub,)
    if isinstance(c, Comp):
        return (c.a, c.b)
    if isinstance(c, SigmaGen):
        return (c.body,)
    return ()


# ---------------------------------------------------------------- dimension one


@dataclass(frozen=True)
class Word:
    """Reduced word of a 1-cell: oriented atoms (edges or formal 1-cells)."""

    start: str
    end: str
    steps: tuple[tuple[Cell, bool], ...]


_WORDS: dict = {}


def _endpoints(atom: Cell) -> tuple[str, str]:
    if isinstance(atom, EdgeCell):
        return atom.source, atom.target
    return atom.square.face(1, MINUS).name, atom.square.face(1, PLUS).name


def word(c: Cell) -> Word:
    """Reduced zigzag of a 1-cell in the free groupoid on its atoms."""
    if c.dim != 1:
        raise DimensionMismatch(f"expected a 1-cell, got dimension {c.dim}")
    hit = _WORDS.get(c)
    if hit is not None:
        return hit
    if isinstance(c, (EdgeCell, Formal)):
        s, t = _endpoints(c)
        out = Word(s, t, ((c, True),))
    elif isinstance(c, Eps):
        out = Word(c.sub.name, c.sub.name, ())
    elif isinstance(c, SigmaGen):
        out = word(c.body)
    elif isinstance(c, Inv):
        w = word(c.sub)
        out = Word(w.end, w.start, tuple((a, not f) for a, f in reversed(w.steps)))
    elif isinstance(c, Comp):
        u, v = word(c.a), word(c.b)
        if u.end != v.start:
            raise IllTyped(f"1-cells meet at {u.end} and {v.start}")
        stack = list(u.steps)
        for step in v.steps:
            if stack and stack[-1][0] is step[0] and stack[-1][1] != step[1]:
                stack.pop()
            else:
                stack.append(step)
        out = Word(u.start, v.end, tuple(stack))
    else:
        raise IllTyped(f"{c.kind} is not a 1-cell constructor")
    _WORDS[c] = out
    return out


def word_cell(w: Word) -> Cell:
    """Canonical 1-cell spelling of a reduced word (right-nested composites)."""
    if not w.steps:
        return Eps(1, Vertex(w.start))
    atoms = [a if fwd else Inv(1, a) for a, fwd in w.steps]
    out = atoms[-1]
    for a in reversed(atoms[:-1]):
        out = Comp(1, a, out)
    return out


def canonical_1cell(c: Cell) -> Cell:
    return word_cell(word(c))


def word_zigzag(w: Word) -> Zigzag:
    return Zigzag(w.start, tuple((_atom_name(a), fwd) for a, fwd in w.steps))


def _atom_name(a: Cell) -> str:
    return a.name if isinstance(a, EdgeCell) else a.label


def one_skeleton(c: Cell) -> dict[str, Zigzag]:
    """Reduced zigzag of every 1-dimensional face of ``c``.

    Keys mark the free direction with ``*`` and give the sign taken in every
    other direction, e.g. ``"-*+"`` for a 3-cell.
    """
    n = c.dim
    if n < 1:
        raise DimensionMismatch("a vertex has no 1-dimensional faces")
    out = {}
    for d in range(1, n + 1):
        others = [j for j in range(1, n + 1) if j != d]
        for signs in itertools.product(SIGNS, repeat=n - 1):
            chosen = dict(zip(others, signs))
            x = c
            for j in sorted(others, reverse=True):
                x = face(x, j, chosen[j])
            key = "".join("*" if j == d else chosen[j] for j in range(1, n + 1))
            out[key] = word_zigzag(word(x))
    return out


# ---------------------------------------------------------------- construction helpers


def compose(i: int, a: Cell, b: Cell) -> Cell:
    """``a o_i b`` after checking that the glued faces agree."""
    from .normal import Verdict, equal

    if a.dim != b.dim:
        raise DimensionMismatch(f"composing a {a.dim}-cell with a {b.dim}-cell")
    if not 1 <= i <= a.dim:
        raise IndexOutOfRange(f"composition o_{i} of {a.dim}-cells")
    left, right = face(a, i, PLUS), face(b, i, MINUS)
    if equal(left, right) is not Verdict.EQUAL:
        raise NotComposable(f"o_{i}: {show(left)} does not match {show(right)}")
    return Comp(i, a, b)


def compose_all(i: int, cells: Sequence[Cell]) -> Cell:
    out = cells[0]
    for c in cells[1:]:
        out = compose(i, out, c)
    return out


def invert(i: int, c: Cell) -> Cell:
    return Inv(i, c)


def transpose(i: int, c: Cell) -> Cell:
    return Transp(i, c)


def eps_chain(c: Cell, indices: Iterable[int]) -> Cell:
    """Apply eps_i for each i in order (innermost first)."""
    for i in indices:
        c = Eps(i, c)
    return c


def degenerate(v: str, dim: int) -> Cell:
    """The identity ``dim``-cell on a vertex."""
    c: Cell = Vertex(v)
    for _ in range(dim):
        c = Eps(1, c)
    return c


class Context:
    """Resolves names of a rewriting system into cells."""

    def __init__(self, system: RewritingSystem, strat: Strategy | None = None):
        self.system = system
        self.strategy = strat

    def vertex(self, v: str) -> Cell:
        if v not in self.system.rule_order:
            raise IllTyped(f"unknown vertex {v}")
        return Vertex(v)

    def edge(self, name: str) -> Cell:
        e = self.system.edge(name)
        return EdgeCell(e.name, e.source, e.target)

    def path(self, p: Path) -> Cell:
        w = Word(p.start, self.system.end(p), tuple((self.edge(e), True) for e in p.steps))
        return word_cell(w)

    def zigzag(self, z: Zigzag) -> Cell:
        c: Cell = Eps(1, Vertex(z.start))
        for name, fwd in z.steps:
            e = self.edge(name)
            c = Comp(1, c, e if fwd else Inv(1, e))
        return canonical_1cell(c)

    def sigma_path(self, v: str) -> Cell:
        return self.path(self.strategy.sigma_path[v])

    def gen(self, legs: Sequence[Path]) -> GenCell:
        legs = tuple(legs)
        return GenCell(
            legs,
            tuple(self.path(p) for p in legs),
            tuple(self.sigma_path(self.system.end(p)) for p in legs),
            tuple(p == self.strategy.sigma_path[p.start] for p in legs),
        )


# ---------------------------------------------------------------- display


def show(c: Cell) -> str:
    if isinstance(c, Vertex):
        return c.name
    if isinstance(c, EdgeCell):
        return c.name
    if isinstance(c, GenCell):
        return f"A{c.dim}<" + ",".join(str(p) for p in c.legs) + ">"
    if isinstance(c, Formal):
        return f"[{c.label}]"
    if isinstance(c, SigmaGen):
        return c.label
    if isinstance(c, Eps):
        return f"e{c.i}({show(c.sub)})"
    if isinstance(c, Conn):
        return f"G{c.i}{c.sign}({show(c.sub)})"
    if isinstance(c, Comp):
        return f"({show(c.a)} o{c.i} {show(c.b)})"
    if isinstance(c, Inv):
        return f"R{c.i}({show(c.sub)})"
    if isinstance(c, Transp):
        return f"T{c.i}({show(c.sub)})"
    return "?"
