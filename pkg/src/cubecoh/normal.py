"""Tiered equality of cells.

Dimension 0 and 1 are decided exactly (vertex names, reduced words). Above
that, two cells are compared by their boundaries (recursively) and by their
generator content: the signed count of top-dimensional generators, where an
inversion or transpose flips the sign. Content is invariant under every axiom,
so different content means different cells. When the 1-dimensional part of the
ambient polygraph is simply connected once the 2-generators are added (true
for the resolution of any convergent system), cells with equal boundary and
equal content are equal: 2-cells form a free crossed module whose kernel embeds
in its abelianisation, and higher cells form free abelian groups.

Formal 1-cells break that hypothesis; cells mentioning them fall back to the
thin tier and a structural normal form (associativity, units, cancellation of
``a o_i R_i a``, inverses and transposes pushed onto generators as a signed
permutation), and whatever survives is reported as unknown.
"""

from __future__ import annotations

import enum
import threading

from .cells import (
    MINUS,
    PLUS,
    SIGNS,
    Cell,
    Comp,
    Conn,
    Eps,
    Formal,
    GenCell,
    Inv,
    SigmaGen,
    Square,
    Transp,
    canonical_1cell,
    children,
    face,
    is_thin,
    word,
)
from .errors import DimensionMismatch


class Verdict(enum.Enum):
    EQUAL = "equal"
    UNEQUAL = "unequal"
    UNKNOWN = "unknown"

    def __bool__(self):
        return self is Verdict.EQUAL


_EQ: dict = {}
_NF: dict = {}
_CONTENT: dict = {}
_FORMAL1: dict = {}
_LOCK = threading.Lock()


def equal(a: Cell, b: Cell) -> Verdict:
    if a.dim != b.dim:
        raise DimensionMismatch(f"comparing a {a.dim}-cell with a {b.dim}-cell")
    if a is b:
        return Verdict.EQUAL
    key = (a, b) if id(a) < id(b) else (b, a)
    hit = _EQ.get(key)
    if hit is not None:
        return hit
    out = _equal(a, b)
    with _LOCK:
        _EQ[key] = out
    return out


def _equal(a: Cell, b: Cell) -> Verdict:
    if a.dim == 0:
        return Verdict.EQUAL if a is b else Verdict.UNEQUAL
    if a.dim == 1:
        return Verdict.EQUAL if word(a) == word(b) else Verdict.UNEQUAL
    exact = not (has_formal_1cell(a) or has_formal_1cell(b))
    if exact and content(a) != content(b):
        return Verdict.UNEQUAL
    bnd = boundary_verdict(a, b)
    if bnd is Verdict.UNEQUAL or exact:
        return bnd
    na, nb = nf(a), nf(b)
    if na is nb:
        return Verdict.EQUAL
    if bnd is Verdict.EQUAL:
        if (is_thin(a) or is_thin(na)) and (is_thin(b) or is_thin(nb)):
            return Verdict.EQUAL
        if _same(na, nb):
            return Verdict.EQUAL
    return Verdict.UNKNOWN


def content(c: Cell) -> dict:
    """Signed count of top-dimensional generators (generator cells and formal cells)."""
    hit = _CONTENT.get(c)
    if hit is not None:
        return hit
    if isinstance(c, GenCell) and c.degenerate:
        out = {}
    elif isinstance(c, (GenCell, Formal)):
        out = {c: 1}
    elif isinstance(c, (Eps, Conn)):
        out = {}
    elif isinstance(c, SigmaGen):
        out = content(c.body)
    elif isinstance(c, (Inv, Transp)):
        out = {k: -v for k, v in content(c.sub).items()}
    elif isinstance(c, Comp):
        out = dict(content(c.a))
        for k, v in content(c.b).items():
            n = out.get(k, 0) + v
            if n:
                out[k] = n
            else:
                out.pop(k, None)
    else:
        raise TypeError(f"no generator content for {c.kind} in dimension {c.dim}")
    with _LOCK:
        _CONTENT[c] = out
    return out


def has_formal_1cell(c: Cell) -> bool:
    hit = _FORMAL1.get(c)
    if hit is not None:
        return hit
    if isinstance(c, Formal):
        out = c.dim == 1 or any(has_formal_1cell(f) for _, f in c.square.items())
    else:
        out = any(has_formal_1cell(x) for x in children(c))
    with _LOCK:
        _FORMAL1[c] = out
    return out


def boundary_verdict(a: Cell, b: Cell) -> Verdict:
    seen_unknown = False
    for i in range(1, a.dim + 1):
        for s in SIGNS:
            v = equal(face(a, i, s), face(b, i, s))
            if v is Verdict.UNEQUAL:
                return v
            seen_unknown |= v is Verdict.UNKNOWN
    return Verdict.UNKNOWN if seen_unknown else Verdict.EQUAL


def squares_verdict(s: Square, t: Square) -> Verdict:
    if s.k != t.k:
        raise DimensionMismatch(f"comparing a {s.k}-square with a {t.k}-square")
    seen_unknown = False
    for (key, f), (_, g) in zip(s.items(), t.items()):
        v = equal(f, g)
        if v is Verdict.UNEQUAL:
            return v
        seen_unknown |= v is Verdict.UNKNOWN
    return Verdict.UNKNOWN if seen_unknown else Verdict.EQUAL


def _same(x: Cell, y: Cell) -> bool:
    """Structural comparison of normal forms, matching thin blocks by boundary."""
    if x is y:
        return True
    if x.dim != y.dim or x.dim <= 1:
        return False
    tx, ty = is_thin(x), is_thin(y)
    if tx and ty:
        return boundary_verdict(x, y) is Verdict.EQUAL
    if tx or ty:
        return False
    if isinstance(x, Comp) and isinstance(y, Comp) and x.i == y.i:
        xs, ys = _items(x.i, x), _items(y.i, y)
        return len(xs) == len(ys) and all(_same(p, q) for p, q in zip(xs, ys))
    return False


# ---------------------------------------------------------------- normal form


def nf(c: Cell) -> Cell:
    hit = _NF.get(c)
    if hit is not None:
        return hit
    out = _nf(c)
    with _LOCK:
        _NF[c] = out
    return out


def _nf(c: Cell) -> Cell:
    if c.dim == 0:
        return c
    if c.dim == 1:
        return canonical_1cell(c)
    if isinstance(c, SigmaGen):
        return nf(c.body)
    if isinstance(c, Eps):
        return Eps(c.i, nf(c.sub))
    if isinstance(c, Conn):
        return Conn(c.i, c.sign, nf(c.sub))
    if isinstance(c, (GenCell, Formal)):
        return c
    if isinstance(c, Inv):
        return _act("R", c.i, nf(c.sub))
    if isinstance(c, Transp):
        return _act("T", c.i, nf(c.sub))
    if isinstance(c, Comp):
        return _assemble(c.i, _items(c.i, nf(c.a)) + _items(c.i, nf(c.b)))
    raise TypeError(c.kind)


def _items(i: int, c: Cell) -> list[Cell]:
    if isinstance(c, Comp) and c.i == i:
        return _items(i, c.a) + _items(i, c.b)
    return [c]


def _act(op: str, i: int, n: Cell) -> Cell:
    """Apply R_i or T_i to a normal form, pushing it onto the atoms."""
    if n.dim <= 1:
        return canonical_1cell(Inv(i, n))
    if is_thin(n):
        return Inv(i, n) if op == "R" else Transp(i, n)
    if isinstance(n, Comp):
        j = n.i
        parts = [_act(op, i, x) for x in _items(j, n)]
        if op == "R":
            if j == i:
                parts.reverse()
            return _assemble(j, parts)
        if j == i:
            j = i + 1
        elif j == i + 1:
            j = i
        return _assemble(j, parts)
    base, perm = _peel(n)
    perm = list(perm)
    if op == "R":
        p, s = perm[i - 1]
        perm[i - 1] = (p, -s)
    else:
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return _wrap(base, tuple(perm))


def _peel(n: Cell):
    ops = []
    while isinstance(n, (Inv, Transp)):
        ops.append(n)
        n = n.sub
    perm = [(d, 1) for d in range(1, n.dim + 1)]
    for op in reversed(ops):
        i = op.i
        if isinstance(op, Inv):
            p, s = perm[i - 1]
            perm[i - 1] = (p, -s)
        else:
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return n, tuple(perm)


def _wrap(base: Cell, perm) -> Cell:
    """Canonical spelling: transposes (bubble-sort word) inside, inversions outside."""
    target = [p for p, _ in perm]
    arr = list(target)
    swaps = []
    for end in range(len(arr) - 1, 0, -1):
        for i in range(end):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                swaps.append(i + 1)
    out = base
    for i in reversed(swaps):
        out = Transp(i, out)
    for d, (_, s) in enumerate(perm, start=1):
        if s < 0:
            out = Inv(d, out)
    return out


def _is_unit(u: Cell, i: int) -> bool:
    if not is_thin(u):
        return False
    return boundary_verdict(u, Eps(i, face(u, i, MINUS))) is Verdict.EQUAL


def _assemble(i: int, items: list[Cell]) -> Cell:
    start = face(items[0], i, MINUS)
    items = list(items)
    changed = True
    while changed and items:
        changed = False
        merged: list[Cell] = []
        for x in items:
            if merged and is_thin(merged[-1]) and is_thin(x):
                merged[-1] = Comp(i, merged[-1], x)
                changed = True
            else:
                merged.append(x)
        items = [x for x in merged if not _is_unit(x, i)]
        changed |= len(items) != len(merged)
        k = 0
        while k + 1 < len(items):
            x, y = items[k], items[k + 1]
            if not is_thin(x) and _same(y, _act("R", i, x)):
                del items[k : k + 2]
                changed = True
                k = max(k - 1, 0)
            else:
                k += 1
    if not items:
        return Eps(i, nf(start))
    out = items[-1]
    for x in reversed(items[:-1]):
        out = Comp(i, x, out)
    return _interchange(out)


def _interchange(c: Cell) -> Cell:
    """Move a lower composition direction outermost when the grid is aligned."""
    if not isinstance(c, Comp):
        return c
    i = c.i
    rows = _items(i, c)
    if len(rows) < 2 or not all(isinstance(r, Comp) and r.i < i for r in rows):
        return c
    j = rows[0].i
    if any(r.i != j for r in rows):
        return c
    grid = [_items(j, r) for r in rows]
    width = len(grid[0])
    if any(len(g) != width for g in grid):
        return c
    for r in range(len(grid) - 1):
        for col in range(width):
            if equal(face(grid[r][col], i, PLUS), face(grid[r + 1][col], i, MINUS)) is not Verdict.EQUAL:
                return c
    columns = [_assemble(i, [grid[r][col] for r in range(len(grid))]) for col in range(width)]
    return _assemble(j, columns)


def typecheck(c: Cell):
    """First composition inside ``c`` whose glued faces are not known to agree, or None."""
    seen = set()
    stack = [c]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        if isinstance(x, Comp) and equal(face(x.a, x.i, PLUS), face(x.b, x.i, MINUS)) is not Verdict.EQUAL:
            return x
        if isinstance(x, Formal):
            stack.extend(f for _, f in x.square.items())
        stack.extend(children(x))
    return None


class SquareCheck:
    """Outcome of checking the square equations; ``failure`` locates the first miss."""

    def __init__(self, verdict: Verdict, failure=None):
        self.verdict = verdict
        self.failure = failure

    def __bool__(self):
        return self.verdict is Verdict.EQUAL

    def __repr__(self):
        return f"SquareCheck({self.verdict.value}, failure={self.failure})"


def validate_square(S: Square) -> SquareCheck:
    """Check d_i^a S_j^b = d_{j-1}^b S_i^a for all i < j."""
    if S.k == 0:
        return SquareCheck(Verdict.EQUAL)
    unknown = None
    for j in range(2, S.k + 2):
        for i in range(1, j):
            for a in SIGNS:
                for b in SIGNS:
                    v = equal(face(S.face(j, b), i, a), face(S.face(i, a), j - 1, b))
                    if v is Verdict.UNEQUAL:
                        return SquareCheck(v, (i, j, a, b))
                    if v is Verdict.UNKNOWN and unknown is None:
                        unknown = (i, j, a, b)
    if unknown is not None:
        return SquareCheck(Verdict.UNKNOWN, unknown)
    return SquareCheck(Verdict.EQUAL)
