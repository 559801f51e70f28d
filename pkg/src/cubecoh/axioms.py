"""Executable instances of the cubical axioms: face tables for eps, Gamma,
composition, R and T, and the cell identities between them.

Each row builder takes a random generator, a cell sampler and an argument
cell, and returns ``(row, lhs, rhs)`` triples. ``holds`` compares the two
sides exactly up to dimension 3 and through the 1-skeleton above.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cells import MINUS, PLUS, SIGNS, Cell, Conn, Eps, Inv, Transp, compose, face, flip, one_skeleton
from .errors import CubecohError
from .normal import Verdict, equal

EXACT_DIM = 3


def holds(lhs: Cell, rhs: Cell) -> bool:
    if lhs.dim != rhs.dim:
        return False
    if lhs.dim == 0:
        return lhs is rhs
    if lhs.dim <= EXACT_DIM:
        return equal(lhs, rhs) is Verdict.EQUAL
    return one_skeleton(lhs) == one_skeleton(rhs)


def _faces(c: Cell):
    for i in range(1, c.dim + 1):
        for s in SIGNS:
            yield i, s


# ---------------------------------------------------------------- cubical categories


def row_cubical(rng, S, c):
    out = []
    for j in range(2, c.dim + 1):
        for i in range(1, j):
            for a in SIGNS:
                for b in SIGNS:
                    out.append(("dd", face(face(c, j, b), i, a), face(face(c, i, a), j - 1, b)))
    return out


def row_face_eps(rng, S, c):
    j = rng.randint(1, c.dim + 1)
    x = Eps(j, c)
    out = []
    for i, a in _faces(x):
        if i < j:
            rhs = Eps(j - 1, face(c, i, a))
        elif i == j:
            rhs = c
        else:
            rhs = Eps(j, face(c, i - 1, a))
        out.append(("face-eps", face(x, i, a), rhs))
    return out


def row_eps_eps(rng, S, c):
    # eps_i eps_j = eps_{j+1} eps_i for i <= j, read in both directions
    n = c.dim
    j = rng.randint(1, n + 1)
    i = rng.randint(1, j)
    out = [("eps-eps", Eps(i, Eps(j, c)), Eps(j + 1, Eps(i, c)))]
    i = rng.randint(2, n + 2)
    j = rng.randint(1, i - 1)
    out.append(("eps-eps", Eps(i, Eps(j, c)), Eps(j, Eps(i - 1, c))))
    return out


def row_interchange(rng, S, a):
    if a.dim < 2:
        return []
    i, j = rng.sample(range(1, a.dim + 1), 2)
    b, c, d = Inv(i, a), Inv(j, a), Inv(i, Inv(j, a))
    lhs = compose(j, compose(i, a, b), compose(i, c, d))
    rhs = compose(i, compose(j, a, c), compose(j, b, d))
    return [("interchange", lhs, rhs)]


def row_assoc(rng, S, a):
    i = rng.randint(1, a.dim)
    b = S.partner(a, i)
    c = S.partner(b, i)
    return [("assoc", compose(i, a, compose(i, b, c)), compose(i, compose(i, a, b), c))]


def row_eps_comp(rng, S, a):
    j = rng.randint(1, a.dim)
    b = S.partner(a, j)
    i = rng.randint(1, a.dim + 1)
    lhs = Eps(i, compose(j, a, b))
    rhs = compose(j + 1 if i <= j else j, Eps(i, a), Eps(i, b))
    return [("eps-comp", lhs, rhs)]


def row_units(rng, S, a):
    i = rng.randint(1, a.dim)
    return [
        ("unit", compose(i, a, Eps(i, face(a, i, PLUS))), a),
        ("unit", compose(i, Eps(i, face(a, i, MINUS)), a), a),
    ]


def row_face_comp(rng, S, a):
    j = rng.randint(1, a.dim)
    b = S.partner(a, j)
    x = compose(j, a, b)
    out = []
    for i, s in _faces(x):
        if i < j:
            rhs = compose(j - 1, face(a, i, s), face(b, i, s))
        elif i == j:
            rhs = face(a, i, MINUS) if s == MINUS else face(b, i, PLUS)
        else:
            rhs = compose(j, face(a, i, s), face(b, i, s))
        out.append(("face-comp", face(x, i, s), rhs))
    return out


# ---------------------------------------------------------------- connections


def row_face_conn(rng, S, c):
    j = rng.randint(1, c.dim)
    beta = rng.choice(SIGNS)
    x = Conn(j, beta, c)
    out = []
    for i, a in _faces(x):
        if i < j:
            rhs = Conn(j - 1, beta, face(c, i, a))
        elif i in (j, j + 1):
            rhs = c if a == beta else Eps(j, face(c, j, a))
        else:
            rhs = Conn(j, beta, face(c, i - 1, a))
        out.append(("face-conn", face(x, i, a), rhs))
    return out


def row_conn_eps(rng, S, c):
    m = c.dim
    j = rng.randint(1, m + 1)
    i = rng.randint(1, m + 1)
    a = rng.choice(SIGNS)
    lhs = Conn(i, a, Eps(j, c))
    if i < j:
        rhs = Eps(j + 1, Conn(i, a, c))
    elif i == j:
        rhs = Eps(i, Eps(i, c))
    else:
        rhs = Eps(j, Conn(i - 1, a, c))
    return [("conn-eps", lhs, rhs)]


def row_conn_conn(rng, S, c):
    m = c.dim
    j = rng.randint(1, m)
    a, b = rng.choice(SIGNS), rng.choice(SIGNS)
    choices = [i for i in range(1, m + 2) if i < j or i > j + 1] + ([j + 1] if m + 1 >= j + 1 else [])
    i = rng.choice(choices)
    if i == j + 1:
        b = a
    lhs = Conn(i, a, Conn(j, b, c))
    if i < j:
        rhs = Conn(j + 1, b, Conn(i, a, c))
    elif i == j + 1:
        rhs = Conn(j, a, Conn(j, a, c))
    else:
        rhs = Conn(j, b, Conn(i - 1, a, c))
    return [("conn-conn", lhs, rhs)]


def row_conn_inverse(rng, S, a):
    i = rng.randint(1, a.dim)
    return [
        ("conn-plus-minus", compose(i, Conn(i, PLUS, a), Conn(i, MINUS, a)), Eps(i + 1, a)),
        ("conn-plus-minus", compose(i + 1, Conn(i, PLUS, a), Conn(i, MINUS, a)), Eps(i, a)),
    ]


def row_conn_comp(rng, S, a):
    j = rng.randint(1, a.dim)
    b = S.partner(a, j)
    i = rng.randint(1, a.dim)
    al = rng.choice(SIGNS)
    lhs = Conn(i, al, compose(j, a, b))
    if i < j:
        rhs = compose(j + 1, Conn(i, al, a), Conn(i, al, b))
    elif i > j:
        rhs = compose(j, Conn(i, al, a), Conn(i, al, b))
    elif al == MINUS:
        rhs = compose(
            i + 1,
            compose(i, Conn(i, MINUS, a), Eps(i + 1, b)),
            compose(i, Eps(i, b), Conn(i, MINUS, b)),
        )
    else:
        rhs = compose(
            i + 1,
            compose(i, Conn(i, PLUS, a), Eps(i, a)),
            compose(i, Eps(i + 1, a), Conn(i, PLUS, b)),
        )
    return [("conn-comp", lhs, rhs)]


# ---------------------------------------------------------------- inversions


def row_face_inv(rng, S, c):
    j = rng.randint(1, c.dim)
    x = Inv(j, c)
    out = []
    for i, a in _faces(x):
        if i < j:
            rhs = Inv(j - 1, face(c, i, a))
        elif i == j:
            rhs = face(c, i, flip(a))
        else:
            rhs = Inv(j, face(c, i, a))
        out.append(("face-R", face(x, i, a), rhs))
    return out


def row_face_transp(rng, S, c):
    if c.dim < 2:
        return []
    j = rng.randint(1, c.dim - 1)
    x = Transp(j, c)
    out = []
    for i, a in _faces(x):
        if i < j:
            rhs = Transp(j - 1, face(c, i, a))
        elif i == j:
            rhs = face(c, i + 1, a)
        elif i == j + 1:
            rhs = face(c, i - 1, a)
        else:
            rhs = Transp(j, face(c, i, a))
        out.append(("face-T", face(x, i, a), rhs))
    return out


def row_inv_comp(rng, S, f):
    j = rng.randint(1, f.dim)
    g = S.partner(f, j)
    i = rng.randint(1, f.dim)
    lhs = Inv(i, compose(j, f, g))
    rhs = compose(i, Inv(i, g), Inv(i, f)) if i == j else compose(j, Inv(i, f), Inv(i, g))
    out = [("R-comp", lhs, rhs)]
    if f.dim >= 2:
        i = rng.randint(1, f.dim - 1)
        lhs = Transp(i, compose(j, f, g))
        k = i + 1 if j == i else i if j == i + 1 else j
        out.append(("T-comp", lhs, compose(k, Transp(i, f), Transp(i, g))))
    return out


def row_inv_eps(rng, S, f):
    m = f.dim
    j = rng.randint(1, m + 1)
    i = rng.randint(1, m + 1)
    lhs = Inv(i, Eps(j, f))
    if i < j:
        rhs = Eps(j, Inv(i, f))
    elif i == j:
        rhs = Eps(i, f)
    else:
        rhs = Eps(j, Inv(i - 1, f))
    out = [("R-eps", lhs, rhs)]
    i = rng.randint(1, m)
    lhs = Transp(i, Eps(j, f))
    if j < i:
        rhs = Eps(j, Transp(i - 1, f))
    elif j == i:
        rhs = Eps(i + 1, f)
    elif j == i + 1:
        rhs = Eps(i, f)
    else:
        rhs = Eps(j, Transp(i, f))
    out.append(("T-eps", lhs, rhs))
    return out


def row_inv_conn(rng, S, f):
    m = f.dim
    j = rng.randint(1, m)
    i = rng.randint(1, m + 1)
    a = rng.choice(SIGNS)
    lhs = Inv(i, Conn(j, a, f))
    if i < j:
        rhs = Conn(j, a, Inv(i, f))
    elif i == j and a == MINUS:
        rhs = compose(i, Eps(i + 1, Inv(i, f)), Conn(i, PLUS, f))
    elif i == j:
        rhs = compose(i, Conn(i, MINUS, f), Eps(i + 1, Inv(i, f)))
    elif i == j + 1 and a == MINUS:
        rhs = compose(i, Eps(i - 1, Inv(i - 1, f)), Conn(i - 1, PLUS, f))
    elif i == j + 1:
        rhs = compose(i, Conn(i - 1, MINUS, f), Eps(i - 1, Inv(i - 1, f)))
    else:
        rhs = Conn(j, a, Inv(i - 1, f))
    out = [("R-conn", lhs, rhs)]
    if m >= 2:
        i = rng.randint(1, m)
        # adjacent indices are covered by the T Gamma T identities below
        j = rng.choice([k for k in range(1, m + 1) if k == i or abs(k - i) >= 2])
        lhs = Transp(i, Conn(j, a, f))
        if i < j:
            rhs = Conn(j, a, Transp(i, f))
        elif i == j:
            rhs = Conn(i, a, f)
        else:
            rhs = Conn(j, a, Transp(i - 1, f))
        out.append(("T-conn", lhs, rhs))
        i = rng.randint(1, m - 1)
        out.append(("T-conn-T", Transp(i + 1, Conn(i, a, Transp(i, f))), Transp(i, Conn(i + 1, a, f))))
        out.append(("T-conn-T", Transp(i, Conn(i + 1, a, Transp(i, f))), Transp(i + 1, Conn(i, a, f))))
    return out


def row_inv_inv(rng, S, f):
    m = f.dim
    i, j = rng.randint(1, m), rng.randint(1, m)
    out = [("R-R", Inv(i, Inv(i, f)), f), ("R-R", Inv(i, Inv(j, f)), Inv(j, Inv(i, f)))]
    if m >= 2:
        i = rng.randint(1, m - 1)
        out.append(("T-T", Transp(i, Transp(i, f)), f))
        far = [k for k in range(1, m) if abs(k - i) >= 2]
        if far:
            k = rng.choice(far)
            out.append(("T-T", Transp(i, Transp(k, f)), Transp(k, Transp(i, f))))
        j = rng.randint(1, m)
        lhs = Transp(i, Inv(j, f))
        if j == i:
            rhs = Inv(i + 1, Transp(i, f))
        elif j == i + 1:
            rhs = Inv(i, Transp(i, f))
        else:
            rhs = Inv(j, Transp(i, f))
        out.append(("T-R", lhs, rhs))
    if m >= 3:
        i = rng.randint(1, m - 2)
        out.append(("braid", Transp(i, Transp(i + 1, Transp(i, f))), Transp(i + 1, Transp(i, Transp(i + 1, f)))))
    return out


ROWS = {
    "dd": row_cubical,
    "face-eps": row_face_eps,
    "eps-eps": row_eps_eps,
    "interchange": row_interchange,
    "assoc": row_assoc,
    "eps-comp": row_eps_comp,
    "unit": row_units,
    "face-comp": row_face_comp,
    "face-conn": row_face_conn,
    "conn-eps": row_conn_eps,
    "conn-conn": row_conn_conn,
    "conn-plus-minus": row_conn_inverse,
    "conn-comp": row_conn_comp,
    "face-R": row_face_inv,
    "face-T": row_face_transp,
    "inv-comp": row_inv_comp,
    "inv-eps": row_inv_eps,
    "inv-conn": row_inv_conn,
    "inv-inv": row_inv_inv,
}


@dataclass
class SuiteReport:
    systems: int = 0
    cells: int = 0
    instances: int = 0
    by_row: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_cell(rng: random.Random, sampler, c: Cell, report: SuiteReport) -> None:
    report.cells += 1
    for name, build in ROWS.items():
        try:
            triples = build(rng, sampler, c)
        except CubecohError as ex:
            report.failures.append((name, f"{type(ex).__name__}: {ex}"))
            continue
        for row, lhs, rhs in triples:
            report.instances += 1
            report.by_row[row] = report.by_row.get(row, 0) + 1
            try:
                ok = holds(lhs, rhs)
            except CubecohError as ex:
                ok = False
                report.failures.append((row, f"{type(ex).__name__}: {ex}"))
                continue
            if not ok:
                report.failures.append((row, c))


def run_suite(rng: random.Random, systems: int = 50, cells_per_system: int = 24, max_dim: int = 3) -> SuiteReport:
    """Instantiate every row on random cells of dims 1..max_dim over random convergent systems."""
    from .contraction import Contraction
    from .polygraph import generate
    from .sampling import CellSampler, random_system

    report = SuiteReport()
    while report.systems < systems:
        R = random_system(rng)
        if not R.edges:
            continue
        report.systems += 1
        T = generate(R, max_dim, "local")
        sampler = CellSampler(rng, T, Contraction(T))
        for n in range(cells_per_system):
            check_cell(rng, sampler, sampler.cell(1 + n % max_dim, 2), report)
    return report
