"""Generator tables of the resolution of a convergent rewriting system, and
their truncation to generators of dimension at most two."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx

from .ars import Path, RewritingSystem, Strategy, path_key, paths_from, strategy
from .cells import (
    MINUS,
    PLUS,
    Cell,
    Conn,
    Context,
    Eps,
    GenCell,
    Inv,
    Transp,
    boundary,
    compose,
)
from .errors import MissingGenerator

MODES = ("paths", "local")


class GeneratorTable:
    """Keys A_k<f1,...,fk> per dimension, with legs strictly increasing in path order."""

    def __init__(self, system: RewritingSystem, strat: Strategy, keys: dict[int, list[tuple[Path, ...]]],
                 mode: str, truncated: bool = False, path_bound: int | None = None):
        self.system = system
        self.strategy = strat
        self.ctx = Context(system, strat)
        self.mode = mode
        self.truncated = truncated
        self.path_bound = path_bound
        self.keys = {k: list(v) for k, v in sorted(keys.items())}
        self._index = {legs for v in self.keys.values() for legs in v}

    @property
    def max_dim(self) -> int:
        return max(self.keys, default=1)

    def __contains__(self, legs) -> bool:
        return tuple(legs) in self._index

    def lookup(self, legs) -> GenCell:
        legs = tuple(legs)
        if legs not in self._index:
            raise MissingGenerator("no generator A%d<%s> in the table" % (len(legs), ",".join(map(str, legs))))
        return self.ctx.gen(legs)

    def cells(self, k: int) -> list[GenCell]:
        return [self.ctx.gen(legs) for legs in self.keys.get(k, [])]

    def all_cells(self) -> list[GenCell]:
        return [c for k in self.keys for c in self.cells(k)]

    def count(self) -> dict[int, int]:
        return {k: len(v) for k, v in self.keys.items()}


def longest_path(system: RewritingSystem) -> int:
    return nx.dag_longest_path_length(system.graph()) if system.edges else 0


def generate(system: RewritingSystem, max_dim: int = 3, mode: str = "paths",
             path_bound: int | None = None) -> GeneratorTable:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    strat = strategy(system)
    if path_bound is None:
        path_bound = longest_path(system)
    keys: dict[int, list[tuple[Path, ...]]] = {}
    for v in system.vertices:
        if mode == "paths":
            legs = list(paths_from(system, v, path_bound))
        else:
            legs = [Path(v, (e,)) for e in system.out_edges(v)]
        legs.sort(key=lambda p: path_key(system, p))
        for k in range(2, max_dim + 1):
            for combo in itertools.combinations(legs, k):
                keys.setdefault(k, []).append(combo)
    return GeneratorTable(system, strat, keys, mode, False, path_bound)


# ---------------------------------------------------------------- truncation


@dataclass
class Truncation:
    table: GeneratorTable
    replacements: dict[tuple[Path, ...], Cell] = field(default_factory=dict)


def _eta_leg(table: GeneratorTable, v: str) -> Path:
    return Path(v, (table.strategy.eta[v],))


def replace_pair(table: GeneratorTable, f1: Path, f2: Path) -> Cell:
    """Filler with the faces of A2<f1,f2> built from the two generators at eta."""
    ctx = table.ctx
    v = f1.start
    eta = _eta_leg(table, v)
    x1 = table.system.end(eta)
    top = compose(2, Conn(1, PLUS, ctx.path(eta)), table.lookup((eta, f2)))
    bottom = compose(2, Transp(1, table.lookup((eta, f1))), Conn(1, MINUS, ctx.sigma_path(x1)))
    return compose(1, top, bottom)


def replace_triple_eta(table: GeneratorTable, f2: Path, f3: Path) -> Cell:
    """Thin filler for A3<eta,f2,f3> with its first face replaced by the pair filler."""
    ctx = table.ctx
    v = f2.start
    eta = _eta_leg(table, v)
    x1 = table.system.end(eta)
    left = compose(3, Conn(2, PLUS, Conn(1, MINUS, ctx.path(eta))), Conn(1, MINUS, table.lookup((eta, f3))))
    right = compose(
        3,
        Transp(1, Conn(2, MINUS, Transp(1, table.lookup((eta, f2))))),
        Conn(2, MINUS, Eps(1, ctx.sigma_path(x1))),
    )
    return compose(2, left, right)


def replace_triple(table: GeneratorTable, f1: Path, f2: Path, f3: Path) -> Cell:
    """Thin filler for A3<f1,f2,f3> (no leg at eta) with all faces replaced by pair fillers."""
    ctx = table.ctx
    v = f1.start
    eta = _eta_leg(table, v)
    x1 = table.system.end(eta)
    e = ctx.path(eta)
    sig = ctx.sigma_path(x1)
    corner = compose(1, Conn(2, PLUS, Conn(1, MINUS, e)), Inv(1, Conn(2, MINUS, Conn(1, MINUS, e))))
    upper = compose(
        2,
        compose(3, corner, Conn(1, MINUS, table.lookup((eta, f3)))),
        compose(3, Transp(1, Conn(2, MINUS, Transp(1, table.lookup((eta, f2))))), Conn(2, MINUS, Eps(1, sig))),
    )
    lower = Conn(2, MINUS, compose(2, Transp(1, table.lookup((eta, f1))), Conn(1, MINUS, sig)))
    return compose(1, upper, lower)


def truncate(table: GeneratorTable, fill=None) -> Truncation:
    """Keep only the A2<eta_x, f> generators and build replacements for the rest.

    ``fill`` fills squares of dimension three and up (it receives the truncated
    table and the square); it is needed only when the table has keys above
    dimension three.
    """
    if table.mode != "local":
        raise ValueError("truncation starts from a local-mode table")
    system = table.system
    kept = [legs for legs in table.keys.get(2, []) if legs[0] == _eta_leg(table, legs[0].start)]
    small = GeneratorTable(system, table.strategy, {2: kept}, "local", True, table.path_bound)
    out = Truncation(small)
    for k, keys in table.keys.items():
        for legs in keys:
            if k == 2 and legs in kept:
                continue
            eta = _eta_leg(table, legs[0].start)
            if k == 2:
                out.replacements[legs] = replace_pair(small, *legs)
            elif k == 3 and legs[0] == eta:
                out.replacements[legs] = replace_triple_eta(small, legs[1], legs[2])
            elif k == 3:
                out.replacements[legs] = replace_triple(small, *legs)
            else:
                if fill is None:
                    raise MissingGenerator(f"no filler available for the {k}-generator {legs}")
                out.replacements[legs] = fill(small, replaced_boundary(table, out.replacements, legs))
    return out


def replaced_boundary(table: GeneratorTable, replacements: dict, legs):
    """Boundary of A_k<legs> with its negative faces swapped for their replacements."""
    from .cells import Square

    S = boundary(table.ctx.gen(legs))
    faces = []
    for i in range(1, S.k + 2):
        minus = S.face(i, MINUS)
        sub = tuple(l for n, l in enumerate(legs) if n != i - 1)
        faces.append((replacements.get(sub, minus), S.face(i, PLUS)))
    return Square(S.k, tuple(faces))
