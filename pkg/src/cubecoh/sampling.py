"""Seeded random generators: convergent DAG rewriting systems, zigzags,
well-typed cells and valid squares built from generator boundaries,
contraction images and thin cells."""

from __future__ import annotations

import random

from .ars import Edge, Path, RewritingSystem, Zigzag, reduce_zigzag, zigzag_end
from .cells import (
    PLUS,
    SIGNS,
    Cell,
    Comp,
    Conn,
    Eps,
    Inv,
    Square,
    Transp,
    Vertex,
    boundary,
    face,
)


def random_system(rng: random.Random, max_vertices: int = 8, max_edges: int = 12) -> RewritingSystem:
    """A convergent system: a DAG on v0 < v1 < ... whose sinks are joined to one or two normal forms."""
    n = rng.randint(2, max_vertices)
    names = [f"v{i}" for i in range(n)]
    groups = 1 if n < 5 or rng.random() < 0.7 else 2
    cut = n if groups == 1 else rng.randint(2, n - 2)
    blocks = [names[:cut], names[cut:]] if groups == 2 else [names]
    edges: list[tuple[str, str]] = []
    for block in blocks:
        budget = max_edges * len(block) // n
        pairs = [(a, b) for i, a in enumerate(block) for b in block[i + 1 :]]
        rng.shuffle(pairs)
        chosen = pairs[: rng.randint(len(block) - 1, max(len(block) - 1, budget))]
        # close every sink but the last vertex onto the last vertex, so the block has one normal form
        last = block[-1]
        for v in block[:-1]:
            if not any(a == v for a, _ in chosen):
                chosen.append((v, last))
        edges.extend(chosen)
    while len(edges) > max_edges:
        # drop a parallel-free edge whose source keeps another way out
        for k in range(len(edges) - 1, -1, -1):
            a, _ = edges[k]
            if sum(1 for x, _ in edges if x == a) > 1:
                del edges[k]
                break
        else:
            break
    edges.sort(key=lambda e: (names.index(e[0]), names.index(e[1])))
    es = [Edge(f"e{k}", a, b) for k, (a, b) in enumerate(edges)]
    order = {}
    for v in names:
        out = [e.name for e in es if e.source == v]
        rng.shuffle(out)
        order[v] = tuple(out)
    return RewritingSystem(names, es, order)


def random_zigzag(rng: random.Random, R: RewritingSystem, start: str, length: int) -> Zigzag:
    steps = []
    at = start
    for _ in range(length):
        opts = [(e.name, True) for e in R.edges if e.source == at]
        opts += [(e.name, False) for e in R.edges if e.target == at]
        if not opts:
            break
        name, fwd = rng.choice(opts)
        steps.append((name, fwd))
        e = R.edge(name)
        at = e.target if fwd else e.source
    return reduce_zigzag(Zigzag(start, tuple(steps)))


def random_path(rng: random.Random, R: RewritingSystem, start: str, max_len: int) -> Path:
    steps = []
    at = start
    for _ in range(rng.randint(0, max_len)):
        out = R.out_edges(at)
        if not out:
            break
        name = rng.choice(out)
        steps.append(name)
        at = R.edge(name).target
    return Path(start, tuple(steps))


def _zigzag_between(rng, R, ctx, a: str, b: str, detour: int = 2) -> Cell:
    """A zigzag from a to b through their common normal form, with a random loop in front."""
    loop = random_zigzag(rng, R, a, rng.randint(0, detour))
    back = Zigzag(zigzag_end(R, loop), tuple((e, not f) for e, f in reversed(loop.steps)))
    sa, sb = ctx.strategy.sigma_path[a], ctx.strategy.sigma_path[b]
    to_nf = Zigzag(a, tuple((e, True) for e in sa.steps))
    from_nf = Zigzag(zigzag_end(R, to_nf), tuple((e, False) for e in reversed(sb.steps)))
    whole = Zigzag(a, loop.steps + back.steps + to_nf.steps + from_nf.steps)
    return ctx.zigzag(whole)


class CellSampler:
    """Random well-typed cells over a generator table and its contraction."""

    def __init__(self, rng: random.Random, table, contraction):
        self.rng = rng
        self.table = table
        self.R = table.system
        self.ctx = table.ctx
        self.C = contraction
        self.gens = {k: table.cells(k) for k in table.keys}

    def vertex(self) -> Cell:
        return Vertex(self.rng.choice(self.R.vertices))

    def cell(self, dim: int, depth: int = 3) -> Cell:
        rng = self.rng
        if dim == 0:
            return self.vertex()
        if dim == 1:
            v = rng.choice(self.R.vertices)
            return self.ctx.zigzag(random_zigzag(rng, self.R, v, rng.randint(0, 4)))
        choices = ["eps", "conn", "sigma"]
        if self.gens.get(dim):
            choices += ["gen", "gen"]
        if depth > 0:
            choices += ["inv", "transp", "comp", "comp"]
        op = rng.choice(choices)
        if op == "gen":
            return rng.choice(self.gens[dim])
        if op == "eps":
            return Eps(rng.randint(1, dim), self.cell(dim - 1, depth - 1))
        if op == "conn":
            return Conn(rng.randint(1, dim - 1), rng.choice(SIGNS), self.cell(dim - 1, depth - 1))
        if op == "sigma":
            return self.C.sigma(self.cell(dim - 1, max(depth - 1, 0)))
        if op == "inv":
            return Inv(rng.randint(1, dim), self.cell(dim, depth - 1))
        if op == "transp":
            return Transp(rng.randint(1, dim - 1), self.cell(dim, depth - 1))
        a = self.cell(dim, depth - 1)
        i = rng.randint(1, dim)
        return Comp(i, a, self.partner(a, i))

    def partner(self, a: Cell, i: int) -> Cell:
        """A cell whose minus face in direction i is the plus face of ``a`` there."""
        y = face(a, i, PLUS)
        kind = self.rng.choice(["inv", "eps", "sigma", "sigma"])
        if kind == "inv":
            return Inv(i, a)
        if kind == "eps":
            return Eps(i, y)
        b = self.C.sigma(y)
        for j in range(1, i):
            b = Transp(j, b)
        return b

    def square(self, k: int) -> Square:
        """A valid k-square: the boundary of a random (k+1)-cell, or for k = 1 a square of zigzags."""
        if k == 1 and self.rng.random() < 0.4:
            return self.zigzag_square()
        return boundary(self.cell(k + 1, 2))

    def zigzag_square(self) -> Square:
        rng, R, ctx = self.rng, self.R, self.ctx
        x = rng.choice(R.vertices)
        comp = [v for v in R.vertices if ctx.strategy.normal_form[v] == ctx.strategy.normal_form[x]]
        y1, y2, w = (rng.choice(comp) for _ in range(3))
        top = _zigzag_between(rng, R, ctx, x, y2)
        left = _zigzag_between(rng, R, ctx, x, y1)
        right = _zigzag_between(rng, R, ctx, y2, w)
        bottom = _zigzag_between(rng, R, ctx, y1, w)
        return Square(1, ((top, bottom), (left, right)))
