"""Finite abstract rewriting systems: parsing, paths, zigzags, termination,
branchings and the normalisation strategy."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterator

import networkx as nx

from .errors import (
    ArsParseError,
    DifferentSources,
    NotComposable,
    NotConfluent,
    NotNoetherian,
)


@dataclass(frozen=True)
class Edge:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    start: str
    steps: tuple[str, ...] = ()

    def __len__(self):
        return len(self.steps)

    def __str__(self):
        return "·".join(self.steps) if self.steps else f"1_{self.start}"

    def to_json(self):
        return {"start": self.start, "steps": list(self.steps)}


@dataclass(frozen=True)
class Zigzag:
    """A word of oriented steps; ``True`` marks a forward step."""

    start: str
    steps: tuple[tuple[str, bool], ...] = ()

    def __len__(self):
        return len(self.steps)

    def __str__(self):
        if not self.steps:
            return f"1_{self.start}"
        return "·".join(e if fwd else f"{e}⁻" for e, fwd in self.steps)

    @classmethod
    def of_path(cls, p: Path) -> "Zigzag":
        return cls(p.start, tuple((e, True) for e in p.steps))

    def to_json(self):
        return {
            "start": self.start,
            "steps": [{"edge": e, "forward": fwd} for e, fwd in self.steps],
        }


@dataclass(frozen=True)
class Branching:
    source: str
    legs: tuple[Path, ...]

    @property
    def is_local(self):
        return all(len(p) == 1 for p in self.legs)

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.legs) + ")"


class RewritingSystem:
    """A finite 1-polygraph with a strict order on the outgoing edges of each vertex."""

    def __init__(self, vertices, edges, rule_order=None):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)
        self._edge = {e.name: e for e in self.edges}
        if len(self._edge) != len(self.edges):
            raise ValueError("duplicate edge name")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex name")
        known = set(self.vertices)
        for e in self.edges:
            for end in (e.source, e.target):
                if end not in known:
                    raise ValueError(f"edge {e.name} has undeclared endpoint {end}")
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.source].append(e.name)
        order = dict(rule_order or {})
        for v in self.vertices:
            given = tuple(order.get(v, out[v]))
            if sorted(given) != sorted(out[v]) or len(set(given)) != len(given):
                raise ValueError(f"order at {v} must list exactly its outgoing edges")
            order[v] = given
        self.rule_order: dict[str, tuple[str, ...]] = {v: order[v] for v in self.vertices}
        self._rank = {e: r for v in self.vertices for r, e in enumerate(self.rule_order[v])}

    def __repr__(self):
        return f"RewritingSystem({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def edge(self, name: str) -> Edge:
        return self._edge[name]

    def out_edges(self, v: str) -> tuple[str, ...]:
        return self.rule_order[v]

    def rank(self, name: str) -> int:
        return self._rank[name]

    def end(self, p: Path) -> str:
        return self._edge[p.steps[-1]].target if p.steps else p.start

    def path(self, start: str, *steps: str) -> Path:
        p = Path(start, tuple(steps))
        check_path(self, p)
        return p

    def graph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.edges:
            g.add_edge(e.source, e.target, key=e.name)
        return g

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "edges": [{"name": e.name, "source": e.source, "target": e.target} for e in self.edges],
            "rule_order": {v: list(o) for v, o in self.rule_order.items()},
        }

    @classmethod
    def from_json(cls, obj) -> "RewritingSystem":
        return cls(
            obj["vertices"],
            [Edge(e["name"], e["source"], e["target"]) for e in obj["edges"]],
            {v: tuple(o) for v, o in obj.get("rule_order", {}).items()},
        )

    def to_text(self) -> str:
        lines = [f"vertex {v}" for v in self.vertices]
        lines += [f"edge {e.name} : {e.source} -> {e.target}" for e in self.edges]
        lines += [
            f"order {v} : " + " < ".join(o) for v, o in self.rule_order.items() if len(o) > 1
        ]
        return "\n".join(lines) + "\n"


def check_path(R: RewritingSystem, p: Path) -> None:
    at = p.start
    if at not in R.rule_order:
        raise NotComposable(f"unknown vertex {at}")
    for name in p.steps:
        e = R.edge(name)
        if e.source != at:
            raise NotComposable(f"step {name} starts at {e.source}, expected {at}")
        at = e.target


# ---------------------------------------------------------------- parsing

_NAME = r"[^\s:<>#]+"
_VERTEX = re.compile(rf"^vertex\s+({_NAME})$")
_EDGE = re.compile(rf"^edge\s+({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})$")
_ORDER = re.compile(rf"^order\s+({_NAME})\s*:\s*(.+)$")


def parse_ars(text: str) -> RewritingSystem:
    vertices: dict[str, int] = {}
    edges: dict[str, tuple[Edge, int]] = {}
    orders: dict[str, tuple[tuple[str, ...], int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _VERTEX.match(line):
            name = m.group(1)
            if name in vertices:
                raise ArsParseError(lineno, f"duplicate vertex {name}")
            vertices[name] = lineno
        elif m := _EDGE.match(line):
            name, src, tgt = m.groups()
            if name in edges:
                raise ArsParseError(lineno, f"duplicate edge {name}")
            edges[name] = (Edge(name, src, tgt), lineno)
        elif m := _ORDER.match(line):
            v = m.group(1)
            names = tuple(s.strip() for s in m.group(2).split("<"))
            if any(not re.fullmatch(_NAME, s) for s in names):
                raise ArsParseError(lineno, f"malformed order directive for {v}")
            if v in orders:
                raise ArsParseError(lineno, f"second order directive for {v}")
            orders[v] = (names, lineno)
        else:
            raise ArsParseError(lineno, f"unrecognised line: {line!r}")

    for e, lineno in edges.values():
        for end in (e.source, e.target):
            if end not in vertices:
                raise ArsParseError(lineno, f"edge {e.name} references undeclared vertex {end}")
    for v, (names, lineno) in orders.items():
        if v not in vertices:
            raise ArsParseError(lineno, f"order directive for undeclared vertex {v}")
        outgoing = [e.name for e, _ in edges.values() if e.source == v]
        if len(set(names)) != len(names):
            raise ArsParseError(lineno, f"order at {v} repeats an edge")
        stray = [n for n in names if n not in outgoing]
        if stray:
            raise ArsParseError(lineno, f"order at {v} lists {stray[0]}, not an outgoing edge of {v}")
        missing = [n for n in outgoing if n not in names]
        if missing:
            raise ArsParseError(lineno, f"order at {v} omits outgoing edge {missing[0]}")

    return RewritingSystem(
        list(vertices),
        [e for e, _ in edges.values()],
        {v: names for v, (names, _) in orders.items()},
    )


# ---------------------------------------------------------------- termination


@dataclass(frozen=True)
class NoetherianVerdict:
    noetherian: bool
    cycle: Path | None = None

    def __bool__(self):
        return self.noetherian


def is_noetherian(R: RewritingSystem) -> NoetherianVerdict:
    try:
        cyc = nx.find_cycle(R.graph(), orientation="original")
    except nx.NetworkXNoCycle:
        return NoetherianVerdict(True)
    return NoetherianVerdict(False, Path(cyc[0][0], tuple(k for _, _, k, _ in cyc)))


def topological_order(R: RewritingSystem) -> list[str]:
    """Vertices ordered so that every edge points forward; ties broken by declaration."""
    pos = {v: i for i, v in enumerate(R.vertices)}
    return list(nx.lexicographical_topological_sort(R.graph(), key=pos.__getitem__))


# ---------------------------------------------------------------- strategy


@dataclass
class Strategy:
    normal_form: dict[str, str]
    sigma_path: dict[str, Path]
    eta: dict[str, str] = field(default_factory=dict)

    def to_json(self):
        return {
            "normal_form": dict(self.normal_form),
            "sigma": {v: list(p.steps) for v, p in self.sigma_path.items()},
            "eta": dict(self.eta),
        }


def reachable_normal_forms(R: RewritingSystem) -> dict[str, dict[str, Path]]:
    """For each vertex, every reachable normal form together with one path reaching it."""
    verdict = is_noetherian(R)
    if not verdict:
        raise NotNoetherian(verdict.cycle)
    table: dict[str, dict[str, Path]] = {}
    for v in reversed(topological_order(R)):
        outs = R.out_edges(v)
        if not outs:
            table[v] = {v: Path(v)}
            continue
        found: dict[str, Path] = {}
        for name in outs:
            tail = table[R.edge(name).target]
            for n, p in tail.items():
                found.setdefault(n, Path(v, (name,) + p.steps))
        table[v] = found
    return table


def strategy(R: RewritingSystem) -> Strategy:
    table = reachable_normal_forms(R)
    for v in R.vertices:
        if len(table[v]) > 1:
            (_, p), (_, q) = itertools.islice(table[v].items(), 2)
            raise NotConfluent(v, p, q)
    sigma: dict[str, Path] = {}
    eta: dict[str, str] = {}
    for v in reversed(topological_order(R)):
        outs = R.out_edges(v)
        if not outs:
            sigma[v] = Path(v)
            continue
        eta[v] = outs[0]
        sigma[v] = Path(v, (outs[0],) + sigma[R.edge(outs[0]).target].steps)
    normal = {v: R.end(sigma[v]) for v in R.vertices}
    return Strategy(
        {v: normal[v] for v in R.vertices},
        {v: sigma[v] for v in R.vertices},
        {v: eta[v] for v in R.vertices if v in eta},
    )


def joinable(R: RewritingSystem, a: str, b: str) -> bool:
    g = R.graph()
    return bool((nx.descendants(g, a) | {a}) & (nx.descendants(g, b) | {b}))


def non_joinable_peaks(R: RewritingSystem) -> list[Branching]:
    """Local branchings whose two targets have no common reduct."""
    bad = []
    for v in R.vertices:
        for e, f in itertools.combinations(R.out_edges(v), 2):
            if not joinable(R, R.edge(e).target, R.edge(f).target):
                bad.append(Branching(v, (Path(v, (e,)), Path(v, (f,)))))
    return bad


# ---------------------------------------------------------------- orders and branchings


def path_key(R: RewritingSystem, p: Path) -> tuple[int, ...]:
    return tuple(R.rank(e) for e in p.steps)


def path_order(R: RewritingSystem, p: Path, q: Path) -> int:
    """Three-way comparison of two paths with a common source."""
    if p.start != q.start:
        raise DifferentSources(f"{p} starts at {p.start}, {q} at {q.start}")
    kp, kq = path_key(R, p), path_key(R, q)
    return (kp > kq) - (kp < kq)


def paths_from(R: RewritingSystem, v: str, bound: int | None = None) -> Iterator[Path]:
    """Nonempty paths from ``v`` in path order. ``bound`` caps the length."""
    if bound is None and not is_noetherian(R):
        raise NotNoetherian(is_noetherian(R).cycle)

    def walk(at, prefix):
        if bound is not None and len(prefix) >= bound:
            return
        for name in R.out_edges(at):
            p = prefix + (name,)
            yield Path(v, p)
            yield from walk(R.edge(name).target, p)

    yield from walk(v, ())


def branchings(R: RewritingSystem, k: int, mode: str = "critical", bound: int | None = None) -> list[Branching]:
    if k < 2:
        raise ValueError("branchings need arity at least 2")
    if mode not in ("local", "critical", "all"):
        raise ValueError(f"unknown branching mode {mode!r}")
    out = []
    for v in R.vertices:
        if mode == "all":
            legs = list(paths_from(R, v, bound))
        else:
            legs = [Path(v, (e,)) for e in R.out_edges(v)]
        for combo in itertools.combinations(legs, k):
            out.append(Branching(v, combo))
    return out


# ---------------------------------------------------------------- zigzags


def reduce_zigzag(z: Zigzag, R: RewritingSystem | None = None) -> Zigzag:
    if R is not None:
        at = z.start
        for name, fwd in z.steps:
            e = R.edge(name)
            src, tgt = (e.source, e.target) if fwd else (e.target, e.source)
            if src != at:
                raise NotComposable(f"zigzag step {name} does not start at {at}")
            at = tgt
    stack: list[tuple[str, bool]] = []
    for step in z.steps:
        if stack and stack[-1][0] == step[0] and stack[-1][1] != step[1]:
            stack.pop()
        else:
            stack.append(step)
    return Zigzag(z.start, tuple(stack))


def zigzag_end(R: RewritingSystem, z: Zigzag) -> str:
    at = z.start
    for name, fwd in z.steps:
        e = R.edge(name)
        at = e.target if fwd else e.source
    return at
