"""JSON encoding of cells and squares.

Cells are tagged trees, e.g. ``{"op": "comp", "index": 1, "left": ..., "right": ...}``.
Generator cells carry their legs as arrays of edge names plus the common
source; decoding needs a ``Context`` to rebuild them. Squares are
``{"k": k, "faces": {"1-": ..., "1+": ..., ...}}``. Anywhere a 1-cell is
expected a zigzag string may stand in for it: steps separated by spaces or
``·``, a trailing ``~`` (or ``⁻``) marks a backward step, and ``1_x`` is the
empty zigzag at ``x``.
"""

from __future__ import annotations

from .ars import Path, Zigzag, reduce_zigzag
from .cells import (
    SIGNS,
    Cell,
    Comp,
    Conn,
    Context,
    EdgeCell,
    Eps,
    Formal,
    GenCell,
    Inv,
    SigmaGen,
    Square,
    Transp,
    Vertex,
)
from .errors import IllTyped


def cell_to_json(c: Cell) -> dict:
    if isinstance(c, Vertex):
        return {"op": "vertex", "name": c.name}
    if isinstance(c, EdgeCell):
        return {"op": "edge", "name": c.name, "source": c.source, "target": c.target}
    if isinstance(c, GenCell):
        return {"op": "gen", "source": c.source, "legs": [list(p.steps) for p in c.legs]}
    if isinstance(c, Formal):
        return {"op": "formal", "label": c.label, "square": square_to_json(c.square)}
    if isinstance(c, SigmaGen):
        return {"op": "sigma", "label": c.label, "body": cell_to_json(c.body)}
    if isinstance(c, Eps):
        return {"op": "eps", "index": c.i, "sub": cell_to_json(c.sub)}
    if isinstance(c, Conn):
        return {"op": "conn", "index": c.i, "sign": c.sign, "sub": cell_to_json(c.sub)}
    if isinstance(c, Comp):
        return {"op": "comp", "index": c.i, "left": cell_to_json(c.a), "right": cell_to_json(c.b)}
    if isinstance(c, Inv):
        return {"op": "inv", "index": c.i, "sub": cell_to_json(c.sub)}
    if isinstance(c, Transp):
        return {"op": "transp", "index": c.i, "sub": cell_to_json(c.sub)}
    raise TypeError(f"cannot encode {type(c).__name__}")


def parse_zigzag(text: str, ctx: Context) -> Zigzag:
    R = ctx.system
    tokens = text.replace("·", " ").split()
    if len(tokens) == 1 and tokens[0].startswith("1_"):
        v = tokens[0][2:]
        if v not in R.vertices:
            raise IllTyped(f"unknown vertex {v}")
        return Zigzag(v)
    if not tokens:
        raise IllTyped("empty zigzag needs the form 1_x")
    steps = []
    at = None
    for tok in tokens:
        fwd = not tok.endswith(("~", "⁻"))
        name = tok if fwd else tok[:-1]
        try:
            e = R.edge(name)
        except KeyError:
            raise IllTyped(f"unknown edge {name}") from None
        a, b = (e.source, e.target) if fwd else (e.target, e.source)
        if at is not None and at != a:
            raise IllTyped(f"zigzag breaks at {tok}: expected a step from {at}")
        if not steps:
            start = a
        steps.append((name, fwd))
        at = b
    return reduce_zigzag(Zigzag(start, tuple(steps)), R)


def cell_from_json(obj, ctx: Context) -> Cell:
    if isinstance(obj, str):
        return ctx.zigzag(parse_zigzag(obj, ctx))
    if not isinstance(obj, dict):
        raise IllTyped(f"expected a cell object, got {type(obj).__name__}")
    try:
        op = obj["op"]
        if op == "vertex":
            return ctx.vertex(obj["name"])
        if op == "edge":
            if obj["name"] not in {e.name for e in ctx.system.edges}:
                raise IllTyped(f"unknown edge {obj['name']}")
            c = ctx.edge(obj["name"])
            if "source" in obj and (obj["source"], obj["target"]) != (c.source, c.target):
                raise IllTyped(f"edge {c.name} does not run {obj['source']} -> {obj['target']}")
            return c
        if op == "gen":
            legs = [Path(obj["source"], tuple(steps)) for steps in obj["legs"]]
            for p in legs:
                ctx.system.end(p)  # unknown edge names raise here
            return ctx.gen(legs)
        if op == "formal":
            return Formal(square_from_json(obj["square"], ctx), obj.get("label", "A"))
        if op == "sigma":
            return SigmaGen(obj["label"], cell_from_json(obj["body"], ctx))
        if op in ("eps", "inv", "transp"):
            sub = cell_from_json(obj["sub"], ctx)
            return {"eps": Eps, "inv": Inv, "transp": Transp}[op](int(obj["index"]), sub)
        if op == "conn":
            if obj["sign"] not in SIGNS:
                raise IllTyped(f"connection sign must be one of {SIGNS}")
            return Conn(int(obj["index"]), obj["sign"], cell_from_json(obj["sub"], ctx))
        if op == "comp":
            return Comp(int(obj["index"]), cell_from_json(obj["left"], ctx), cell_from_json(obj["right"], ctx))
    except KeyError as ex:
        raise IllTyped(f"missing field {ex} in cell JSON") from None
    raise IllTyped(f"unknown cell op {obj.get('op')!r}")


def square_to_json(S: Square) -> dict:
    return {"k": S.k, "faces": {f"{i}{s}": cell_to_json(c) for (i, s), c in S.items()}}


def square_from_json(obj: dict, ctx: Context) -> Square:
    try:
        k = int(obj["k"])
        items = obj["faces"].items()
    except (KeyError, TypeError, ValueError, AttributeError):
        raise IllTyped("a square needs an integer k and a faces map") from None
    faces = {}
    for key, c in items:
        if len(key) < 2 or key[-1] not in SIGNS or not key[:-1].isdigit():
            raise IllTyped(f"bad face key {key!r}")
        faces[(int(key[:-1]), key[-1])] = cell_from_json(c, ctx)
    try:
        return Square.from_map(k, faces)
    except KeyError as ex:
        raise IllTyped(f"square is missing face {ex}") from None
