"""Certificates: self-contained JSON records of fillers, cube-law checks,
resolutions and witnesses, with a verifier that re-runs every boundary check
from the payload alone (no confluence or contraction code is consulted)."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from . import __version__
from .ars import Path, RewritingSystem, strategy
from .cells import MINUS, PLUS, Cell, Context, GenCell, Square, boundary, face, is_thin, word
from .codec import cell_from_json, square_from_json
from .errors import CubecohError
from .folding import fold_square
from .normal import Verdict, equal, squares_verdict, typecheck, validate_square

KINDS = ("filler", "cube-law", "resolution", "witness")


def dumps(obj) -> str:
    """Canonical JSON text; every output of the tool goes through here."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def ars_digest(R: RewritingSystem) -> str:
    text = json.dumps(R.to_json(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(text.encode()).hexdigest()


def path_to_json(p: Path) -> dict:
    return p.to_json()


def path_from_json(obj: dict) -> Path:
    return Path(obj["start"], tuple(obj["steps"]))


def make_certificate(kind: str, R: RewritingSystem, inputs: dict, payload: dict) -> dict:
    if kind not in KINDS:
        raise ValueError(f"certificate kind must be one of {KINDS}")
    cert = {
        "kind": kind,
        "inputs": {"ars": R.to_json(), "ars_digest": ars_digest(R), **inputs},
        "payload": payload,
        "verified": False,
        "tool": {"name": "cubecoh", "version": __version__},
    }
    cert["verified"] = verify_certificate(cert).ok
    return cert


@dataclass
class Verification:
    ok: bool = True
    checked: int = 0
    errors: list = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        self.errors.append(msg)

    def to_json(self):
        return {"ok": self.ok, "checked": self.checked, "errors": list(self.errors)}


def verify_certificate(cert: dict) -> Verification:
    out = Verification()
    try:
        R = RewritingSystem.from_json(cert["inputs"]["ars"])
        if ars_digest(R) != cert["inputs"]["ars_digest"]:
            out.fail("ARS digest does not match the embedded system")
            return out
        ctx = Context(R, strategy(R))
        check = _CHECKS[cert["kind"]]
        check(ctx, cert["payload"], out)
    except CubecohError as ex:
        out.fail(f"{type(ex).__name__}: {ex}")
    except (KeyError, TypeError, ValueError, IndexError) as ex:
        out.fail(f"malformed certificate: {type(ex).__name__}: {ex}")
    return out


# ---------------------------------------------------------------- shared checks


def _cell(ctx: Context, obj, out: Verification, what: str) -> Cell | None:
    c = cell_from_json(obj, ctx)
    bad = typecheck(c)
    if bad is not None:
        out.fail(f"{what}: ill-typed composite in direction {bad.i}")
        return None
    return c


def _bounds(c: Cell, S: Square, out: Verification, what: str) -> bool:
    out.checked += 1
    v = squares_verdict(boundary(c), S)
    if v is not Verdict.EQUAL:
        out.fail(f"{what}: boundary does not match ({v.value})")
        return False
    return True


def _valid(S: Square, out: Verification, what: str) -> bool:
    chk = validate_square(S)
    if not chk:
        out.fail(f"{what}: not a valid square ({chk})")
        return False
    return True


def _as_path(c: Cell) -> Path | None:
    w = word(c)
    if not all(fwd for _, fwd in w.steps):
        return None
    return Path(w.start, tuple(a.name for a, _ in w.steps))


def branching_square(ctx: Context, f: Path, g: Path) -> Square:
    """Faces of a normalising filler of (f, g): top g, left f, sigma paths below and right."""
    end = ctx.system.end
    return Square(1, ((ctx.path(g), ctx.sigma_path(end(f))), (ctx.path(f), ctx.sigma_path(end(g)))))


# ---------------------------------------------------------------- per kind


def _check_filler(ctx: Context, payload: dict, out: Verification) -> None:
    for n, item in enumerate(payload["items"]):
        what = f"item {n}"
        S = square_from_json(item["square"], ctx)
        if "legs" in item:
            f, g = (path_from_json(p) for p in item["legs"])
            if squares_verdict(S, branching_square(ctx, f, g)) is not Verdict.EQUAL:
                out.fail(f"{what}: square is not the normalising square of ({f}, {g})")
                continue
        if not _valid(S, out, what):
            continue
        c = _cell(ctx, item["cell"], out, what)
        if c is None or not _bounds(c, S, out, what):
            continue
        if "folded_square" in item:
            m = S.k + 1
            T = square_from_json(item["folded_square"], ctx)
            if squares_verdict(T, fold_square("Phi", m, S)) is not Verdict.EQUAL:
                out.fail(f"{what}: folded square is not Phi_{m} of the square")
                continue
            A = _cell(ctx, item["A"], out, what + " A")
            if A is not None:
                _bounds(A, T, out, what + " A")
            for key, sign in (("g_minus", MINUS), ("g_plus", PLUS)):
                g = _cell(ctx, item[key], out, f"{what} {key}")
                if g is not None and equal(g, T.face(1, sign)) is not Verdict.EQUAL:
                    out.fail(f"{what}: {key} is not the folded face in direction 1")


def _check_cube_law(ctx: Context, payload: dict, out: Verification) -> None:
    residual: dict = {}
    for n, item in enumerate(payload["fillers"]):
        f, g = (path_from_json(p) for p in item["legs"])
        what = f"filler ({f}, {g})"
        c = _cell(ctx, item["cell"], out, what)
        if c is None or c.dim != 2:
            out.fail(f"{what}: not a 2-cell")
            continue
        if _as_path(face(c, 2, MINUS)) != f or _as_path(face(c, 1, MINUS)) != g:
            out.fail(f"{what}: sides are not the branching legs")
            continue
        right, bottom = _as_path(face(c, 2, PLUS)), _as_path(face(c, 1, PLUS))
        if right is None or bottom is None:
            out.fail(f"{what}: closing sides are not rewriting paths")
            continue
        out.checked += 1
        residual[(f, g)] = right
    for item in payload["branchings"]:
        legs = [path_from_json(p) for p in item["legs"]]
        res = {}
        for i in range(3):
            for j in range(3):
                if i != j:
                    res[(i + 1, j + 1)] = residual[(legs[i], legs[j])]
        for inst in item["instances"]:
            i, j, k = inst["ijk"]
            lhs = residual[(res[(i, j)], res[(k, j)])]
            rhs = residual[(res[(i, k)], res[(j, k)])]
            out.checked += 1
            if path_to_json(lhs) != inst["lhs"] or path_to_json(rhs) != inst["rhs"]:
                out.fail(f"{legs}: recorded residuals for {(i, j, k)} differ from the fillers")
            if lhs != rhs:
                out.fail(f"{legs}: cube law fails for {(i, j, k)}")
        if item.get("A3") is not None:
            A3 = _cell(ctx, item["A3"], out, f"{legs} A3")
            if A3 is not None:
                a = _as_path(face(face(A3, 2, PLUS), 2, PLUS))
                c = _as_path(face(face(A3, 3, PLUS), 2, PLUS))
                out.checked += 1
                if a is None or a != c or path_to_json(a) != item["face_route"][0]:
                    out.fail(f"{legs}: face route does not agree")


def _check_resolution(ctx: Context, payload: dict, out: Verification) -> None:
    R = ctx.system
    gens = {}
    for k, items in payload["keys"].items():
        for item in items:
            legs = tuple(path_from_json(p) for p in item["legs"])
            if len(legs) != int(k) or len({p.start for p in legs}) != 1:
                out.fail(f"key {legs}: wrong arity or sources")
                continue
            ranks = [tuple(R.rank(e) for e in p.steps) for p in legs]
            if ranks != sorted(set(ranks)):
                out.fail(f"key {legs}: legs are not strictly increasing")
            c = _cell(ctx, item["cell"], out, f"key {legs}")
            if c is None:
                continue
            if not isinstance(c, GenCell) or c.legs != legs:
                out.fail(f"key {legs}: cell is not the generator on these legs")
                continue
            gens[legs] = c
            _bounds(c, square_from_json(item["boundary"], ctx), out, f"key {legs}")
    repl = {}
    for item in payload.get("replacements", []):
        legs = tuple(path_from_json(p) for p in item["legs"])
        c = _cell(ctx, item["cell"], out, f"replacement {legs}")
        if c is not None:
            repl[legs] = c
    for legs, c in repl.items():
        S = boundary(ctx.gen(legs))
        faces = []
        for i in range(1, S.k + 2):
            sub = tuple(p for n, p in enumerate(legs) if n != i - 1)
            faces.append((repl.get(sub, S.face(i, MINUS)), S.face(i, PLUS)))
        if _bounds(c, Square(S.k, tuple(faces)), out, f"replacement {legs}") and c.dim == 3 and not is_thin(c):
            out.fail(f"replacement {legs}: three-dimensional replacement is not thin")


def _check_witness(ctx: Context, payload: dict, out: Verification) -> None:
    for n, item in enumerate(payload["items"]):
        S = square_from_json(item["square"], ctx)
        if S.k != 1:
            out.fail(f"item {n}: witnesses fill 1-squares")
            continue
        if _valid(S, out, f"item {n}"):
            c = _cell(ctx, item["cell"], out, f"item {n}")
            if c is not None:
                _bounds(c, S, out, f"item {n}")


_CHECKS = {
    "filler": _check_filler,
    "cube-law": _check_cube_law,
    "resolution": _check_resolution,
    "witness": _check_witness,
}

