"""cubecoh command line: convergence checks, confluence fillers, cube law,
resolutions, square fillers, witnesses, exports and certificate verification.

Exit codes: 0 ok, 1 a property failed (not convergent, a check did not pass),
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .ars import Branching, RewritingSystem, branchings, is_noetherian, non_joinable_peaks, parse_ars, strategy
from .cells import MINUS, PLUS, Comp, Square, boundary, face, show
from .certificates import dumps, make_certificate, path_to_json, verify_certificate
from .codec import cell_from_json, cell_to_json, square_from_json, square_to_json
from .confluence import Confluence
from .contraction import Contraction, fill_square
from .errors import ArsParseError, CubecohError, DimensionMismatch, IllTyped, NotConvergent
from .polygraph import generate, longest_path, truncate
from .sampling import CellSampler


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- helpers


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as ex:
        raise UsageError(f"cannot read {path}: {ex.strerror}") from None


def _load_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as ex:
        raise UsageError(f"{path}: invalid JSON ({ex})") from None


def _load_ars(path: str) -> RewritingSystem:
    return parse_ars(_read(path))


def _pmap(args, fn, items):
    items = list(items)
    if args.jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        return list(pool.map(fn, items))


def _emit(args, obj) -> None:
    text = obj if isinstance(obj, str) else dumps(obj) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finish(args, cert: dict) -> int:
    if args.verify:
        # independent re-check from the serialised payload
        again = verify_certificate(json.loads(dumps(cert)))
        if not again.ok:
            print("verification failed: " + "; ".join(again.errors[:5]), file=sys.stderr)
            cert["verified"] = False
    _emit(args, cert)
    return 0 if cert["verified"] else 1


def _confluence(R: RewritingSystem) -> Confluence:
    T = generate(R, 4, "local")
    C = Contraction(T)
    return Confluence(T, fill=lambda S: fill_square(C, S).B)


def _json_only(args) -> None:
    if args.format != "json":
        raise UsageError(f"{args.command} writes JSON only")


def _squares(args, ctx) -> list[Square]:
    obj = _load_json(args.square)
    objs = obj if isinstance(obj, list) else [obj]
    try:
        return [square_from_json(o, ctx) for o in objs]
    except (IllTyped, DimensionMismatch) as ex:
        raise UsageError(f"{args.square}: {ex}") from None


# ---------------------------------------------------------------- commands


def cmd_check(args) -> int:
    _json_only(args)
    R = _load_ars(args.file)
    nv = is_noetherian(R)
    peaks = non_joinable_peaks(R)
    report = {
        "vertices": len(R.vertices),
        "edges": len(R.edges),
        "noetherian": nv.noetherian,
        "cycle": None if nv.noetherian else path_to_json(nv.cycle),
        "locally_confluent": not peaks,
        "non_joinable_peaks": [[path_to_json(p) for p in b.legs] for b in peaks],
    }
    report["convergent"] = nv.noetherian and not peaks
    if report["convergent"]:
        S = strategy(R)
        report["normal_forms"] = dict(S.normal_form)
        report["sigma"] = {v: path_to_json(p) for v, p in S.sigma_path.items()}
        report["eta"] = dict(S.eta)
        report["critical_branchings"] = {
            str(k): [[path_to_json(p) for p in b.legs] for b in branchings(R, k, "critical")] for k in (2, 3)
        }
    report["verdict"] = (
        "convergent" if report["convergent"] else "not Noetherian" if not nv.noetherian else "not confluent"
    )
    _emit(args, report)
    return 0 if report["convergent"] else 1


def cmd_fillers(args) -> int:
    _json_only(args)
    R = _load_ars(args.file)
    K = _confluence(R)
    if args.mode == "local":
        bs = branchings(R, 2, "local")
    else:
        bs = branchings(R, 2, "all", args.bound or longest_path(R))

    def one(b: Branching):
        c = K.newman_extend(b)
        return {"legs": [path_to_json(p) for p in b.legs], "square": square_to_json(boundary(c)), "cell": cell_to_json(c)}

    items = _pmap(args, one, bs)
    inputs = {"mode": args.mode or "paths", "bound": args.bound}
    return _finish(args, make_certificate("filler", R, inputs, {"items": items}))


def cmd_cube_law(args) -> int:
    _json_only(args)
    R = _load_ars(args.file)
    K = _confluence(R)
    bs = branchings(R, 3, "local")
    reports = _pmap(args, K.check_cube_law, bs)
    pairs = []
    records = []
    for b, rep in zip(bs, reports):
        legs = b.legs
        need = [(legs[i], legs[j]) for (i, j) in ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))]
        res = {(i, j): rep.residuals[(i, j)] for (i, j) in rep.residuals}
        for (i, j, k), _, _ in rep.instances:
            need += [(res[(i, j)], res[(k, j)]), (res[(i, k)], res[(j, k)])]
        pairs += need
        rec = {
            "legs": [path_to_json(p) for p in legs],
            "residuals": {f"{i}|{j}": path_to_json(p) for (i, j), p in sorted(res.items())},
            "instances": [
                {"ijk": list(ijk), "lhs": path_to_json(lhs), "rhs": path_to_json(rhs)}
                for ijk, lhs, rhs in rep.instances
            ],
            "holds": rep.holds,
            "failures": rep.failures,
            "A3": None,
            "face_route": None,
        }
        if rep.face_route is not None:
            rec["A3"] = cell_to_json(K.fill_3_branching(b))
            rec["face_route"] = [path_to_json(p) for p in rep.face_route]
        records.append(rec)
    seen = list(dict.fromkeys(pairs))
    fillers = [
        {"legs": [path_to_json(f), path_to_json(g)], "cell": cell_to_json(K.newman_extend(Branching(f.start, (f, g))))}
        for f, g in seen
    ]
    cert = make_certificate("cube-law", R, {}, {"branchings": records, "fillers": fillers})
    code = _finish(args, cert)
    return code if all(r["holds"] for r in records) else 1


def cmd_resolve(args) -> int:
    _json_only(args)
    R = _load_ars(args.file)
    mode = args.mode or ("local" if args.truncated else "paths")
    if args.truncated and mode != "local":
        raise UsageError("--truncated starts from the local generators; drop --mode paths")
    T = generate(R, args.max_dim, mode, args.bound)
    replacements = {}
    if args.truncated:
        tr = truncate(T, fill=lambda small, S: fill_square(Contraction(small), S, bound=max(4, args.max_dim)).B)
        T, replacements = tr.table, tr.replacements
    keys = {}
    for k, legs_list in T.keys.items():
        keys[str(k)] = [
            {"legs": [path_to_json(p) for p in legs], "cell": cell_to_json(g), "boundary": square_to_json(boundary(g))}
            for legs, g in zip(legs_list, T.cells(k))
        ]
    repl = [
        {"legs": [path_to_json(p) for p in legs], "cell": cell_to_json(c), "square": square_to_json(boundary(c))}
        for legs, c in replacements.items()
    ]
    inputs = {"mode": mode, "max_dim": args.max_dim, "truncated": args.truncated, "path_bound": T.path_bound}
    return _finish(args, make_certificate("resolution", R, inputs, {"keys": keys, "replacements": repl}))


def cmd_fill_square(args) -> int:
    _json_only(args)
    R = _load_ars(args.file)
    m_bound = args.bound or 4
    T = generate(R, m_bound, "local")
    C = Contraction(T)
    if args.square:
        squares = _squares(args, T.ctx)
    else:
        rng = random.Random(args.seed)
        sampler = CellSampler(rng, T, C)
        squares = [sampler.square(1 + n % min(3, m_bound - 1)) for n in range(args.random)]

    def one(S: Square):
        F = fill_square(C, S, bound=m_bound)
        return {
            "square": square_to_json(S),
            "folded_square": square_to_json(F.folded_square),
            "g_minus": cell_to_json(F.g_minus),
            "g_plus": cell_to_json(F.g_plus),
            "A": cell_to_json(F.A),
            "cell": cell_to_json(F.B),
        }

    items = _pmap(args, one, squares)
    inputs = {"seed": None if args.square else args.seed, "bound": m_bound}
    return _finish(args, make_certificate("filler", R, inputs, {"items": items}))


def cmd_witness(args) -> int:
    _json_only(args)
    R = _load_ars(args.file)
    K = _confluence(R)
    if args.square:
        squares = _squares(args, K.ctx)
    else:
        rng = random.Random(args.seed)
        sampler = CellSampler(rng, K.table, Contraction(K.table))
        squares = [sampler.zigzag_square() for _ in range(args.random)]
    items = _pmap(
        args, lambda S: {"square": square_to_json(S), "cell": cell_to_json(K.squier_witness(S))}, squares
    )
    inputs = {"seed": None if args.square else args.seed}
    return _finish(args, make_certificate("witness", R, inputs, {"items": items}))


def ars_dot(R: RewritingSystem) -> str:
    lines = ["digraph ars {", "  rankdir=LR;"]
    lines += [f'  "{v}";' for v in R.vertices]
    for e in R.edges:
        rank = R.rank(e.name)
        lines.append(f'  "{e.source}" -> "{e.target}" [label="{e.name}", taillabel="{rank}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _pieces(c, out: list) -> None:
    if isinstance(c, Comp) and c.i in (1, 2):
        _pieces(c.a, out)
        _pieces(c.b, out)
    else:
        out.append(c)


def cell_dot(c) -> str:
    """A 2-cell pasting drawn as one cluster per atomic piece with its four sides."""
    if c.dim != 2:
        raise UsageError("pasting diagrams are drawn for 2-cells")
    pieces: list = []
    _pieces(c, pieces)
    lines = ["digraph pasting {", "  compound=true;"]
    for n, p in enumerate(pieces):
        lines.append(f"  subgraph cluster_{n} {{")
        label = show(p).replace('"', "'")
        lines.append(f'    label="{label}";')
        corners = {k: f"p{n}_{k}" for k in ("nw", "ne", "sw", "se")}
        for name in corners.values():
            lines.append(f'    {name} [shape=point];')
        sides = (
            ("nw", "ne", face(p, 1, MINUS)),
            ("sw", "se", face(p, 1, PLUS)),
            ("nw", "sw", face(p, 2, MINUS)),
            ("ne", "se", face(p, 2, PLUS)),
        )
        for a, b, side in sides:
            text = show(side).replace('"', "'")
            lines.append(f'    {corners[a]} -> {corners[b]} [label="{text}"];')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export(args) -> int:
    R = _load_ars(args.file)
    if args.cell:
        ctx = generate(R, 2, "local").ctx
        try:
            c = cell_from_json(_load_json(args.cell), ctx)
        except (IllTyped, DimensionMismatch) as ex:
            raise UsageError(f"{args.cell}: {ex}") from None
        if args.format == "dot":
            _emit(args, cell_dot(c))
        else:
            _emit(args, {"cell": cell_to_json(c), "boundary": square_to_json(boundary(c)), "show": show(c)})
        return 0
    if args.format == "dot":
        _emit(args, ars_dot(R))
    else:
        obj = {"ars": R.to_json()}
        if is_noetherian(R) and not non_joinable_peaks(R):
            obj["strategy"] = strategy(R).to_json()
        _emit(args, obj)
    return 0


def cmd_verify(args) -> int:
    _json_only(args)
    results = {}
    for path in args.certs:
        cert = _load_json(path)
        if not isinstance(cert, dict) or "kind" not in cert:
            raise UsageError(f"{path}: not a certificate")
        v = verify_certificate(cert)
        results[path] = {"kind": cert["kind"], **v.to_json()}
    _emit(args, {"results": results, "ok": all(r["ok"] for r in results.values())})
    return 0 if all(r["ok"] for r in results.values()) else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-dim", type=int, default=3, help="largest generator dimension (resolve)")
    common.add_argument("--mode", choices=("paths", "local"), default=None,
                        help="generator or branching indexing: all paths or single edges")
    common.add_argument("--truncated", action="store_true", help="keep only the eta generators (resolve)")
    common.add_argument("--bound", type=int, default=None,
                        help="path-length bound; for fill-square the largest filler dimension (default 4)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker threads; output does not depend on it")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--out", help="write here instead of stdout")
    common.add_argument("--verify", action="store_true", help="re-verify certificates before writing")

    p = argparse.ArgumentParser(prog="cubecoh", description="Cubical coherence for abstract rewriting systems.")
    p.add_argument("--version", action="version", version=f"cubecoh {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="termination and confluence verdicts")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("fillers", parents=[common], help="normalising fillers of 2-branchings")
    s.add_argument("file")
    s.set_defaults(func=cmd_fillers)

    s = sub.add_parser("cube-law", parents=[common], help="cube law on local 3-branchings")
    s.add_argument("file")
    s.set_defaults(func=cmd_cube_law)

    s = sub.add_parser("resolve", parents=[common], help="generator tables and truncation")
    s.add_argument("file")
    s.set_defaults(func=cmd_resolve)

    s = sub.add_parser("fill-square", parents=[common], help="fill squares through the contraction")
    s.add_argument("file")
    s.add_argument("square", nargs="?", help="JSON square or list of squares ('-' for stdin)")
    s.add_argument("--random", type=int, default=10, help="number of random squares when none is given")
    s.set_defaults(func=cmd_fill_square)

    s = sub.add_parser("witness", parents=[common], help="witness 2-cells for squares of zigzags")
    s.add_argument("file")
    s.add_argument("square", nargs="?", help="JSON 1-square or list of them ('-' for stdin)")
    s.add_argument("--random", type=int, default=10, help="number of random squares when none is given")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("export", parents=[common], help="DOT or JSON export of the system or a 2-cell")
    s.add_argument("file")
    s.add_argument("--cell", help="JSON cell to draw as a pasting diagram")
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("verify", parents=[common], help="re-check certificates")
    s.add_argument("certs", nargs="+")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except (UsageError, ArsParseError) as ex:
        print(f"cubecoh: {ex}", file=sys.stderr)
        return 2
    except NotConvergent as ex:
        print(f"cubecoh: not convergent: {ex}", file=sys.stderr)
        return 1
    except CubecohError as ex:
        print(f"cubecoh: {type(ex).__name__}: {ex}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
