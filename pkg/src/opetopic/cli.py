"""Command line interface.

Exit codes: 0 success, 1 a check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Optional, Sequence

from opetopic import category, osets, verify
from opetopic.opetopes import Opetope, enumerate_opetopes, parse_code, render_text, to_dot

FORMATS = ("text", "json", "dot")


class InvalidInput(Exception):
    pass


def _load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInput(f"cannot read {path}: {e}") from e


def load_opetope(arg: str) -> Opetope:
    """An opetope from a JSON file, or from a canonical code given inline."""
    try:
        if os.path.exists(arg):
            data = _load_json(arg)
            return parse_code(data) if isinstance(data, str) else Opetope.from_json(data)
        return parse_code(arg)
    except InvalidInput:
        raise
    except (ValueError, KeyError, TypeError) as e:
        raise InvalidInput(f"invalid opetope {arg!r}: {e}") from e


def _dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=False, default=list)


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ------------------------------------------------------------ commands


def cmd_enumerate(args) -> int:
    found = enumerate_opetopes(args.dim, args.max_nodes, args.max_arity)
    if args.format == "json":
        _emit(args, _dumps([o.code for o in found]))
        return 0
    lines = []
    for o in found:
        nodes = o.arity if o.dim >= 2 else 0
        widest = max((n.arity for n in o.nodes), default=0) if o.dim >= 2 else 0
        lines.append(f"{o.code}\tnodes={nodes}\tmax_arity={widest}")
    lines.append(f"# {len(found)} opetopes")
    _emit(args, "\n".join(lines))
    return 0


def cmd_faces(args) -> int:
    o = load_opetope(args.opetope)
    table = category.face_table(o)
    if args.format == "json":
        _emit(args, _dumps({"counts": list(table.counts()), "table": table.to_json()}))
        return 0
    lines = [f"counts (dim {o.dim}..0): {' '.join(map(str, table.counts()))}"]
    for m in range(o.dim, -1, -1):
        for cls in table.classes[m]:
            bd = " ".join(
                f"{category._gen_name(cls.shape, p)}={b}" for p, b in enumerate(cls.boundary)
            )
            lines.append(f"dim {m} class {cls.index}: {cls.shape.code}  {bd}".rstrip())
    _emit(args, "\n".join(lines))
    return 0


def cmd_target(args) -> int:
    o = load_opetope(args.opetope)
    if o.dim == 0:
        raise InvalidInput("no target: a 0-opetope has no faces")
    t = o.target
    _emit(args, _dumps(t.to_json()) if args.format == "json" else t.code)
    return 0


def cmd_hom(args) -> int:
    x, a = load_opetope(args.source), load_opetope(args.opetope)
    homs = category.hom(x, a)
    if args.format == "json":
        _emit(
            args,
            _dumps([{"address": list(h.address), "word": h.word().to_json()} for h in homs]),
        )
        return 0
    lines = [f"{len(homs)} morphisms"]
    for h in homs:
        lines.append(f"face {h.address}: {' ; '.join(map(repr, h.word().steps))}")
    _emit(args, "\n".join(lines))
    return 0


def cmd_normalize(args) -> int:
    try:
        w = category.MorphismWord.from_json(_load_json(args.word))
    except InvalidInput:
        raise
    except (ValueError, KeyError, TypeError) as e:
        raise InvalidInput(f"invalid word: {e}") from e
    nf, steps = category.normalize_counted(w)
    if args.format == "json":
        _emit(args, _dumps({"normal_form": nf.to_json(), "steps": steps, "address": list(category.face_address(w))}))
    else:
        _emit(args, f"{' ; '.join(map(repr, nf.steps))}\n# {steps} rewrite steps")
    return 0


def cmd_realize(args) -> int:
    o = load_opetope(args.opetope)
    X = osets.realize(o)
    if args.format == "json":
        _emit(args, _dumps(X.to_json()))
    else:
        _emit(args, f"cells per dimension: {' '.join(map(str, X.counts()))}")
    return 0


def cmd_colim(args) -> int:
    try:
        D = osets.Diagram.from_json(_load_json(args.diagram))
    except InvalidInput:
        raise
    except (ValueError, KeyError, TypeError, IndexError) as e:
        raise InvalidInput(f"invalid diagram: {e}") from e
    errors = D.errors()
    if errors:
        raise InvalidInput("non-functorial diagram: " + "; ".join(errors))
    col = osets.colimit(D)
    try:
        ok = osets.is_colimit(col.apex, col.coprojections, D)
    except ValueError as e:
        print(f"warning: universal property not checked ({e})", file=sys.stderr)
        ok = True
    if args.format == "json":
        _emit(args, _dumps(col.to_json()))
    else:
        _emit(args, f"cells per dimension: {' '.join(map(str, col.apex.counts()))}")
    if not ok:
        print("colimit self-check failed", file=sys.stderr)
        return 1
    return 0


def cmd_openings(args) -> int:
    try:
        X = osets.OpetopicSet.from_json(_load_json(args.oset))
    except InvalidInput:
        raise
    except (ValueError, KeyError, TypeError) as e:
        raise InvalidInput(f"invalid opetopic set: {e}") from e
    found = osets.enumerate_openings(X, args.dim, args.max_nodes, args.max_arity)
    if args.format == "json":
        _emit(
            args,
            _dumps(
                [
                    {"shape": p.shape, "labels": {f"{m}/{c}": y for (m, c), y in p.labels}}
                    for p in found
                ]
            ),
        )
    else:
        lines = [f"{p.shape}  " + " ".join(f"{m}/{c}={y}" for (m, c), y in p.labels) for p in found]
        lines.append(f"# {len(found)} openings")
        _emit(args, "\n".join(lines))
    return 0


def cmd_check(args) -> int:
    bounds = {"seed": args.seed}
    if args.max_nodes_set:
        bounds["face_opetopes"] = [(d, args.max_nodes, args.max_arity) for d in range(2, args.dim + 1)]
    reports = verify.run_checks(bounds, only=args.only or None, mutate=args.mutate, seed=args.seed)
    lines = "\n".join(r.to_json() for r in reports)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(lines + "\n")
        print(verify.summary_table(reports))
    elif args.format == "json":
        print(lines)
    else:
        print(verify.summary_table(reports))
    return 0 if all(r.passed for r in reports) else 1


def cmd_render(args) -> int:
    o = load_opetope(args.opetope)
    if args.format == "text":
        _emit(args, render_text(o))
    elif args.format == "json":
        _emit(args, _dumps(o.to_json()))
    else:
        _emit(args, to_dot(o))
    return 0


# ------------------------------------------------------------ parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(2)


def _positive(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("bounds must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", help="write the result to this file")
    common.add_argument("--seed", type=int, default=verify.BOUNDS["seed"])

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--dim", type=_positive, default=2)
    bounds.add_argument("--max-nodes", type=_positive, default=3)
    bounds.add_argument("--max-arity", type=_positive, default=3)

    p = _Parser(prog="opetopic", description="Opetopes, their faces, and opetopic sets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("enumerate", parents=[common, bounds], help="list opetopes within bounds")
    s.set_defaults(fn=cmd_enumerate)

    s = sub.add_parser("faces", parents=[common], help="face table of an opetope")
    s.add_argument("opetope", help="JSON file or canonical code")
    s.set_defaults(fn=cmd_faces)

    s = sub.add_parser("target", parents=[common], help="target face of an opetope")
    s.add_argument("opetope")
    s.set_defaults(fn=cmd_target)

    s = sub.add_parser("hom", parents=[common], help="morphisms between two opetopes")
    s.add_argument("source")
    s.add_argument("opetope")
    s.set_defaults(fn=cmd_hom)

    s = sub.add_parser("normalize", parents=[common], help="normal form of a generator word")
    s.add_argument("word", help="JSON file holding an array of generator records")
    s.set_defaults(fn=cmd_normalize)

    s = sub.add_parser("realize", parents=[common], help="the representable opetopic set")
    s.add_argument("opetope")
    s.set_defaults(fn=cmd_realize)

    s = sub.add_parser("colim", parents=[common], help="colimit of a diagram of opetopic sets")
    s.add_argument("diagram")
    s.set_defaults(fn=cmd_colim)

    s = sub.add_parser("openings", parents=[common, bounds], help="openings of a given dimension")
    s.add_argument("oset")
    s.set_defaults(fn=cmd_openings)

    s = sub.add_parser("check", parents=[common, bounds], help="run the verification suite")
    s.add_argument("--only", action="append", help="suite or check name (repeatable)")
    s.add_argument("--mutate", choices=verify.MUTATIONS)
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("render", parents=[common], help="draw an opetope")
    s.add_argument("opetope")
    s.set_defaults(fn=cmd_render, format="dot")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    args.max_nodes_set = any(a.startswith("--max-nodes") or a.startswith("--max-arity") for a in argv)
    if args.command == "render" and not any(a.startswith("--format") for a in argv):
        args.format = "dot"
    try:
        return args.fn(args)
    except InvalidInput as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
