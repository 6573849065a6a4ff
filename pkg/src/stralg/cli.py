"""Command-line front end: ``stralg <command> ALGEBRA [options]``."""

from __future__ import annotations

import argparse
import json
import re
import sys

from .bands import Indeterminate, band_structure
from .completion import UnsupportedCompletion, classify_limit_location, complete_catalog, gap_census, is_dual_limit
from .condensation import BContext
from .hammock import HammockKey, enumerate_hammock, extremal_strings, pred_l, succ_l
from .ordertype import ExprSyntaxError, expr_to_json, hammock_order_type, parse_expr, render_expr
from .presentation import AlgebraError, format_algebra, load_algebra, validate_algebra
from .strings import StringError, parse_string, render

EXIT_OK, EXIT_INPUT, EXIT_INDETERMINATE, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _side(text: str) -> int:
    if text not in ("+1", "1", "-1", "+", "-"):
        raise argparse.ArgumentTypeError("side must be +1 or -1")
    return -1 if text.startswith("-") else 1


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _emit(data, fmt: str, text: str):
    if fmt == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _key(spec, args) -> HammockKey:
    return HammockKey(parse_string(spec, args.string), args.side)


def _class(spec, name: str):
    poset = band_structure(spec).poset
    m = re.fullmatch(r"K(\d+)", name)
    if m:
        ident = int(m.group(1))
        for c in poset.classes:
            if c.id == ident:
                return c
        raise InputError(f"no class {name}")
    try:
        return poset.find(name)
    except KeyError:
        raise InputError(f"no band class contains {name}") from None


def _context(spec, args) -> BContext:
    return BContext(_key(spec, args), _class(spec, args.cls))


# ---------------------------------------------------------------- commands


def cmd_check(spec, args):
    problems = validate_algebra(spec)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return EXIT_INPUT
    data = {"vertices": len(spec.vertices), "arrows": len(spec.arrows), "relations": len(spec.relations)}
    _emit({"ok": True, **data}, args.format, "ok\n" + format_algebra(spec).rstrip())
    return EXIT_OK


def cmd_bands(spec, args):
    structure = band_structure(spec)
    poset = structure.poset
    if args.string is not None:
        if args.side is None:
            raise InputError("--string needs --side")
        classes, _ = structure.reachable_classes(parse_string(spec, args.string), args.side)
        poset = poset.restrict(classes)
    minimal = {c.id for c in poset.minimal(poset.classes)}
    if args.format == "dot":
        print(poset.to_dot(), end="")
        return EXIT_OK
    data = {
        "classes": [
            {
                "name": c.name,
                "domestic": c.domestic,
                "bands": [str(b) for b in c.bands],
                "minimal": c.id in minimal,
            }
            for c in poset.classes
        ],
        "order": [[f"K{a}", f"K{b}"] for a, b in poset.hasse()],
    }
    lines = [f"{c} {'domestic' if c.domestic else 'non-domestic'}{' minimal' if c.id in minimal else ''}" for c in poset.classes]
    lines += [f"K{a} < K{b}" for a, b in poset.hasse()]
    _emit(data, args.format, "\n".join(lines))
    return EXIT_OK


def cmd_hammock(spec, args):
    key = _key(spec, args)
    if args.succ or args.pred:
        x = parse_string(spec, args.succ or args.pred)
        if not key.contains(x):
            raise InputError(f"{render(x)} is not in the hammock {key}")
        y = succ_l(x, key) if args.succ else pred_l(x, key)
        out = None if y is None else render(y)
        _emit({"result": out}, args.format, out if out is not None else "none")
        return EXIT_OK
    items = [render(y) for y in enumerate_hammock(key, args.depth)]
    low, high = extremal_strings(key)
    data = {"hammock": str(key), "min": render(low), "max": render(high), "elements": items}
    _emit(data, args.format, "\n".join(items))
    return EXIT_OK


def cmd_condense(spec, args):
    ctx = _context(spec, args)
    if args.query:
        x = parse_string(spec, args.query)
        if not ctx.key.contains(x):
            raise InputError(f"{render(x)} is not in the hammock {ctx.key}")
        info = ctx.condense(x)
        data = {k: (render(v) if hasattr(v, "letters") else v) for k, v in info.items()}
        _emit(data, args.format, "\n".join(f"{k}: {v}" for k, v in sorted(data.items())))
        return EXIT_OK
    ctx.require_minimal()
    report = ctx.beam_structure()
    data = {
        "class": ctx.cls.name,
        "boundaries": [render(y) for y in report.boundaries],
        "nB": report.nB,
        "kB": report.kB,
        "centers": [str(c) for c in report.centerClasses],
        "left_end": [render(y) for y in report.endSegments[0]],
        "right_end": [render(y) for y in report.endSegments[1]],
    }
    text = "\n".join(f"{k}: {v}" for k, v in data.items())
    _emit(data, args.format, text)
    return EXIT_OK


def cmd_ordertype(spec, args):
    e = hammock_order_type(_key(spec, args))
    _emit({"text": render_expr(e), "tree": expr_to_json(e)}, args.format, render_expr(e))
    return EXIT_OK


def cmd_limits(spec, args):
    ctx = _context(spec, args)
    x = parse_string(spec, args.source) if args.source else ctx.key.base
    out = {}
    for direction, name in ((1, "up"), (-1, "down")):
        try:
            ap = ctx.ost_limit(x, direction)
        except (ValueError, StringError) as err:
            out[name] = {"limit": None, "reason": str(err)}
            continue
        entry = {"limit": str(ap)}
        if ctx.minimal:
            entry["location"] = classify_limit_location(ctx, ap).value
            entry["dual"] = is_dual_limit(ctx, ap)
        out[name] = entry
    text = "\n".join(
        f"{name}: {v['limit'] or 'none'}" + (f" {v['location']}" if v.get("location") else "") for name, v in out.items()
    )
    _emit(out, args.format, text)
    return EXIT_OK


def cmd_completion(spec, args):
    if args.expr:
        report = complete_catalog(parse_expr(args.expr))
        data = report.to_json()
        _emit(data, args.format, json.dumps(data, sort_keys=True))
        return EXIT_OK
    if args.cls is None or args.string is None or args.side is None:
        raise InputError("completion needs --expr, or --class with --string and --side")
    census = gap_census(_context(spec, args))
    data = census.to_json()
    tags = sorted(t.value for t in census.tags())
    _emit({**data, "tags": tags}, args.format, " ".join(tags))
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "bands": cmd_bands,
    "hammock": cmd_hammock,
    "condense": cmd_condense,
    "ordertype": cmd_ordertype,
    "limits": cmd_limits,
    "completion": cmd_completion,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stralg", description="Hammock order types of string algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_text, *, needs_key=False, formats=("text", "json")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("algebra", help="algebra file")
        p.add_argument("--format", choices=formats, default="text")
        if needs_key:
            p.add_argument("--string", required=True, help="base string x0")
            p.add_argument("--side", type=_side, required=True, help="+1 or -1")
        return p

    command("check", "validate the presentation")
    p = command("bands", "prime bands and their poset", formats=("text", "json", "dot"))
    p.add_argument("--string", help="restrict to classes reachable from this base")
    p.add_argument("--side", type=_side)
    p = command("hammock", "enumerate a hammock or query neighbours", needs_key=True)
    p.add_argument("--depth", type=_positive, default=4)
    p.add_argument("--succ", help="print the successor of this element")
    p.add_argument("--pred", help="print the predecessor of this element")
    p = command("condense", "beam report or condensation of one element", needs_key=True)
    p.add_argument("--class", dest="cls", required=True, help="K<id> or a band of the class")
    p.add_argument("--query", help="element to condense")
    command("ordertype", "normalized order type of a hammock", needs_key=True)
    p = command("limits", "neighbour-chain limits and their gap locations", needs_key=True)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--from", dest="source", help="start of the chains (default: the base)")
    p = command("completion", "gap census of a class or completion of a catalogued expression")
    p.add_argument("--class", dest="cls")
    p.add_argument("--string")
    p.add_argument("--side", type=_side)
    p.add_argument("--expr", help="expression in the text grammar")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_algebra(args.algebra)
        return COMMANDS[args.command](spec, args)
    except Indeterminate as err:
        print(f"INDETERMINATE: {err}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except AssertionError as err:
        print(f"internal invariant failed: {err}", file=sys.stderr)
        return EXIT_INTERNAL
    except (OSError, AlgebraError, StringError, ExprSyntaxError, UnsupportedCompletion, InputError, ValueError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
