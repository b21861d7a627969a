"""Command-line front end.

Exit status: 0 when the command succeeds or the checked property holds,
1 when a property fails or a witness is found, 2 on bad input.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import complexes as cxm
from . import functions as fnm
from .adjacency import check_refinement, connectivity, level_graph
from .core import ContinuumError, InputError, RefinementViolation, pattern_from_json, pattern_to_dict
from .export import (
    dumps,
    level_graph_to_dict,
    level_graph_to_dot,
    render_svg,
    shape_tree_to_dot,
)
from .patterns import builtin_names, get_pattern
from .structure import (
    DEFAULT_RADIUS,
    border_ranks,
    check_homogeneity,
    check_indiscernibility,
    dimension_report,
    flagged_level_graph,
)


class _Failed(Exception):
    """Raised inside a command to turn its output into exit status 1."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def load_pattern(ref: str):
    if ref.endswith(".json") or Path(ref).is_file():
        return pattern_from_json(_read(ref), ref)
    return get_pattern(ref)


def _depth(args, default: int | None = None) -> int:
    k = args.depth if args.depth is not None else default
    if k is None:
        raise InputError("--depth is required")
    if k < 1:
        raise InputError(f"--depth must be >= 1, got {k}")
    return k


def _report_text(report: dict) -> str:
    verdict = "pass" if report["passed"] else "FAIL"
    head = f"{report['property']} {report.get('pattern', report.get('function', ''))}"
    if "depth" in report:
        head += f" depth {report['depth']}"
    lines = [f"{head}: {verdict}"]
    for key, label in (("witnesses", "witness"), ("violations", "violation")):
        for item in report.get(key, [])[:20]:
            lines.append(f"  {label}: {item}")
    return "\n".join(lines) + "\n"


def _emit_report(report: dict, fmt: str) -> str:
    text = dumps(report) if fmt == "json" else _report_text(report)
    if not report["passed"]:
        raise _Failed(text)
    return text


# ---------------------------------------------------------------------------
# commands


def cmd_pattern(args) -> str:
    if args.action == "list":
        return "\n".join(builtin_names()) + "\n"
    p = load_pattern(args.pattern)
    if args.format == "text":
        return f"pattern {p.name}\n{p.rule_table()}\n"
    return dumps(pattern_to_dict(p))


def cmd_graph(args) -> str:
    p = load_pattern(args.pattern)
    k = _depth(args)
    g = flagged_level_graph(p, k) if args.borders else level_graph(p, k)
    fmt = args.format or "dot"
    if fmt == "dot":
        return level_graph_to_dot(g)
    if fmt == "json":
        return dumps(level_graph_to_dict(g))
    if fmt == "text":
        return "".join(f"{g.label(i)} -- {g.label(j)} {o.value}\n" for (i, j), o in zip(g.edges, g.origins))
    raise InputError(f"graph cannot be written as {fmt}")


def cmd_check(args) -> str:
    p = load_pattern(args.pattern)
    fmt = args.format or "text"
    prop = args.property
    if prop == "refinement":
        report = check_refinement(p, _depth(args)).to_dict()
    elif prop == "connectivity":
        report = connectivity(p, _depth(args)).to_dict()
    elif prop == "indiscernibility":
        report = check_indiscernibility(p).to_dict()
    elif prop == "homogeneity":
        report = check_homogeneity(p, _depth(args), args.radius).to_dict()
    else:
        report = dimension_report(p, args.depth, args.radius).to_dict()
    return _emit_report(report, fmt)


def cmd_borders(args) -> str:
    p = load_pattern(args.pattern)
    k = _depth(args)
    g = level_graph(p, k)
    ranks = border_ranks(p, k)
    rows = [(g.label(c), r) for c, r in enumerate(ranks) if r is not None]
    if (args.format or "text") == "json":
        census: dict[str, int] = {}
        for _, r in rows:
            census[str(r)] = census.get(str(r), 0) + 1
        return dumps({"pattern": p.name, "depth": k, "census": census, "cells": {c: r for c, r in rows}})
    return "".join(f"{c} {r}\n" for c, r in rows)


def _load_complex(args) -> cxm.Complex:
    if args.image:
        try:
            data = Path(args.image).read_bytes()
        except OSError as exc:
            raise InputError(f"{args.image}: {exc.strerror}") from None
        return cxm.complex_from_image(cxm.read_netpbm(data, args.image))
    if args.complex:
        return cxm.complex_from_json(_read(args.complex), args.complex)
    p = load_pattern(args.pattern)
    rng = random.Random(args.seed)
    return cxm.random_complex(p, _depth(args), rng, args.black)


def cmd_complex(args) -> str:
    cx = _load_complex(args)
    fmt = args.format or ("text" if args.action != "show" else "json")
    if args.action == "show":
        return cxm.complex_to_json(cx)
    seg = cxm.segments(cx)
    if args.action == "segments":
        if fmt == "json":
            return dumps(
                {
                    "root": seg.root,
                    "segments": [vars(s) for s in seg.segments],
                    "cells": {cx.graph.label(c): seg.node_segment[c] for c in range(len(cx.colors))},
                }
            )
        return "".join(f"{s.id} color={s.color} size={s.size} first={s.first}\n" for s in seg.segments)
    tree = cxm.segment_adjacency(cx, seg)
    if fmt == "dot":
        text = shape_tree_to_dot(tree)
    elif fmt == "json":
        text = dumps(tree.to_dict())
    else:
        text = f"nodes {len(tree.nodes)} edges {len(tree.edges)} root {tree.root} tree {tree.is_tree}\n"
        text += "".join(f"{a} -- {b}\n" for a, b in tree.edges)
    if not tree.is_tree:
        raise _Failed(text)
    return text


def _load_function(args) -> fnm.CellFunction:
    if args.fn in fnm.BUILTIN_FUNCTIONS:
        p = load_pattern(args.pattern)
        return fnm.builtin_function(args.fn, p, max(16, args.depth or 0))
    if args.fn == "random":
        p = load_pattern(args.pattern)
        return fnm.random_monotone_function(p, _depth(args), random.Random(args.seed), args.scramble)
    return fnm.function_from_json(_read(args.fn), args.fn)


def cmd_fn(args) -> str:
    f = _load_function(args)
    fmt = args.format or ("json" if args.action == "brouwer" else "text")
    if args.action == "image":
        if not args.cell:
            raise InputError("--cell is required for fn image")
        s = f.domain.cell(args.cell)
        image = fnm.stream_image(f, s)
        return dumps({"stream": str(s), "image": str(image)}) if fmt == "json" else f"{image or 'c_0'}\n"
    if args.action == "table":
        return dumps(fnm.function_to_dict(f, args.depth))
    K = _depth(args)
    if args.action == "brouwer":
        w = fnm.brouwer_witness(f, K)
        if w is None:
            report = {"function": f.name, "depth": K, "witness": None}
            return dumps(report) if fmt == "json" else f"brouwer {f.name} depth {K}: no witness\n"
        data = {"function": f.name, "depth": K, "witness": w.to_dict()}
        raise _Failed(dumps(data) if fmt == "json" else f"brouwer {f.name} depth {K}: witness\n" + "".join(
            f"  {key}: {value}\n" for key, value in w.to_dict().items()
        ))
    check = {"monotonic": fnm.is_monotonic, "strict": fnm.is_strict, "continuous": fnm.is_continuous}[args.action]
    return _emit_report(check(f, K).to_dict(), fmt)


def cmd_render(args) -> str:
    if args.complex or args.image:
        cx = _load_complex(args)
        return render_svg(cx.pattern, cx.depth, cx, overlay=args.overlay)
    p = load_pattern(args.pattern)
    return render_svg(p, _depth(args), overlay=args.overlay)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="continuum", description="Discrete continuum patterns and complexes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, pattern_default="euclid2"):
        sp.add_argument("--pattern", default=pattern_default, help="built-in name or pattern JSON file")
        sp.add_argument("--depth", type=int)
        sp.add_argument("--format", choices=["dot", "json", "text", "svg"])
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write output here instead of stdout")

    sp = sub.add_parser("pattern", help="show or list patterns")
    sp.add_argument("action", choices=["show", "list"])
    common(sp)
    sp.set_defaults(func=cmd_pattern)

    sp = sub.add_parser("graph", help="level graphs")
    sp.add_argument("action", choices=["gen"])
    sp.add_argument("--borders", action="store_true", help="mark border cells")
    common(sp)
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("check", help="structural properties")
    sp.add_argument(
        "property", choices=["refinement", "connectivity", "indiscernibility", "homogeneity", "dimension"]
    )
    sp.add_argument("--radius", type=int, default=DEFAULT_RADIUS, help="neighbourhood radius for homogeneity")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("borders", help="border cells and their ranks")
    common(sp)
    sp.set_defaults(func=cmd_borders)

    sp = sub.add_parser("complex", help="segments and shape trees of colored complexes")
    sp.add_argument("action", choices=["segments", "tree", "show"])
    sp.add_argument("--complex", help="complex JSON file")
    sp.add_argument("--image", help="PBM/PGM bitmap for a euclid2 complex")
    sp.add_argument("--black", type=float, default=0.5, help="black probability for random complexes")
    common(sp)
    sp.set_defaults(func=cmd_complex)

    sp = sub.add_parser("fn", help="cell functions")
    sp.add_argument("action", choices=["monotonic", "strict", "continuous", "brouwer", "image", "table"])
    sp.add_argument("--fn", required=True, help="identity, head_const, reverse, random, or a table JSON file")
    sp.add_argument("--cell", help="stream prefix for fn image")
    sp.add_argument("--scramble", type=float, default=1.0, help="permutation probability for --fn random")
    common(sp, pattern_default="euclid1")
    sp.set_defaults(func=cmd_fn)

    sp = sub.add_parser("render", help="SVG picture of a subdivision or complex")
    sp.add_argument("--complex", help="complex JSON file")
    sp.add_argument("--image", help="PBM/PGM bitmap for a euclid2 complex")
    sp.add_argument("--overlay", action="store_true", help="draw the adjacency graph")
    sp.add_argument("--black", type=float, default=0.5)
    common(sp)
    sp.set_defaults(func=cmd_render)
    return parser


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _write(args.func(args), args.out)
        return 0
    except _Failed as failed:
        _write(str(failed), args.out)
        return 1
    except RefinementViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ContinuumError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
