"""DOT / JSON serialisation and SVG pictures of the geometric realisations.

All output is canonical: nodes in code order, edges sorted, fixed float
formatting, so identical inputs give byte-identical text.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .adjacency import LevelGraph, level_graph
from .complexes import BLACK, Complex, ShapeTree
from .core import AdjacencyPattern, InputError, UnsupportedPatternError
from .patterns import ProductPattern, carpet_product, euclid_dimension, euclid_product

SVG_SIZE = 512
SVG_MARGIN = 16
PALETTE = {1: "#ffffff", 2: "#202020", 3: "#d62728", 4: "#1f77b4", 5: "#2ca02c", 6: "#ff7f0e", 7: "#9467bd"}


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def level_graph_to_dot(g: LevelGraph) -> str:
    lines = [f"graph {_quote(f'{g.pattern_name} depth {g.depth}')} {{"]
    for code in range(g.node_count):
        attrs = ' [border="true"]' if g.border_flags and g.border_flags[code] else ""
        lines.append(f"  {_quote(g.label(code))}{attrs};")
    for (i, j), origin in zip(g.edges, g.origins):
        lines.append(f'  {_quote(g.label(i))} -- {_quote(g.label(j))} [origin="{origin.value}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def level_graph_to_dict(g: LevelGraph) -> dict:
    data = {
        "pattern": g.pattern_name,
        "depth": g.depth,
        "nodes": [g.label(c) for c in range(g.node_count)],
        "edges": [[g.label(i), g.label(j), o.value] for (i, j), o in zip(g.edges, g.origins)],
    }
    if g.border_flags is not None:
        data["border"] = [g.label(c) for c, flag in enumerate(g.border_flags) if flag]
    return data


def shape_tree_to_dot(tree: ShapeTree) -> str:
    lines = ["graph shape_tree {"]
    for s in tree.nodes:
        shape = "doublecircle" if s.id == tree.root else "circle"
        lines.append(
            f'  {s.id} [label="{s.id}: {s.first} ({s.size})", color_index={s.color}, shape={shape}];'
        )
    for a, b in tree.edges:
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# geometry


def _product_boxes(pp: ProductPattern, k: int) -> list[tuple[Fraction, ...]]:
    """Axis-aligned box ``(x0, y0, x1, y1)`` in the unit square for every cell code."""
    scale = pp.radix**k
    L = pp.pattern.size
    boxes = []
    for code in range(L**k):
        word = []
        c = code
        for _ in range(k):
            c, r = divmod(c, L)
            word.append(r)
        coords = pp.coordinates(tuple(reversed(word)))
        x = Fraction(coords[0], scale)
        y = Fraction(coords[1], scale) if pp.n > 1 else Fraction(0)
        h = Fraction(1, scale) if pp.n > 1 else Fraction(1, 8)
        boxes.append((x, y, x + Fraction(1, scale), y + h))
    return boxes


def triangle_corners(k: int) -> list[tuple[tuple[int, int], ...]]:
    """Integer corners (on a ``2^k`` lattice) of every depth-``k`` triangle cell.

    Child ``s`` of a cell occupies the sub-triangle at the corner its
    orientation assigns to ``s``; the orientation then swaps the two other
    symbols, which is what makes the suffix rules of the gasket come out.
    """
    size = 2**k
    out = []

    def descend(depth, corners, orient):
        if depth == k:
            out.append(corners)
            return
        for s in range(3):
            at = corners[orient[s]]
            child = tuple(((at[0] + q[0]) // 2, (at[1] + q[1]) // 2) for q in corners)
            a, b = [x for x in range(3) if x != s]
            swapped = list(orient)
            swapped[a], swapped[b] = orient[b], orient[a]
            descend(depth + 1, child, tuple(swapped))

    descend(0, ((0, 0), (size, 0), (0, size)), (0, 1, 2))
    return out


def has_embedding(p: AdjacencyPattern) -> bool:
    if p.gluing is not None:
        return False
    return euclid_dimension(p) in (1, 2) or p.name in ("sierpinski_carpet", "sierpinski_triangle")


def cell_polygons(p: AdjacencyPattern, k: int) -> list[list[tuple[float, float]]]:
    """Polygon (unit-square coordinates, y up) of every depth-``k`` cell, by code."""
    if not has_embedding(p):
        raise UnsupportedPatternError(f"pattern {p.name!r} has no geometric embedding")
    if p.name == "sierpinski_triangle":
        size = 2**k
        polys = []
        for corners in triangle_corners(k):
            # shear the right isosceles lattice onto an equilateral triangle
            polys.append([((x + y / 2) / size, (y * 0.8660254037844386) / size) for x, y in corners])
        return polys
    n = euclid_dimension(p)
    pp = euclid_product(n) if n is not None else carpet_product()
    return [
        [(float(x0), float(y0)), (float(x1), float(y0)), (float(x1), float(y1)), (float(x0), float(y1))]
        for x0, y0, x1, y1 in _product_boxes(pp, k)
    ]


def _fmt(v: float) -> str:
    text = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _centroid(poly):
    return sum(x for x, _ in poly) / len(poly), sum(y for _, y in poly) / len(poly)


def render_svg(
    p: AdjacencyPattern,
    k: int,
    cx: Complex | None = None,
    overlay: bool = False,
) -> str:
    """SVG of the depth-``k`` subdivision, filled by the complex colors if given."""
    if cx is not None:
        if cx.pattern != p or cx.depth != k:
            raise InputError("complex does not match the pattern and depth being rendered")
    polys = cell_polygons(p, k)
    one_dim = euclid_dimension(p) == 1
    span = SVG_SIZE - 2 * SVG_MARGIN
    height = (span // 8 + 2 * SVG_MARGIN) if one_dim else SVG_SIZE

    def point(x, y):
        # y up in the model, y down in SVG
        top = span / 8 if one_dim else span
        return _fmt(SVG_MARGIN + x * span), _fmt(SVG_MARGIN + top - y * span)

    stroke = max(0.25, 1.5 / (k + 1))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{height}" '
        f'viewBox="0 0 {SVG_SIZE} {height}">',
        f"<title>{p.name} depth {k}</title>",
    ]
    g = level_graph(p, k)
    for code, poly in enumerate(polys):
        fill = PALETTE.get(cx.colors[code], "#888888") if cx is not None else "#f4f4f4"
        pts = " ".join(",".join(point(x, y)) for x, y in poly)
        lines.append(
            f'<polygon id="{g.label(code)}" points="{pts}" fill="{fill}" stroke="#666666" stroke-width="{_fmt(stroke)}"/>'
        )
    if overlay:
        centers = [_centroid(poly) for poly in polys]
        for i, j in g.edges:
            (x1, y1), (x2, y2) = point(*centers[i]), point(*centers[j])
            lines.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#d62728" stroke-width="{_fmt(stroke)}"/>')
    if cx is not None:
        lines.append(f"<desc>border color {BLACK}</desc>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
