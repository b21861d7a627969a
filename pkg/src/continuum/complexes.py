"""Colored complexes: segments, the quotient map q_e and the shape tree.

A complex colors every depth-``k`` cell; the border element is an extra
black node adjacent to every border cell, so black segments touching the
boundary merge with it into the root segment.
"""

from __future__ import annotations

import json
import random
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Union

from .adjacency import LevelGraph, level_graph
from .core import AdjacencyPattern, Cell, InputError, format_cell, parse_cell, pattern_from_dict, pattern_to_dict
from .patterns import euclid_dimension, euclid_product, get_pattern
from .structure import border_ranks, dimension

WHITE = 1
BLACK = 2
OUT_OF_DOMAIN = (1, 0)


class _Border:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BORDER"

    def __str__(self) -> str:
        return "border"


BORDER = _Border()
CellOrBorder = Union[Cell, _Border]


@dataclass(frozen=True)
class Complex:
    pattern: AdjacencyPattern
    depth: int
    colors: tuple[int, ...]  # indexed by cell code
    palette: tuple[int, ...] = (WHITE, BLACK)

    def __post_init__(self):
        if self.depth < 1:
            raise InputError("complex depth must be >= 1")
        if len(self.colors) != self.pattern.size**self.depth:
            raise InputError(
                f"coloring must cover all {self.pattern.size ** self.depth} cells of depth {self.depth}, "
                f"got {len(self.colors)}"
            )
        if BLACK not in self.palette or any(c < 1 for c in self.palette):
            raise InputError(f"palette {self.palette} must hold positive colors including black (2)")
        bad = sorted(set(self.colors) - set(self.palette))
        if bad:
            raise InputError(f"colors {bad} are not in the palette {list(self.palette)}")
        if dimension(self.pattern) is None:
            raise InputError(f"pattern {self.pattern.name!r} has no dimension, so its border is undefined")

    @classmethod
    def from_mapping(
        cls,
        pattern: AdjacencyPattern,
        depth: int,
        colors: Mapping[Union[str, Cell], int],
        default: int = WHITE,
        palette: tuple[int, ...] | None = None,
    ) -> "Complex":
        values = [default] * pattern.size**depth
        for key, color in colors.items():
            c = key if isinstance(key, Cell) else parse_cell(pattern.alphabet, key)
            if c.depth != depth:
                raise InputError(f"cell {format_cell(c)!r} is not at depth {depth}")
            values[c.code] = color
        if palette is None:
            palette = tuple(sorted({WHITE, BLACK, *values}))
        return cls(pattern, depth, tuple(values), tuple(palette))

    @classmethod
    def uniform(cls, pattern: AdjacencyPattern, depth: int, color: int = WHITE) -> "Complex":
        return cls.from_mapping(pattern, depth, {}, default=color)

    @cached_property
    def graph(self) -> LevelGraph:
        return level_graph(self.pattern, self.depth)

    @cached_property
    def border_flags(self) -> tuple[bool, ...]:
        return tuple(r is not None for r in border_ranks(self.pattern, self.depth))

    @property
    def border_node(self) -> int:
        return len(self.colors)

    def color(self, c: CellOrBorder) -> int:
        if c is BORDER:
            return BLACK
        return self.colors[self._code(c)]

    def _code(self, c: Cell) -> int:
        if c.alphabet != self.pattern.alphabet or c.depth != self.depth:
            raise InputError(f"{c!r} is not a depth-{self.depth} cell of pattern {self.pattern.name!r}")
        return c.code

    def node(self, c: CellOrBorder) -> int:
        return self.border_node if c is BORDER else self._code(c)

    def item(self, node: int) -> CellOrBorder:
        return BORDER if node == self.border_node else self.graph.cell(node)

    def node_color(self, node: int) -> int:
        return BLACK if node == self.border_node else self.colors[node]

    def bordered_neighbors(self, node: int) -> list[int]:
        """Neighbours in the cell graph extended by the border element (sorted)."""
        if node == self.border_node:
            return [c for c, flag in enumerate(self.border_flags) if flag]
        out = list(self.graph.neighbors(node))
        if self.border_flags[node]:
            out.append(self.border_node)
        return out


def bordered_adjacency(cx: Complex, c1: CellOrBorder, c2: CellOrBorder) -> bool:
    if c1 is BORDER and c2 is BORDER:
        return False
    if c1 is BORDER or c2 is BORDER:
        cell = c2 if c1 is BORDER else c1
        return cx.border_flags[cx.node(cell)]
    a, b = cx.node(c1), cx.node(c2)
    return a != b and cx.graph.has_edge(a, b)


@dataclass(frozen=True)
class Segment:
    id: int
    color: int
    size: int  # number of cells, the border element not counted
    first: str  # least member in dot notation, "border" for the border element


@dataclass
class SegmentMap:
    complex: Complex
    node_segment: list[int]  # segment id per node; the last node is the border
    segments: list[Segment]

    @property
    def root(self) -> int:
        return self.node_segment[-1]

    def segment_of(self, c: CellOrBorder) -> int:
        return self.node_segment[self.complex.node(c)]

    def by_id(self) -> dict[int, Segment]:
        return {s.id: s for s in self.segments}


def _color_components(cx: Complex) -> list[tuple[int, list[int]]]:
    n_nodes = len(cx.colors) + 1
    seen = [False] * n_nodes
    comps = []
    for start in range(n_nodes):
        if seen[start]:
            continue
        color = cx.node_color(start)
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in cx.bordered_neighbors(v):
                if not seen[w] and cx.node_color(w) == color:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append((color, sorted(comp)))
    return comps


def segments(cx: Complex) -> SegmentMap:
    """Same-colored components; ids from 2 by color, border segment first among black."""
    border = cx.border_node
    comps = _color_components(cx)
    comps.sort(key=lambda cm: (cm[0], border not in cm[1], cm[1][0]))
    node_segment = [0] * (border + 1)
    segs = []
    for sid, (color, members) in enumerate(comps, start=2):
        for v in members:
            node_segment[v] = sid
        cells = [v for v in members if v != border]
        first = cx.graph.label(cells[0]) if cells else "border"
        segs.append(Segment(sid, color, len(cells), first))
    return SegmentMap(cx, node_segment, segs)


def q_e(cx: Complex, k: int, c: CellOrBorder, seg: SegmentMap | None = None) -> tuple[int, int]:
    """(segment id, color) of a depth-``k`` cell or the border; (1, 0) outside the complex."""
    if c is BORDER:
        if k != cx.depth:
            return OUT_OF_DOMAIN
    elif k != cx.depth or c.depth != cx.depth or c.alphabet != cx.pattern.alphabet:
        return OUT_OF_DOMAIN
    seg = seg or segments(cx)
    return seg.segment_of(c), cx.color(c)


@dataclass
class ShapeTree:
    nodes: list[Segment]
    edges: list[tuple[int, int]]
    root: int

    @cached_property
    def _adj(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {s.id: [] for s in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    @property
    def connected(self) -> bool:
        if not self.nodes:
            return True
        seen = {self.root}
        stack = [self.root]
        while stack:
            v = stack.pop()
            for w in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.nodes)

    @property
    def is_tree(self) -> bool:
        return self.connected and len(self.edges) == len(self.nodes) - 1

    @property
    def colors_alternate(self) -> bool:
        color = {s.id: s.color for s in self.nodes}
        return all(color[a] != color[b] for a, b in self.edges)

    @property
    def is_bipartite(self) -> bool:
        """Two-colorability of the graph itself, independent of the segment colors."""
        side: dict[int, int] = {}
        for s in self.nodes:
            if s.id in side:
                continue
            side[s.id] = 0
            queue = deque([s.id])
            while queue:
                v = queue.popleft()
                for w in self._adj[v]:
                    if w not in side:
                        side[w] = 1 - side[v]
                        queue.append(w)
                    elif side[w] == side[v]:
                        return False
        return True

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "nodes": [{"id": s.id, "color": s.color, "size": s.size, "first": s.first} for s in self.nodes],
            "edges": [list(e) for e in self.edges],
            "is_tree": self.is_tree,
            "bipartite": self.is_bipartite,
        }


def segment_adjacency(cx: Complex, seg: SegmentMap | None = None) -> ShapeTree:
    """Graph of segments joined when bordered-adjacent cells of different colors span them."""
    seg = seg or segments(cx)
    pairs = set()
    for v in range(cx.border_node + 1):
        cv = cx.node_color(v)
        for w in cx.bordered_neighbors(v):
            if w > v and cx.node_color(w) != cv:
                a, b = seg.node_segment[v], seg.node_segment[w]
                pairs.add((a, b) if a < b else (b, a))
    return ShapeTree(list(seg.segments), sorted(pairs), seg.root)


def path(cx: Complex, c1: CellOrBorder, c2: CellOrBorder) -> list[CellOrBorder] | None:
    """Shortest same-colored chain of adjacent elements from ``c1`` to ``c2``, or None."""
    color = cx.color(c1)
    if cx.color(c2) != color:
        raise InputError(f"{c1} and {c2} have different colors")
    start, goal = cx.node(c1), cx.node(c2)
    parent = {start: start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if v == goal:
            break
        for w in cx.bordered_neighbors(v):
            if w not in parent and cx.node_color(w) == color:
                parent[w] = v
                queue.append(w)
    if goal not in parent:
        return None
    chain = [goal]
    while chain[-1] != start:
        chain.append(parent[chain[-1]])
    return [cx.item(v) for v in reversed(chain)]


def random_complex(
    pattern: AdjacencyPattern, depth: int, rng: random.Random, black_probability: float = 0.5
) -> Complex:
    values = tuple(BLACK if rng.random() < black_probability else WHITE for _ in range(pattern.size**depth))
    return Complex(pattern, depth, values)


# ---------------------------------------------------------------------------
# files

_COMPLEX_KEYS = {"pattern", "depth", "colors", "default", "palette"}


def complex_to_dict(cx: Complex) -> dict:
    default = Counter(cx.colors).most_common(1)[0][0]
    g = cx.graph
    data = {
        "pattern": cx.pattern.name if _is_builtin(cx.pattern) else pattern_to_dict(cx.pattern),
        "depth": cx.depth,
        "default": default,
        "colors": {g.label(i): c for i, c in enumerate(cx.colors) if c != default},
    }
    if tuple(cx.palette) != (WHITE, BLACK):
        data["palette"] = list(cx.palette)
    return data


def _is_builtin(p: AdjacencyPattern) -> bool:
    try:
        return get_pattern(p.name) == p
    except InputError:
        return False


def complex_to_json(cx: Complex) -> str:
    return json.dumps(complex_to_dict(cx), indent=2) + "\n"


def complex_from_dict(data: Mapping, source: str = "<complex>") -> Complex:
    if not isinstance(data, Mapping):
        raise InputError(f"{source}: top level must be an object")
    unknown = set(data) - _COMPLEX_KEYS
    if unknown:
        raise InputError(f"{source}: unknown field(s) {sorted(unknown)}")
    for key in ("pattern", "depth"):
        if key not in data:
            raise InputError(f"{source}: missing field {key!r}")
    raw = data["pattern"]
    pattern = get_pattern(raw) if isinstance(raw, str) else pattern_from_dict(raw, f"{source}: pattern")
    depth = data["depth"]
    if not isinstance(depth, int) or isinstance(depth, bool) or depth < 1:
        raise InputError(f"{source}: 'depth' must be a positive integer")
    colors = data.get("colors", {})
    if not isinstance(colors, Mapping):
        raise InputError(f"{source}: 'colors' must be an object mapping cell words to colors")
    for key, value in colors.items():
        if not isinstance(value, int) or isinstance(value, bool):
            raise InputError(f"{source}: colors[{key!r}] must be an integer")
    palette = tuple(data["palette"]) if "palette" in data else None
    try:
        return Complex.from_mapping(pattern, depth, colors, data.get("default", WHITE), palette)
    except InputError as exc:
        raise InputError(f"{source}: {exc}") from None


def complex_from_json(text: str, source: str = "<complex>") -> Complex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return complex_from_dict(data, source)


def _netpbm_tokens(data: bytes, source: str):
    """Header tokens of a Netpbm file and the offset just past the header."""
    tokens = []
    i = 0
    n_header = 3 if data[:2] in (b"P1", b"P4") else 4
    while len(tokens) < n_header:
        while i < len(data) and data[i : i + 1].isspace():
            i += 1
        if i < len(data) and data[i : i + 1] == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < len(data) and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
            j += 1
        if j == i:
            raise InputError(f"{source}: truncated Netpbm header")
        tokens.append(data[i:j].decode("ascii"))
        i = j
    return tokens, i + 1


def read_netpbm(data: bytes, source: str = "<image>") -> list[list[int]]:
    """Pixel intensities (rows top to bottom) of a PBM or PGM image.

    PBM bits are converted to intensities, so a set (black) bit reads as 0.
    """
    magic = data[:2]
    if magic not in (b"P1", b"P2", b"P4", b"P5"):
        raise InputError(f"{source}: not a PBM/PGM file (magic {magic!r})")
    tokens, offset = _netpbm_tokens(data, source)
    try:
        width, height = int(tokens[1]), int(tokens[2])
        maxval = int(tokens[3]) if magic in (b"P2", b"P5") else 1
    except ValueError:
        raise InputError(f"{source}: bad Netpbm header {tokens}") from None
    if magic in (b"P1", b"P2"):
        body = _strip_comments(data[offset - 1 :])
        if magic == b"P1":
            # plain PBM digits may be packed without whitespace
            values = [int(ch) for ch in body.decode("ascii") if ch in "01"]
        else:
            values = [int(tok) for tok in body.split()]
    elif magic == b"P4":
        row_bytes = (width + 7) // 8
        raw = data[offset:]
        values = []
        for r in range(height):
            row = raw[r * row_bytes : (r + 1) * row_bytes]
            for x in range(width):
                byte = row[x // 8] if x // 8 < len(row) else 0
                values.append((byte >> (7 - x % 8)) & 1)
    else:
        raw = data[offset:]
        step = 2 if maxval > 255 else 1
        values = [int.from_bytes(raw[i : i + step], "big") for i in range(0, width * height * step, step)]
    if len(values) < width * height:
        raise InputError(f"{source}: expected {width * height} pixels, found {len(values)}")
    values = values[: width * height]
    if magic in (b"P1", b"P4"):
        values = [0 if v else 1 for v in values]
    return [values[r * width : (r + 1) * width] for r in range(height)]


def _strip_comments(body: bytes) -> bytes:
    lines = [line.split(b"#")[0] for line in body.splitlines()]
    return b"\n".join(lines)


def complex_from_image(pixels: list[list[int]], pattern: AdjacencyPattern | None = None) -> Complex:
    """Map a ``2^k x 2^k`` intensity image onto a Euclidean-2 complex (0 -> black, else white).

    The first row is the top of the unit square.
    """
    pattern = pattern or get_pattern("euclid2")
    if euclid_dimension(pattern) != 2 or pattern.gluing is not None:
        raise InputError("bitmap complexes need the euclid2 pattern")
    size = len(pixels)
    k = size.bit_length() - 1
    if size < 2 or size != 2**k or any(len(row) != size for row in pixels):
        raise InputError(f"bitmap must be square with a power-of-two side, got {size} rows")
    product = euclid_product(2)
    values = []
    for code in range(4**k):
        x, y = product.coordinates(Cell.from_code(pattern.alphabet, code, k).word)
        values.append(BLACK if pixels[size - 1 - y][x] == 0 else WHITE)
    return Complex(pattern, k, tuple(values))
