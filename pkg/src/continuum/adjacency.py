"""Level-by-level generation of the adjacency relation of a pattern.

Cells of depth ``k`` are encoded as integers in ``range(L**k)`` (base-``L``
words), so lexicographic order is numeric order and an unordered edge is
stored as ``(i, j)`` with ``i < j``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .core import (
    AdjacencyPattern,
    Alphabet,
    Cell,
    InputError,
    RefinementViolation,
    is_prefix,
)


class EdgeOrigin(str, enum.Enum):
    BASE_LIFT = "base_lift"
    RULE = "rule"
    GLUING = "gluing"


@dataclass(frozen=True)
class LevelGraph:
    """Adjacency graph on all cells of one depth."""

    pattern_name: str
    alphabet: Alphabet
    depth: int
    edges: tuple[tuple[int, int], ...]
    origins: tuple[EdgeOrigin, ...]
    border_flags: tuple[bool, ...] | None = field(default=None, compare=False)

    @property
    def node_count(self) -> int:
        return len(self.alphabet) ** self.depth

    @property
    def cells(self) -> list[Cell]:
        return [self.cell(i) for i in range(self.node_count)]

    def cell(self, code: int) -> Cell:
        return Cell.from_code(self.alphabet, code, self.depth)

    def label(self, code: int) -> str:
        names = self.alphabet.names
        base = len(names)
        parts = []
        for _ in range(self.depth):
            code, r = divmod(code, base)
            parts.append(names[r])
        return ".".join(reversed(parts))

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.node_count)]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return tuple(tuple(sorted(n)) for n in nbrs)

    def neighbors(self, code: int) -> tuple[int, ...]:
        return self.adjacency[code]

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edge_set if i < j else (j, i) in self.edge_set

    def origin(self, i: int, j: int) -> EdgeOrigin:
        key = (i, j) if i < j else (j, i)
        return self._origin_map[key]

    @cached_property
    def _origin_map(self) -> dict[tuple[int, int], EdgeOrigin]:
        return dict(zip(self.edges, self.origins))

    def with_border_flags(self, flags: tuple[bool, ...]) -> "LevelGraph":
        if len(flags) != self.node_count:
            raise InputError("border flag vector has the wrong length")
        return LevelGraph(self.pattern_name, self.alphabet, self.depth, self.edges, self.origins, tuple(flags))


def _check_depth(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise InputError(f"depth must be an integer >= 1, got {k!r}")


@lru_cache(maxsize=256)
def _level(p: AdjacencyPattern, k: int, strict: bool) -> tuple[dict, tuple]:
    """Edge -> origin map at depth ``k``, plus the refinement gaps met on the way.

    Gluing edges never feed rule application: they are re-derived at every
    depth from the border geometry instead.
    """
    from .patterns import gluing_edges

    L = p.size
    if k == 1:
        edges = {pair: EdgeOrigin.BASE_LIFT for pair in p.d.sorted_pairs()}
        gaps: tuple = ()
    else:
        prev, prev_gaps = _level(p, k - 1, strict)
        edges = {}
        lift = sorted(p.d.base_adjacency | p.sibling_extras)
        for x in range(L ** (k - 1)):
            off = x * L
            for s, t in lift:
                edges[(off + s, off + t)] = EdgeOrigin.BASE_LIFT
        missing = []
        for (i, j), origin in sorted(prev.items()):
            if origin is EdgeOrigin.GLUING:
                continue
            children = p.rule(i % L, j % L)
            if children is None:
                if strict:
                    a = Cell.from_code(p.alphabet, i, k - 1)
                    b = Cell.from_code(p.alphabet, j, k - 1)
                    raise RefinementViolation(
                        f"pattern {p.name!r}: no m-rule for key {p.names((i % L, j % L))} "
                        f"needed by adjacent pair {a} -- {b}",
                        (a, b),
                    )
                missing.append((k - 1, i, j))
                continue
            for u, v in children:
                edges.setdefault((i * L + u, j * L + v), EdgeOrigin.RULE)
        gaps = prev_gaps + tuple(missing)
    if p.gluing is not None:
        for pair in gluing_edges(p, k):
            edges.setdefault(pair, EdgeOrigin.GLUING)
    return edges, gaps


def level_graph(p: AdjacencyPattern, k: int) -> LevelGraph:
    """The adjacency graph on depth-``k`` cells.

    Raises RefinementViolation when an adjacent pair at a shallower depth has
    no m-rule for its top symbols.
    """
    _check_depth(k)
    return _as_graph(p, k, strict=True)


@lru_cache(maxsize=256)
def _as_graph(p: AdjacencyPattern, k: int, strict: bool) -> LevelGraph:
    edges, _ = _level(p, k, strict)
    ordered = sorted(edges)
    return LevelGraph(p.name, p.alphabet, k, tuple(ordered), tuple(edges[e] for e in ordered))


def _same_pattern_cells(p: AdjacencyPattern, *cells: Cell) -> None:
    for c in cells:
        if c.alphabet != p.alphabet:
            raise InputError(f"cell {c!r} is not over the alphabet of pattern {p.name!r}")


def adjacent_same_length(p: AdjacencyPattern, x: Cell, y: Cell) -> bool:
    _same_pattern_cells(p, x, y)
    if x.depth != y.depth:
        raise InputError(f"cells {x} and {y} have different lengths")
    if x.word == y.word or x.depth == 0:
        return False
    return level_graph(p, x.depth).has_edge(x.code, y.code)


def adjacent_general(p: AdjacencyPattern, x: Cell, y: Cell) -> bool:
    """Adjacency across lengths.

    For ``depth(x) < depth(y)``: some extension of ``x`` to the depth of ``y``
    is level-adjacent to ``y``.  Prefix-related pairs are never adjacent.
    """
    _same_pattern_cells(p, x, y)
    if x.depth == y.depth:
        return adjacent_same_length(p, x, y)
    short, long_ = (x, y) if x.depth < y.depth else (y, x)
    if is_prefix(short, long_):
        return False
    g = level_graph(p, long_.depth)
    shift = p.size ** (long_.depth - short.depth)
    target = short.code
    return any(w // shift == target for w in g.neighbors(long_.code))


# ---------------------------------------------------------------------------
# structural checks


@dataclass
class RefinementReport:
    pattern: str
    depth: int
    # (depth, smaller cell, larger cell) of every adjacent pair without an adjacent child pair
    violations: list[tuple[int, Cell, Cell]]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "property": "refinement",
            "pattern": self.pattern,
            "depth": self.depth,
            "passed": self.passed,
            "violations": [[k, str(a), str(b)] for k, a, b in self.violations],
        }


def check_refinement(p: AdjacencyPattern, K: int) -> RefinementReport:
    """Every adjacent pair at depth ``k < K`` must have an adjacent pair of children."""
    _check_depth(K)
    L = p.size
    violations = []
    for k in range(1, K):
        here = _as_graph(p, k, strict=False)
        below = _as_graph(p, k + 1, strict=False)
        refined = set()
        for i, j in below.edges:
            pi, pj = i // L, j // L
            if pi != pj:
                refined.add((pi, pj) if pi < pj else (pj, pi))
        for i, j in here.edges:
            if (i, j) not in refined:
                violations.append((k, here.cell(i), here.cell(j)))
    return RefinementReport(p.name, K, violations)


def components(g: LevelGraph) -> list[list[int]]:
    """Connected components, each sorted, ordered by least member."""
    seen = [False] * g.node_count
    comps = []
    for start in range(g.node_count):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


@dataclass
class ConnectivityReport:
    pattern: str
    depth: int
    component_counts: list[int]  # index k-1 holds the count at depth k

    @property
    def connected(self) -> list[bool]:
        return [c == 1 for c in self.component_counts]

    @property
    def passed(self) -> bool:
        return all(self.connected)

    def to_dict(self) -> dict:
        return {
            "property": "connectivity",
            "pattern": self.pattern,
            "depth": self.depth,
            "passed": self.passed,
            "levels": [
                {"depth": k + 1, "components": c, "connected": c == 1}
                for k, c in enumerate(self.component_counts)
            ],
        }


def connectivity(p: AdjacencyPattern, K: int) -> ConnectivityReport:
    _check_depth(K)
    return ConnectivityReport(p.name, K, [len(components(level_graph(p, k))) for k in range(1, K + 1)])
