"""Border classification and the indiscernibility / homogeneity / dimension checks."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import networkx as nx

from .adjacency import LevelGraph, level_graph
from .core import AdjacencyPattern, Cell, InputError, UnsupportedPatternError

# Radius of the neighbourhoods compared by the homogeneity check.  Cells
# closer than this to the border are exempt, so at radius 1 exactly the
# non-border cells are compared.  Radius 1 and 2 cannot tell the Sierpinski
# triangle apart from a Euclidean pattern; radius 3 can (from depth 6 on).
DEFAULT_RADIUS = 3

# Default depth budget for ``dimension``: deepest level with at most this many cells.
DIMENSION_CELL_BUDGET = 1000


@dataclass
class PropertyReport:
    property: str
    pattern: str
    passed: bool
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and not self.witnesses:
            raise ValueError("a failed property report needs at least one witness")

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "pattern": self.pattern,
            "passed": self.passed,
            "witnesses": self.witnesses,
            "details": self.details,
        }


# ---------------------------------------------------------------------------
# borders


def base_degree(p: AdjacencyPattern) -> int | None:
    """Common degree of the base graph, or None when it is not regular."""
    degrees = {len(p.d.neighbors(s)) for s in range(p.size)}
    return degrees.pop() if len(degrees) == 1 else None


@lru_cache(maxsize=4096)
def _min_connected_superset(p: AdjacencyPattern, symbols: frozenset[int]) -> int:
    """Size of the smallest connected vertex set of the base graph containing ``symbols``."""
    if len(symbols) <= 1:
        return len(symbols)
    L = p.size
    rest = [s for s in range(L) if s not in symbols]
    for extra in range(0, len(rest) + 1):
        for add in itertools.combinations(rest, extra):
            if _connected_subset(p, symbols.union(add)):
                return len(symbols) + extra
    raise AssertionError("base graph is connected, the full alphabet always qualifies")


def _connected_subset(p: AdjacencyPattern, nodes: frozenset[int]) -> bool:
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in p.d.neighbors(v):
            if w in nodes and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(nodes)


def word_border_rank(p: AdjacencyPattern, word: tuple[int, ...], dimension: int) -> int | None:
    """Minimal ``j < dimension`` with the symbols of ``word`` inside a connected ``(j+1)``-set."""
    j = _min_connected_superset(p, frozenset(word)) - 1
    return j if j < dimension else None


def _require_dimension(p: AdjacencyPattern) -> int:
    n = dimension(p)
    if n is None:
        raise UnsupportedPatternError(
            f"pattern {p.name!r} has no dimension (indiscernibility or homogeneity fails); "
            "border objects are undefined"
        )
    return n


def border_rank(p: AdjacencyPattern, c: Cell, dimension: int | None = None) -> int | None:
    """Border rank of a cell (0 = corner, 1 = edge, ...), None for interior cells.

    ``dimension`` skips the (cached) dimension computation when already known.
    """
    if c.alphabet != p.alphabet:
        raise InputError(f"cell {c!r} is not over the alphabet of pattern {p.name!r}")
    if c.depth == 0:
        raise InputError("border rank is undefined for the unit cell")
    n = _require_dimension(p) if dimension is None else dimension
    return word_border_rank(p, c.word, n)


def is_border(p: AdjacencyPattern, c: Cell, dimension: int | None = None) -> bool:
    return border_rank(p, c, dimension) is not None


def border_ranks(p: AdjacencyPattern, k: int, dimension: int | None = None) -> list[int | None]:
    """Border rank of every depth-``k`` cell, indexed by cell code."""
    n = _require_dimension(p) if dimension is None else dimension
    L = p.size
    ranks: list[int | None] = []
    for code in range(L**k):
        syms = set()
        for _ in range(k):
            code, r = divmod(code, L)
            syms.add(r)
        j = _min_connected_superset(p, frozenset(syms)) - 1
        ranks.append(j if j < n else None)
    return ranks


def border_cells(p: AdjacencyPattern, k: int, dimension: int | None = None) -> list[int]:
    return [code for code, r in enumerate(border_ranks(p, k, dimension)) if r is not None]


def flagged_level_graph(p: AdjacencyPattern, k: int) -> LevelGraph:
    g = level_graph(p, k)
    ranks = border_ranks(p, k)
    return g.with_border_flags(tuple(r is not None for r in ranks))


# ---------------------------------------------------------------------------
# indiscernibility


def base_automorphisms(p: AdjacencyPattern) -> list[tuple[int, ...]]:
    """All adjacency-preserving permutations of the alphabet, by backtracking."""
    L = p.size
    nbrs = [set(p.d.neighbors(s)) for s in range(L)]
    found: list[tuple[int, ...]] = []
    image = [-1] * L
    used = [False] * L

    def extend(s: int) -> None:
        if s == L:
            found.append(tuple(image))
            return
        for t in range(L):
            if used[t] or len(nbrs[t]) != len(nbrs[s]):
                continue
            # Only earlier symbols are mapped; adjacency to them must be preserved both ways.
            if all((image[r] in nbrs[t]) == (r in nbrs[s]) for r in range(s)):
                image[s] = t
                used[t] = True
                extend(s + 1)
                used[t] = False
        image[s] = -1

    extend(0)
    return found


def _orbits(L: int, group: list[tuple[int, ...]]) -> list[list[int]]:
    seen: set[int] = set()
    orbits = []
    for s in range(L):
        if s in seen:
            continue
        orbit = sorted({g[s] for g in group})
        seen.update(orbit)
        orbits.append(orbit)
    return orbits


def check_indiscernibility(p: AdjacencyPattern) -> PropertyReport:
    """Passes when the automorphism group of the base graph is transitive on symbols."""
    group = base_automorphisms(p)
    orbits = _orbits(p.size, group)
    names = p.alphabet.names
    witnesses = [[names[orbits[0][0]], names[o[0]]] for o in orbits[1:]]
    return PropertyReport(
        "indiscernibility",
        p.name,
        len(orbits) == 1,
        witnesses,
        {"group_order": len(group), "orbits": [[names[s] for s in o] for o in orbits]},
    )


# ---------------------------------------------------------------------------
# homogeneity


def _distances_from(g: LevelGraph, sources: list[int]) -> list[float]:
    dist = [float("inf")] * g.node_count
    queue = deque()
    for s in sources:
        dist[s] = 0
        queue.append(s)
    while queue:
        v = queue.popleft()
        for w in g.neighbors(v):
            if dist[w] == float("inf"):
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def rooted_ball(g: LevelGraph, root: int, radius: int) -> nx.Graph:
    """Induced subgraph on cells within ``radius`` of ``root``; the root is marked."""
    depth = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        if depth[v] == radius:
            continue
        for w in g.neighbors(v):
            if w not in depth:
                depth[w] = depth[v] + 1
                queue.append(w)
    ball = nx.Graph()
    for v, d in depth.items():
        ball.add_node(v, tag="root" if v == root else str(d))
    for v in depth:
        for w in g.neighbors(v):
            if w in depth and v < w:
                ball.add_edge(v, w)
    return ball


def _same_shape(a: nx.Graph, b: nx.Graph) -> bool:
    if a.number_of_nodes() != b.number_of_nodes() or a.number_of_edges() != b.number_of_edges():
        return False
    return nx.is_isomorphic(a, b, node_match=lambda x, y: x["tag"] == y["tag"])


def _ball_key(ball: nx.Graph) -> str:
    return nx.weisfeiler_lehman_graph_hash(ball, node_attr="tag", iterations=3)


def homogeneity_level(p: AdjacencyPattern, k: int, radius: int = DEFAULT_RADIUS) -> dict:
    """Neighbourhood classes of the comparable cells at one depth.

    Comparable cells are those at graph distance >= ``radius`` from every
    border cell.  When the base graph is not regular no border is defined and
    every cell is compared.
    """
    g = level_graph(p, k)
    n = base_degree(p)
    if n is not None:
        border = border_cells(p, k, dimension=n)
        dist = _distances_from(g, border) if border else [float("inf")] * g.node_count
        centers = [c for c in range(g.node_count) if dist[c] >= radius]
    else:
        centers = list(range(g.node_count))
    # classes: (hash, representative ball, representative cell, member count)
    classes: list[list] = []
    for c in centers:
        ball = rooted_ball(g, c, radius)
        key = _ball_key(ball)
        for cls in classes:
            if cls[0] == key and _same_shape(cls[1], ball):
                cls[3] += 1
                break
        else:
            classes.append([key, ball, c, 1])
    return {
        "depth": k,
        "compared": len(centers),
        "classes": len(classes),
        "representatives": [g.label(cls[2]) for cls in classes],
        "sizes": [cls[3] for cls in classes],
    }


def check_homogeneity(p: AdjacencyPattern, K: int, radius: int = DEFAULT_RADIUS) -> PropertyReport:
    if not isinstance(K, int) or K < 2:
        raise InputError(f"homogeneity needs a depth K >= 2, got {K!r}")
    if radius < 1:
        raise InputError("radius must be >= 1")
    levels = [homogeneity_level(p, k, radius) for k in range(1, K + 1)]
    witnesses = [
        {"depth": lv["depth"], "cells": lv["representatives"][:2]} for lv in levels if lv["classes"] > 1
    ]
    return PropertyReport(
        "homogeneity",
        p.name,
        not witnesses,
        witnesses,
        {"radius": radius, "levels": [{k: lv[k] for k in ("depth", "compared", "classes")} for lv in levels]},
    )


def default_dimension_depth(p: AdjacencyPattern) -> int:
    k = 2
    while p.size ** (k + 1) <= DIMENSION_CELL_BUDGET:
        k += 1
    return k


@lru_cache(maxsize=64)
def dimension(p: AdjacencyPattern, depth: int | None = None, radius: int = DEFAULT_RADIUS) -> int | None:
    """Common base degree when indiscernibility and homogeneity (up to ``depth``) hold."""
    if not check_indiscernibility(p).passed:
        return None
    K = default_dimension_depth(p) if depth is None else depth
    if not check_homogeneity(p, K, radius).passed:
        return None
    return base_degree(p)


def dimension_report(p: AdjacencyPattern, depth: int | None = None, radius: int = DEFAULT_RADIUS) -> PropertyReport:
    K = default_dimension_depth(p) if depth is None else depth
    ind = check_indiscernibility(p)
    hom = check_homogeneity(p, K, radius) if ind.passed else None
    n = base_degree(p) if ind.passed and hom.passed else None
    witnesses = []
    if not ind.passed:
        witnesses.append({"indiscernibility": ind.witnesses})
    elif not hom.passed:
        witnesses.append({"homogeneity": hom.witnesses})
    return PropertyReport("dimension", p.name, n is not None, witnesses, {"dimension": n, "depth": K, "radius": radius})
