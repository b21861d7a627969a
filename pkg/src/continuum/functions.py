"""Cell functions, their monotone / strict / continuous predicates and Brouwer witnesses.

Infinite sequences are only ever handled through finite prefixes: a cell
of depth ``m`` stands for the first ``m`` symbols of a stream.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .adjacency import adjacent_general, adjacent_same_length, level_graph
from .core import (
    AdjacencyPattern,
    Cell,
    ContractError,
    InputError,
    cells_at_depth,
    format_cell,
    parse_cell,
    pattern_from_dict,
    pattern_to_dict,
    unit,
)
from .patterns import euclid_dimension, get_pattern

BUILTIN_FUNCTIONS = ("identity", "head_const", "reverse")


@dataclass(frozen=True, eq=False)
class CellFunction:
    """A total map from domain cells of depth <= ``k_max`` to codomain cells."""

    name: str
    domain: AdjacencyPattern
    codomain: AdjacencyPattern
    k_max: int
    _rule: Callable[[Cell], Cell] = field(repr=False)
    table: Mapping[tuple[int, ...], tuple[int, ...]] | None = field(default=None, repr=False)

    def __call__(self, c: Cell) -> Cell:
        if c.alphabet != self.domain.alphabet:
            raise InputError(f"{c!r} is not a cell of the domain pattern {self.domain.name!r}")
        if c.depth > self.k_max:
            raise InputError(f"{self.name} is only defined up to depth {self.k_max}, got {c!r}")
        return self._rule(c)

    @classmethod
    def from_table(
        cls,
        domain: AdjacencyPattern,
        codomain: AdjacencyPattern,
        k_max: int,
        mapping: Mapping[tuple[int, ...], tuple[int, ...]],
        name: str = "table",
    ) -> "CellFunction":
        """Build from a word -> word table; the unit maps to the unit unless listed."""
        if not isinstance(k_max, int) or isinstance(k_max, bool) or k_max < 0:
            raise InputError(f"k_max must be a non-negative integer, got {k_max!r}")
        table = dict(mapping)
        table.setdefault((), ())
        for word in table:
            if len(word) > k_max:
                raise InputError(f"table entry {format_cell(Cell(domain.alphabet, word))!r} is deeper than k_max={k_max}")
        for k in range(k_max + 1):
            for c in cells_at_depth(domain.alphabet, k):
                if c.word not in table:
                    raise InputError(f"function table is missing cell {format_cell(c)!r}")
        alphabet = codomain.alphabet
        images = {w: Cell(alphabet, v) for w, v in table.items()}
        return cls(name, domain, codomain, k_max, lambda c: images[c.word], table)


def identity(p: AdjacencyPattern, k_max: int = 16) -> CellFunction:
    return CellFunction("identity", p, p, k_max, lambda c: c)


def head_const(p: AdjacencyPattern, k_max: int = 16) -> CellFunction:
    """``h(c)``: the first symbol of ``c`` repeated ``depth(c)`` times."""
    return CellFunction("head_const", p, p, k_max, lambda c: Cell(p.alphabet, c.word[:1] * c.depth))


def reverse(p: AdjacencyPattern, k_max: int = 16) -> CellFunction:
    """Point reflection of a Euclidean cube: every symbol replaced by its opposite corner."""
    n = euclid_dimension(p)
    if n is None:
        raise InputError(f"reverse is defined for Euclidean patterns only, not {p.name!r}")
    top = p.size - 1
    return CellFunction("reverse", p, p, k_max, lambda c: Cell(p.alphabet, tuple(top - s for s in c.word)))


def builtin_function(name: str, p: AdjacencyPattern | None = None, k_max: int = 16) -> CellFunction:
    p = p or get_pattern("euclid1")
    makers = {"identity": identity, "head_const": head_const, "reverse": reverse}
    if name not in makers:
        raise InputError(f"unknown function {name!r}; built-ins are {list(BUILTIN_FUNCTIONS)}")
    return makers[name](p, k_max)


def random_monotone_function(
    p: AdjacencyPattern, k_max: int, rng: random.Random, scramble: float = 1.0
) -> CellFunction:
    """Length-preserving table function ``f(x.s) = f(x).sigma_x(s)``.

    Each ``sigma_x`` is a random permutation with probability ``scramble``
    and the identity otherwise, so small values give mostly continuous maps.
    """
    table = {(): ()}
    for k in range(k_max):
        for c in cells_at_depth(p.alphabet, k):
            perm = list(range(p.size))
            if rng.random() < scramble:
                rng.shuffle(perm)
            for s in range(p.size):
                table[c.word + (s,)] = table[c.word] + (perm[s],)
    return CellFunction.from_table(p, p, k_max, table, name="random_monotone")


# ---------------------------------------------------------------------------
# predicates


@dataclass
class FunctionReport:
    property: str
    function: str
    depth: int
    passed: bool
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "function": self.function,
            "depth": self.depth,
            "passed": self.passed,
            "violations": self.violations,
            "details": self.details,
        }


def _check_k(f: CellFunction, K: int) -> None:
    if not isinstance(K, int) or isinstance(K, bool) or K < 1:
        raise InputError(f"depth must be an integer >= 1, got {K!r}")
    if K > f.k_max:
        raise InputError(f"depth {K} exceeds the function's k_max={f.k_max}")


def _prefix_or_equal(x: Cell, y: Cell) -> bool:
    return x.depth <= y.depth and y.word[: x.depth] == x.word


def is_monotonic(f: CellFunction, K: int) -> FunctionReport:
    """Parent/child pairs suffice: prefix-or-equal is transitive."""
    _check_k(f, K)
    violations = []
    for k in range(K):
        for x in cells_at_depth(f.domain.alphabet, k):
            fx = f(x)
            for s in range(f.domain.size):
                y = Cell(x.alphabet, x.word + (s,))
                fy = f(y)
                if not _prefix_or_equal(fx, fy):
                    violations.append([str(x) or "c_0", str(y), str(fx) or "c_0", str(fy) or "c_0"])
    return FunctionReport("monotonic", f.name, K, not violations, violations)


def is_strict(f: CellFunction, K: int) -> FunctionReport:
    """Every cell above depth ``K`` needs a descendant (within ``K``) with a different image.

    Cells at depth ``K`` itself cannot be decided and are counted as unverified.
    """
    _check_k(f, K)
    L = f.domain.size
    # For each cell: its image if the whole subtree shares it, else None.
    below: list = [f(c) for c in cells_at_depth(f.domain.alphabet, K)]
    failures: list[tuple[int, int, str]] = []
    for k in range(K - 1, -1, -1):
        here = []
        for code, x in enumerate(cells_at_depth(f.domain.alphabet, k)):
            fx = f(x)
            kids = below[code * L : code * L + L]
            if all(kid is not None and kid == fx for kid in kids):
                failures.append((k, code, str(x) or "c_0"))
                here.append(fx)
            else:
                here.append(None)
        below = here
    failures.sort()
    return FunctionReport(
        "strict",
        f.name,
        K,
        not failures,
        [label for _, _, label in failures],
        {"unverified_depth": K, "unverified_cells": L**K},
    )


def images_compatible(q: AdjacencyPattern, a: Cell, b: Cell) -> bool:
    """Adjacent, equal or nested images are all allowed for adjacent inputs."""
    return _prefix_or_equal(a, b) or _prefix_or_equal(b, a) or adjacent_general(q, a, b)


def _continuity_violations(f: CellFunction, K: int, first_only: bool = False):
    for k in range(1, K + 1):
        g = level_graph(f.domain, k)
        for i, j in g.edges:
            u, z = g.cell(i), g.cell(j)
            fu, fz = f(u), f(z)
            if not images_compatible(f.codomain, fu, fz):
                yield u, z, fu, fz
                if first_only:
                    return


def is_continuous(f: CellFunction, K: int) -> FunctionReport:
    _check_k(f, K)
    violations = [[str(u), str(z), str(fu) or "c_0", str(fz) or "c_0"] for u, z, fu, fz in _continuity_violations(f, K)]
    return FunctionReport("continuous", f.name, K, not violations, violations)


# ---------------------------------------------------------------------------
# streams


def stream_image(f: CellFunction, s: Cell) -> Cell:
    """The image prefix determined by the stream prefix ``s``.

    Raises ContractError when ``f`` is not monotone along the prefixes of ``s``.
    """
    previous = f(unit(s.alphabet))
    for j in range(1, s.depth + 1):
        current = f(s.prefix(j))
        if not _prefix_or_equal(previous, current):
            raise ContractError(
                f"{f.name} is not monotone: f({s.prefix(j - 1) or 'c_0'}) = {previous or 'c_0'} "
                f"is not a prefix of f({s.prefix(j)}) = {current or 'c_0'}"
            )
        previous = current
    return previous


def streams_equivalent(p: AdjacencyPattern, s1: Cell, s2: Cell) -> bool:
    """All equal-length prefixes are adjacent or equal."""
    if s1.depth != s2.depth:
        raise InputError(f"stream prefixes {s1} and {s2} have different depths")
    for j in range(1, s1.depth + 1):
        a, b = s1.prefix(j), s2.prefix(j)
        if a != b and not adjacent_same_length(p, a, b):
            return False
    return True


@dataclass(frozen=True)
class BrouwerWitness:
    u: Cell
    z: Cell
    image_u: Cell
    image_z: Cell
    stream_u: Cell
    stream_z: Cell
    image_stream_u: Cell
    image_stream_z: Cell
    depth: int

    def to_dict(self) -> dict:
        return {
            "u": str(self.u),
            "z": str(self.z),
            "f_u": str(self.image_u),
            "f_z": str(self.image_z),
            "stream_u": str(self.stream_u),
            "stream_z": str(self.stream_z),
            "image_stream_u": str(self.image_stream_u),
            "image_stream_z": str(self.image_stream_z),
            "depth": self.depth,
        }


def _extend_pair(p: AdjacencyPattern, u: Cell, z: Cell, depth: int) -> tuple[Cell, Cell]:
    """Descend from an adjacent pair along adjacent children down to ``depth``.

    Each step takes the first m-rule child pair that is really an edge one
    level down; gluing edges, which no rule describes, fall back to the
    first adjacent child pair in lexicographic order.
    """
    L = p.size
    while u.depth < depth:
        g = level_graph(p, u.depth + 1)
        rule = p.rule(u.word[-1], z.word[-1]) if u.code < z.code else None
        candidates = list(rule or ()) + [(s, t) for s in range(L) for t in range(L)]
        for s, t in candidates:
            if g.has_edge(u.code * L + s, z.code * L + t):
                break
        else:
            raise ContractError(f"adjacent pair {u} -- {z} has no adjacent children")
        u = Cell(u.alphabet, u.word + (s,))
        z = Cell(z.alphabet, z.word + (t,))
    return u, z


def _truncate(a: Cell, b: Cell) -> tuple[Cell, Cell]:
    m = min(a.depth, b.depth)
    return a.prefix(m), b.prefix(m)


def brouwer_witness(f: CellFunction, K: int) -> BrouwerWitness | None:
    """Equivalent input streams with non-equivalent images, or None when none exists up to ``K``.

    Requires ``f`` to be monotone and strict up to ``K`` (ContractError otherwise).
    """
    _check_k(f, K)
    mono = is_monotonic(f, K)
    if not mono.passed:
        raise ContractError(f"{f.name} is not monotone up to depth {K}: {mono.violations[0]}")
    strict = is_strict(f, K)
    if not strict.passed:
        raise ContractError(f"{f.name} is not strict up to depth {K}: cell {strict.violations[0]}")
    for u, z, fu, fz in _continuity_violations(f, K):
        su, sz = _extend_pair(f.domain, u, z, K)
        iu, iz = _truncate(stream_image(f, su), stream_image(f, sz))
        if not streams_equivalent(f.codomain, iu, iz):
            return BrouwerWitness(u, z, fu, fz, su, sz, iu, iz, K)
    return None


# ---------------------------------------------------------------------------
# files

_FUNCTION_KEYS = {"domain", "codomain", "k_max", "map", "name"}


def _load_pattern(raw, where: str) -> AdjacencyPattern:
    if isinstance(raw, str):
        return get_pattern(raw)
    return pattern_from_dict(raw, where)


def function_from_dict(data: Mapping, source: str = "<function>") -> CellFunction:
    if not isinstance(data, Mapping):
        raise InputError(f"{source}: top level must be an object")
    unknown = set(data) - _FUNCTION_KEYS
    if unknown:
        raise InputError(f"{source}: unknown field(s) {sorted(unknown)}")
    for key in ("domain", "codomain", "k_max", "map"):
        if key not in data:
            raise InputError(f"{source}: missing field {key!r}")
    domain = _load_pattern(data["domain"], f"{source}: domain")
    codomain = _load_pattern(data["codomain"], f"{source}: codomain")
    raw = data["map"]
    if not isinstance(raw, Mapping):
        raise InputError(f"{source}: 'map' must be an object of cell words")
    table = {}
    for key, value in raw.items():
        if not isinstance(value, str):
            raise InputError(f"{source}: map[{key!r}] must be a cell word")
        try:
            table[parse_cell(domain.alphabet, key).word] = parse_cell(codomain.alphabet, value).word
        except InputError as exc:
            raise InputError(f"{source}: map[{key!r}]: {exc}") from None
    try:
        return CellFunction.from_table(domain, codomain, data["k_max"], table, data.get("name", "table"))
    except InputError as exc:
        raise InputError(f"{source}: {exc}") from None


def function_from_json(text: str, source: str = "<function>") -> CellFunction:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return function_from_dict(data, source)


def function_to_dict(f: CellFunction, k_max: int | None = None) -> dict:
    """Tabulate ``f`` (up to ``k_max``, default its own) in the file format."""
    k_max = f.k_max if k_max is None else k_max
    if k_max > f.k_max:
        raise InputError(f"cannot tabulate beyond k_max={f.k_max}")

    def ref(p: AdjacencyPattern):
        try:
            if get_pattern(p.name) == p:
                return p.name
        except InputError:
            pass
        return pattern_to_dict(p)

    table = {}
    for k in range(k_max + 1):
        for c in cells_at_depth(f.domain.alphabet, k):
            table[format_cell(c) or "c_0"] = format_cell(f(c)) or "c_0"
    return {"name": f.name, "domain": ref(f.domain), "codomain": ref(f.codomain), "k_max": k_max, "map": table}
