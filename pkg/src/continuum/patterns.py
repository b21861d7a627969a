"""Built-in patterns: Euclidean cubes, Sierpinski triangle and carpet, gluings."""

from __future__ import annotations

import itertools
import re
import string
from dataclasses import dataclass
from functools import lru_cache

from .core import (
    AdjacencyPattern,
    Alphabet,
    BorderGluing,
    DPattern,
    GluingKind,
    InputError,
    MRule,
)


@dataclass(frozen=True)
class ProductPattern:
    """A grid pattern together with the position of every symbol in its parent.

    ``positions[s]`` is a tuple with one coordinate per axis, each in
    ``range(radix)``.  Euclidean patterns use radix 2 and every position;
    the carpet uses radix 3 without the centre.
    """

    pattern: AdjacencyPattern
    radix: int
    positions: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.positions[0])

    def coordinates(self, word: tuple[int, ...]) -> tuple[int, ...]:
        """Integer grid coordinates of a cell in a ``radix**depth`` grid."""
        coords = [0] * self.n
        for s in word:
            pos = self.positions[s]
            for ax in range(self.n):
                coords[ax] = coords[ax] * self.radix + pos[ax]
        return tuple(coords)


def _symbol_names(count: int) -> tuple[str, ...]:
    if count <= 26:
        return tuple(string.ascii_lowercase[:count])
    return tuple(f"s{i}" for i in range(count))


def _grid(name: str, radix: int, positions: list[tuple[int, ...]], names: tuple[str, ...]) -> ProductPattern:
    # Axis n-1 is the most significant, so lex order on words is row-major
    # from the lower corner.
    positions = sorted(positions, key=lambda p: p[::-1])
    index = {pos: i for i, pos in enumerate(positions)}
    n = len(positions[0])
    base = set()
    for p, q in itertools.combinations(positions, 2):
        if sum(abs(a - b) for a, b in zip(p, q)) == 1:
            base.add((index[p], index[q]))
    rules = []
    for p in positions:
        for q in positions:
            diff = [ax for ax in range(n) if p[ax] != q[ax]]
            if len(diff) != 1:
                continue
            ax = diff[0]
            # Tops of a lower/upper contact along ``ax``: consecutive digits or a carry.
            if not (q[ax] == p[ax] + 1 or (p[ax] == radix - 1 and q[ax] == 0)):
                continue
            children = tuple(
                (index[u], index[v])
                for u in positions
                for v in positions
                if u[ax] == radix - 1
                and v[ax] == 0
                and all(u[b] == v[b] for b in range(n) if b != ax)
            )
            rules.append(MRule((index[p], index[q]), children))
    d = DPattern(Alphabet(names), frozenset(base))
    return ProductPattern(AdjacencyPattern(name, d, tuple(rules)), radix, tuple(positions))


@lru_cache(maxsize=None)
def euclid_product(n: int) -> ProductPattern:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"Euclidean dimension must be an integer >= 1, got {n!r}")
    positions = list(itertools.product(range(2), repeat=n))
    return _grid(f"euclid{n}", 2, positions, _symbol_names(2**n))


def euclid(n: int) -> AdjacencyPattern:
    """The n-cube pattern; symbol ``i`` sits at the position whose axis-``j`` bit is bit ``j`` of ``i``."""
    return euclid_product(n).pattern


@lru_cache(maxsize=None)
def carpet_product() -> ProductPattern:
    positions = [p for p in itertools.product(range(3), repeat=2) if p != (1, 1)]
    return _grid("sierpinski_carpet", 3, positions, tuple(str(i) for i in range(1, 9)))


def sierpinski_carpet() -> AdjacencyPattern:
    return carpet_product().pattern


@lru_cache(maxsize=None)
def sierpinski_triangle() -> AdjacencyPattern:
    alphabet = Alphabet(("1", "2", "3"))
    d = DPattern(alphabet, frozenset({(0, 1), (0, 2), (1, 2)}))
    rules = (
        MRule((0, 1), ((2, 2),)),
        MRule((0, 2), ((1, 1),)),
        MRule((1, 2), ((0, 0),)),
        MRule((0, 0), ((0, 0),)),
        MRule((1, 1), ((1, 1),)),
        MRule((2, 2), ((2, 2),)),
    )
    return AdjacencyPattern("sierpinski_triangle", d, rules)


def euclid_dimension(p: AdjacencyPattern) -> int | None:
    """``n`` when ``p`` (ignoring gluing and name) is structurally ``euclid(n)``."""
    size = p.size
    n = size.bit_length() - 1
    if n < 1 or size != 2**n:
        return None
    ref = euclid(n)
    if p.d.base_adjacency != ref.d.base_adjacency or p.sibling_extras:
        return None
    if _rule_sets(p) != _rule_sets(ref):
        return None
    return n


def _rule_sets(p: AdjacencyPattern) -> dict:
    return {r.key: frozenset(r.children) for r in p.m_rules}


def check_gluing_base(base: AdjacencyPattern, g: BorderGluing) -> int:
    n = euclid_dimension(base)
    if n is None:
        raise InputError(f"gluing {g.kind.value} requires a Euclidean base pattern, got {base.name!r}")
    if g.kind in (GluingKind.MOEBIUS, GluingKind.KLEIN) and n != 2:
        raise InputError(f"gluing {g.kind.value} requires euclid(2), got dimension {n}")
    return n


def glue(base: AdjacencyPattern, g: BorderGluing, name: str | None = None) -> AdjacencyPattern:
    if base.gluing is not None:
        raise InputError(f"pattern {base.name!r} is already glued")
    check_gluing_base(base, g)
    if name is None:
        name = f"{base.name}+{g.kind.value}"
        if g.corner is not None:
            name += ":" + base.alphabet.names[g.corner]
    return AdjacencyPattern(name, base.d, base.m_rules, base.sibling_extras, g)


def _words(symbols: list[int], k: int):
    return itertools.product(symbols, repeat=k)


def _encode(word, L: int) -> int:
    code = 0
    for s in word:
        code = code * L + s
    return code


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def gluing_edges(p: AdjacencyPattern, k: int) -> set[tuple[int, int]]:
    """Extra edges a gluing adds at depth ``k`` (self-loops dropped)."""
    g = p.gluing
    if g is None:
        return set()
    n = check_gluing_base(p.without_gluing(), g)
    L = p.size
    out: set[tuple[int, int]] = set()
    if g.kind is GluingKind.SPHERE_CORNER:
        from .structure import border_cells

        corner = _encode([g.corner] * k, L)
        for c in border_cells(p.without_gluing(), k, dimension=n):
            if c != corner:
                out.add(_pair(corner, c))
    elif g.kind is GluingKind.TORUS_OPPOSITE:
        for ax in range(n):
            low = [s for s in range(L) if not (s >> ax) & 1]
            for word in _words(low, k):
                out.add(_pair(_encode(word, L), _encode([s | (1 << ax) for s in word], L)))
    else:
        # Moebius: bottom row B_ab against the top row B_cd, reversed.
        bottom = [_encode(w, L) for w in _words([0, 1], k)]
        top_ = [_encode(w, L) for w in _words([2, 3], k)]
        for i, c in enumerate(bottom):
            out.add(_pair(c, top_[len(top_) - 1 - i]))
        if g.kind is GluingKind.KLEIN:
            corner = _encode([g.corner] * k, L)
            for side in ([0, 2], [1, 3]):
                for w in _words(side, k):
                    c = _encode(w, L)
                    if c != corner:
                        out.add(_pair(corner, c))
    return out


# ---------------------------------------------------------------------------
# registry

GLUED = {
    "circle": ("euclid1", GluingKind.TORUS_OPPOSITE, None),
    "sphere": ("euclid2", GluingKind.SPHERE_CORNER, "c"),
    "torus": ("euclid2", GluingKind.TORUS_OPPOSITE, None),
    "moebius": ("euclid2", GluingKind.MOEBIUS, None),
    "klein": ("euclid2", GluingKind.KLEIN, "a"),
}

ALIASES = {
    "triangle": "sierpinski_triangle",
    "carpet": "sierpinski_carpet",
}

_GLUE_SPEC = re.compile(r"^(?P<base>euclid\d+)\+(?P<kind>[a-z_]+)(?::(?P<corner>[^:]+))?$")


def builtin_names() -> list[str]:
    return ["euclid1", "euclid2", "euclid3", "euclid4", "sierpinski_triangle", "sierpinski_carpet", *GLUED]


@lru_cache(maxsize=None)
def get_pattern(name: str) -> AdjacencyPattern:
    """Look up a built-in by name.

    Accepts ``euclidN``, the fractal names (or ``triangle``/``carpet``), the
    named gluings ``circle sphere torus moebius klein`` and the generic form
    ``euclidN+kind[:corner]``.
    """
    name = ALIASES.get(name, name)
    m = re.fullmatch(r"euclid(\d+)", name)
    if m:
        return euclid(int(m.group(1)))
    if name == "sierpinski_triangle":
        return sierpinski_triangle()
    if name == "sierpinski_carpet":
        return sierpinski_carpet()
    if name in GLUED:
        base_name, kind, corner = GLUED[name]
        base = get_pattern(base_name)
        cid = base.alphabet.index(corner) if corner is not None else None
        return glue(base, BorderGluing(kind, cid), name=name)
    m = _GLUE_SPEC.match(name)
    if m:
        base = get_pattern(m.group("base"))
        try:
            kind = GluingKind(m.group("kind"))
        except ValueError:
            raise InputError(f"unknown gluing kind {m.group('kind')!r}") from None
        corner = m.group("corner")
        cid = base.alphabet.index(corner) if corner is not None else None
        return glue(base, BorderGluing(kind, cid))
    raise InputError(f"unknown pattern {name!r}; built-ins are {builtin_names()}")
