"""Cells, symbols and adjacency patterns.

A cell is a finite word over the division alphabet of a pattern.  The empty
word is the unit ``c_0``.  Words are stored as tuples of symbol ids; at a
fixed depth the base-``L`` integer encoding of a word coincides with its
lexicographic rank, which the adjacency engine relies on.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union


class ContinuumError(Exception):
    """Base class for library errors."""


class InputError(ContinuumError, ValueError):
    """Malformed input: unknown symbol, bad file, mismatched alphabets."""


class UnsupportedPatternError(ContinuumError):
    """The requested notion is not defined for this pattern."""


class ContractError(ContinuumError):
    """A precondition of an operation does not hold."""


class RefinementViolation(ContinuumError):
    """An adjacent pair has no m-rule to refine it."""

    def __init__(self, message: str, edge: tuple["Cell", "Cell"]):
        super().__init__(message)
        self.edge = edge


# ---------------------------------------------------------------------------
# symbols and cells


@dataclass(frozen=True, order=True)
class Symbol:
    id: int
    name: str

    def __str__(self) -> str:
        return self.name


class _Unit:
    """Marker returned by ``top`` for the unit cell."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNIT"


UNIT = _Unit()


@dataclass(frozen=True)
class Alphabet:
    """Ordered symbol names; the order is the lexicographic order on cells."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise InputError("alphabet must be nonempty")
        if len(set(self.names)) != len(self.names):
            raise InputError(f"duplicate symbol names in {list(self.names)}")
        for name in self.names:
            if not name or "." in name or any(ch.isspace() for ch in name):
                raise InputError(f"invalid symbol name {name!r}")

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[Symbol]:
        return (Symbol(i, n) for i, n in enumerate(self.names))

    def index(self, key: "SymbolLike") -> int:
        if isinstance(key, Symbol):
            if key.id < len(self.names) and self.names[key.id] == key.name:
                return key.id
            raise InputError(f"symbol {key!r} does not belong to alphabet {list(self.names)}")
        if isinstance(key, bool):
            raise InputError(f"invalid symbol {key!r}")
        if isinstance(key, int):
            if 0 <= key < len(self.names):
                return key
            raise InputError(f"symbol id {key} out of range for alphabet of size {len(self)}")
        if isinstance(key, str):
            try:
                return self.names.index(key)
            except ValueError:
                raise InputError(f"unknown symbol {key!r}; alphabet is {list(self.names)}") from None
        raise InputError(f"invalid symbol {key!r}")

    def symbol(self, key: "SymbolLike") -> Symbol:
        i = self.index(key)
        return Symbol(i, self.names[i])


SymbolLike = Union[Symbol, str, int]


@dataclass(frozen=True)
class Cell:
    """A finite division word.  ``Cell(alphabet, ())`` is the unit."""

    alphabet: Alphabet
    word: tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.alphabet)
        for s in self.word:
            if not isinstance(s, int) or not 0 <= s < n:
                raise InputError(f"symbol id {s!r} invalid for alphabet {list(self.alphabet.names)}")

    @property
    def depth(self) -> int:
        return len(self.word)

    @property
    def length(self) -> int:
        # The unit counts as length 1.
        return len(self.word) + 1

    @property
    def code(self) -> int:
        """Base-``L`` integer encoding; equals the lex rank among cells of equal depth."""
        base = len(self.alphabet)
        value = 0
        for s in self.word:
            value = value * base + s
        return value

    @classmethod
    def from_code(cls, alphabet: Alphabet, code: int, depth: int) -> "Cell":
        base = len(alphabet)
        if not 0 <= code < base**depth:
            raise InputError(f"code {code} out of range for depth {depth}")
        word = []
        for _ in range(depth):
            code, r = divmod(code, base)
            word.append(r)
        return cls(alphabet, tuple(reversed(word)))

    @property
    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(Symbol(s, self.alphabet.names[s]) for s in self.word)

    def prefix(self, depth: int) -> "Cell":
        return Cell(self.alphabet, self.word[:depth])

    def __str__(self) -> str:
        return format_cell(self)

    def __repr__(self) -> str:
        return f"Cell({format_cell(self) or 'c_0'})"


def unit(alphabet: Alphabet) -> Cell:
    return Cell(alphabet, ())


def suc(c: Cell, a: SymbolLike) -> Cell:
    return Cell(c.alphabet, c.word + (c.alphabet.index(a),))


def pred(c: Cell) -> Cell:
    return Cell(c.alphabet, c.word[:-1])


def top(c: Cell) -> Union[Symbol, _Unit]:
    if not c.word:
        return UNIT
    s = c.word[-1]
    return Symbol(s, c.alphabet.names[s])


def length(c: Cell) -> int:
    return c.length


class PrefixRelation(enum.Enum):
    EQUAL = "Equal"
    ANCESTOR = "Ancestor"
    DESCENDANT = "Descendant"
    INCOMPARABLE = "Incomparable"


def _same_alphabet(x: Cell, y: Cell) -> None:
    if x.alphabet != y.alphabet:
        raise InputError(
            f"cells over different alphabets: {list(x.alphabet.names)} vs {list(y.alphabet.names)}"
        )


def is_prefix(x: Cell, y: Cell) -> bool:
    """True when ``x`` is an initial segment of ``y`` (equality included)."""
    return len(x.word) <= len(y.word) and y.word[: len(x.word)] == x.word


def prefix_relation(x: Cell, y: Cell) -> PrefixRelation:
    _same_alphabet(x, y)
    if x.word == y.word:
        return PrefixRelation.EQUAL
    if is_prefix(x, y):
        return PrefixRelation.ANCESTOR
    if is_prefix(y, x):
        return PrefixRelation.DESCENDANT
    return PrefixRelation.INCOMPARABLE


def lex_compare(x: Cell, y: Cell) -> int:
    """-1, 0 or 1; a proper prefix sorts before its extensions."""
    _same_alphabet(x, y)
    return (x.word > y.word) - (x.word < y.word)


def parse_cell(alphabet: Alphabet, text: str) -> Cell:
    text = text.strip()
    if text in ("", "c_0", "c0"):
        return Cell(alphabet, ())
    if text.startswith("c_0."):
        text = text[4:]
    return Cell(alphabet, tuple(alphabet.index(part) for part in text.split(".")))


def format_cell(c: Cell) -> str:
    return ".".join(c.alphabet.names[s] for s in c.word)


def cells_at_depth(alphabet: Alphabet, depth: int) -> Iterator[Cell]:
    """All cells of a depth, in lexicographic order."""
    for code in range(len(alphabet) ** depth):
        yield Cell.from_code(alphabet, code, depth)


# ---------------------------------------------------------------------------
# patterns


def _norm_pair(s: int, t: int) -> tuple[int, int]:
    return (s, t) if s < t else (t, s)


@dataclass(frozen=True)
class DPattern:
    """Division pattern: alphabet plus connected base adjacency graph."""

    alphabet: Alphabet
    base_adjacency: frozenset[tuple[int, int]]

    def __post_init__(self):
        n = len(self.alphabet)
        norm = set()
        for pair in self.base_adjacency:
            s, t = pair
            if not (0 <= s < n and 0 <= t < n):
                raise InputError(f"base adjacency pair {pair} out of range")
            if s == t:
                raise InputError(f"base adjacency must be irreflexive, got {self.alphabet.names[s]!r} twice")
            norm.add(_norm_pair(s, t))
        object.__setattr__(self, "base_adjacency", frozenset(norm))
        if not _is_connected(n, norm):
            raise InputError(f"base adjacency graph on {list(self.alphabet.names)} is not connected")

    @property
    def size(self) -> int:
        return len(self.alphabet)

    def adjacent(self, s: int, t: int) -> bool:
        return _norm_pair(s, t) in self.base_adjacency

    def neighbors(self, s: int) -> list[int]:
        return sorted({t for p in self.base_adjacency for t in p if s in p and t != s})

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.base_adjacency)


def _is_connected(n: int, pairs: Iterable[tuple[int, int]]) -> bool:
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for s, t in pairs:
        adj[s].append(t)
        adj[t].append(s)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


@dataclass(frozen=True)
class MRule:
    """Children ``(u, v)`` to append to an adjacent pair whose tops are ``key``.

    ``key[0]`` is the top of the lexicographically smaller cell; ``u`` extends
    that cell and ``v`` extends the larger one.
    """

    key: tuple[int, int]
    children: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.children:
            raise InputError(f"m-rule for key {self.key} has no children")


class GluingKind(str, enum.Enum):
    NONE = "none"
    SPHERE_CORNER = "sphere_corner"
    TORUS_OPPOSITE = "torus_opposite"
    MOEBIUS = "moebius"
    KLEIN = "klein"


_NEEDS_CORNER = {GluingKind.SPHERE_CORNER, GluingKind.KLEIN}


@dataclass(frozen=True)
class BorderGluing:
    kind: GluingKind
    corner: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", GluingKind(self.kind))
        if self.kind in _NEEDS_CORNER and self.corner is None:
            raise InputError(f"gluing {self.kind.value} requires a corner symbol")
        if self.kind not in _NEEDS_CORNER and self.corner is not None:
            raise InputError(f"gluing {self.kind.value} takes no corner symbol")


@dataclass(frozen=True)
class AdjacencyPattern:
    name: str
    d: DPattern
    m_rules: tuple[MRule, ...]
    sibling_extras: frozenset[tuple[int, int]] = frozenset()
    gluing: BorderGluing | None = None
    _rules: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n = self.d.size
        rules: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
        for rule in self.m_rules:
            for s in (*rule.key, *(x for pair in rule.children for x in pair)):
                if not 0 <= s < n:
                    raise InputError(f"m-rule {rule.key} refers to unknown symbol id {s}")
            if rule.key in rules:
                raise InputError(f"duplicate m-rule key {self.names(rule.key)}")
            rules[rule.key] = rule.children
        object.__setattr__(self, "m_rules", tuple(sorted(self.m_rules, key=lambda r: r.key)))
        object.__setattr__(self, "_rules", rules)
        extras = set()
        for s, t in self.sibling_extras:
            if s == t or not (0 <= s < n and 0 <= t < n):
                raise InputError(f"invalid sibling extra pair {(s, t)}")
            extras.add(_norm_pair(s, t))
        object.__setattr__(self, "sibling_extras", frozenset(extras))
        if self.gluing is not None and self.gluing.corner is not None:
            if not 0 <= self.gluing.corner < n:
                raise InputError(f"gluing corner id {self.gluing.corner} out of range")
        if self.gluing is not None and self.gluing.kind is GluingKind.NONE:
            object.__setattr__(self, "gluing", None)

    @property
    def alphabet(self) -> Alphabet:
        return self.d.alphabet

    @property
    def size(self) -> int:
        return self.d.size

    def rule(self, s: int, t: int) -> tuple[tuple[int, int], ...] | None:
        return self._rules.get((s, t))

    def names(self, pair: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.alphabet.names[s] for s in pair)

    def cell(self, text: str) -> Cell:
        return parse_cell(self.alphabet, text)

    def without_gluing(self) -> "AdjacencyPattern":
        return AdjacencyPattern(self.name, self.d, self.m_rules, self.sibling_extras, None)

    def rule_table(self) -> str:
        """One line per m-rule, e.g. ``(a,b) -> (b,a) (d,c)``."""
        lines = []
        for rule in self.m_rules:
            kids = " ".join("({},{})".format(*self.names(c)) for c in sorted(rule.children))
            lines.append("({},{}) -> {}".format(*self.names(rule.key), kids))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# pattern files

_PATTERN_KEYS = {"name", "alphabet", "adj_d", "m_rules", "gluing", "sibling_extras"}
_REQUIRED_KEYS = {"name", "alphabet", "adj_d", "m_rules"}


def pattern_to_dict(p: AdjacencyPattern) -> dict:
    data: dict = {
        "name": p.name,
        "alphabet": list(p.alphabet.names),
        "adj_d": [list(p.names(pair)) for pair in p.d.sorted_pairs()],
        "m_rules": [
            {"key": list(p.names(r.key)), "children": [list(p.names(c)) for c in r.children]}
            for r in p.m_rules
        ],
    }
    if p.sibling_extras:
        data["sibling_extras"] = [list(p.names(pair)) for pair in sorted(p.sibling_extras)]
    if p.gluing is not None:
        g: dict = {"kind": p.gluing.kind.value}
        if p.gluing.corner is not None:
            g["corner"] = p.alphabet.names[p.gluing.corner]
        data["gluing"] = g
    return data


def pattern_to_json(p: AdjacencyPattern) -> str:
    return json.dumps(pattern_to_dict(p), indent=2) + "\n"


def _pair(alphabet: Alphabet, raw, where: str) -> tuple[int, int]:
    if not isinstance(raw, list) or len(raw) != 2:
        raise InputError(f"{where}: expected a pair of symbol names, got {raw!r}")
    try:
        return alphabet.index(raw[0]), alphabet.index(raw[1])
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


def pattern_from_dict(data: Mapping, source: str = "<pattern>") -> AdjacencyPattern:
    """Build a pattern from its JSON form; raises InputError naming the offending key."""
    if not isinstance(data, Mapping):
        raise InputError(f"{source}: top level must be an object")
    unknown = set(data) - _PATTERN_KEYS
    if unknown:
        raise InputError(f"{source}: unknown field(s) {sorted(unknown)}")
    missing = _REQUIRED_KEYS - set(data)
    if missing:
        raise InputError(f"{source}: missing field(s) {sorted(missing)}")
    if not isinstance(data["alphabet"], list) or not all(isinstance(n, str) for n in data["alphabet"]):
        raise InputError(f"{source}: 'alphabet' must be a list of strings")
    try:
        alphabet = Alphabet(tuple(data["alphabet"]))
        base = frozenset(
            _pair(alphabet, raw, f"{source}: adj_d[{i}]") for i, raw in enumerate(data["adj_d"])
        )
        d = DPattern(alphabet, base)
        rules = []
        for i, raw in enumerate(data["m_rules"]):
            where = f"{source}: m_rules[{i}]"
            if not isinstance(raw, Mapping) or set(raw) != {"key", "children"}:
                raise InputError(f"{where}: expected an object with exactly 'key' and 'children'")
            children = tuple(
                _pair(alphabet, c, f"{where}.children[{j}]") for j, c in enumerate(raw["children"])
            )
            rules.append(MRule(_pair(alphabet, raw["key"], f"{where}.key"), children))
        extras = frozenset(
            _pair(alphabet, raw, f"{source}: sibling_extras[{i}]")
            for i, raw in enumerate(data.get("sibling_extras", []))
        )
        gluing = None
        if data.get("gluing") is not None:
            g = data["gluing"]
            if not isinstance(g, Mapping) or not set(g) <= {"kind", "corner"} or "kind" not in g:
                raise InputError(f"{source}: gluing must be an object with 'kind' and optional 'corner'")
            try:
                kind = GluingKind(g["kind"])
            except ValueError:
                raise InputError(f"{source}: gluing.kind {g['kind']!r} is not one of "
                                 f"{[k.value for k in GluingKind]}") from None
            corner = alphabet.index(g["corner"]) if g.get("corner") is not None else None
            gluing = BorderGluing(kind, corner)
        name = data["name"]
        if not isinstance(name, str):
            raise InputError(f"{source}: 'name' must be a string")
        pattern = AdjacencyPattern(name, d, tuple(rules), extras, gluing)
    except InputError as exc:
        msg = str(exc)
        raise InputError(msg if msg.startswith(source) else f"{source}: {msg}") from None
    if pattern.gluing is not None:
        # Gluings are defined on Euclidean bases only; imported lazily to avoid a cycle.
        from .patterns import check_gluing_base

        check_gluing_base(pattern.without_gluing(), pattern.gluing)
    return pattern


def pattern_from_json(text: str, source: str = "<pattern>") -> AdjacencyPattern:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return pattern_from_dict(data, source)
