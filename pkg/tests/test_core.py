import json

import pytest

from continuum.core import (
    UNIT,
    AdjacencyPattern,
    Alphabet,
    BorderGluing,
    Cell,
    DPattern,
    GluingKind,
    InputError,
    MRule,
    PrefixRelation,
    cells_at_depth,
    format_cell,
    lex_compare,
    parse_cell,
    pattern_from_json,
    pattern_to_dict,
    pattern_to_json,
    pred,
    prefix_relation,
    suc,
    top,
    unit,
)
from continuum.patterns import builtin_names, get_pattern

AB = Alphabet(("a", "b"))
ABCD = Alphabet(("a", "b", "c", "d"))


def c(text, alphabet=AB):
    return parse_cell(alphabet, text)


class TestCellOperations:
    def test_suc(self):
        assert suc(unit(AB), "a") == c("a")
        assert suc(c("a.b"), "a") == c("a.b.a")
        assert suc(c("b"), "b") == c("b.b")

    def test_suc_rejects_unknown_symbol(self):
        with pytest.raises(InputError):
            suc(c("a"), "z")

    def test_pred(self):
        assert pred(c("a.b")) == c("a")
        assert pred(unit(AB)) == unit(AB)
        assert pred(c("b.a.a")) == c("b.a")

    def test_top(self):
        assert top(c("a.b")).name == "b"
        assert top(unit(AB)) is UNIT
        assert top(c("b.a.a")).name == "a"

    def test_length_counts_the_unit(self):
        assert unit(AB).length == 1
        assert c("a.b").length == 3 and c("a.b").depth == 2
        assert c("a").length == 2

    @pytest.mark.parametrize(
        "x, y, rel",
        [
            ("a", "a.b", PrefixRelation.ANCESTOR),
            ("a.b", "a.b", PrefixRelation.EQUAL),
            ("a.b", "b.a", PrefixRelation.INCOMPARABLE),
            ("a.b.a", "a", PrefixRelation.DESCENDANT),
            ("", "b", PrefixRelation.ANCESTOR),
        ],
    )
    def test_prefix_relation(self, x, y, rel):
        assert prefix_relation(c(x), c(y)) is rel

    def test_prefix_relation_alphabet_mismatch(self):
        with pytest.raises(InputError):
            prefix_relation(c("a"), c("a", ABCD))

    def test_lex_compare(self):
        assert lex_compare(c("a.b"), c("b.a")) == -1
        assert lex_compare(c("a.b"), c("a.b")) == 0
        assert lex_compare(c("c.d", ABCD), c("d.a", ABCD)) == -1
        assert lex_compare(c("a"), c("a.a")) == -1

    def test_parse_and_format(self):
        assert c("a.b.b").word == (0, 1, 1)
        assert c("") == unit(AB) == c("c_0")
        assert c("c_0.a.b") == c("a.b")
        assert format_cell(c("b.a")) == "b.a"
        with pytest.raises(InputError):
            c("a.z")

    def test_code_is_lex_rank(self):
        cells = list(cells_at_depth(ABCD, 3))
        assert [x.code for x in cells] == list(range(64))
        assert cells == sorted(cells, key=lambda x: x.word)
        assert all(Cell.from_code(ABCD, x.code, 3) == x for x in cells)


class TestPatternTypes:
    def test_alphabet_validation(self):
        with pytest.raises(InputError):
            Alphabet(())
        with pytest.raises(InputError):
            Alphabet(("a", "a"))
        with pytest.raises(InputError):
            Alphabet(("a.b", "c"))

    def test_dpattern_must_be_connected(self):
        abc = Alphabet(("a", "b", "c"))
        with pytest.raises(InputError):
            DPattern(abc, frozenset({(0, 1)}))

    def test_dpattern_irreflexive(self):
        with pytest.raises(InputError):
            DPattern(AB, frozenset({(0, 0), (0, 1)}))

    def test_empty_rule_rejected(self):
        with pytest.raises(InputError):
            MRule((0, 1), ())

    def test_duplicate_rule_key_rejected(self):
        d = DPattern(AB, frozenset({(0, 1)}))
        with pytest.raises(InputError):
            AdjacencyPattern("x", d, (MRule((0, 1), ((1, 0),)), MRule((0, 1), ((1, 1),))))

    def test_gluing_corner_requirements(self):
        with pytest.raises(InputError):
            BorderGluing(GluingKind.SPHERE_CORNER)
        with pytest.raises(InputError):
            BorderGluing(GluingKind.TORUS_OPPOSITE, 0)


class TestPatternFiles:
    @pytest.mark.parametrize("name", builtin_names())
    def test_round_trip(self, name):
        p = get_pattern(name)
        q = pattern_from_json(pattern_to_json(p))
        assert q == p
        assert pattern_to_dict(q) == pattern_to_dict(p)

    def test_unknown_field_named(self):
        data = pattern_to_dict(get_pattern("euclid1"))
        data["colour"] = 1
        with pytest.raises(InputError, match="colour"):
            pattern_from_json(json.dumps(data), "demo.json")

    def test_bad_symbol_names_location(self):
        data = pattern_to_dict(get_pattern("euclid1"))
        data["m_rules"][0]["children"][0] = ["a", "q"]
        with pytest.raises(InputError, match=r"demo.json: m_rules\[0\]\.children\[0\]"):
            pattern_from_json(json.dumps(data), "demo.json")

    def test_malformed_json_reports_position(self):
        with pytest.raises(InputError, match="line 1 column"):
            pattern_from_json("{", "broken.json")

    def test_gluing_on_non_euclidean_base(self):
        data = pattern_to_dict(get_pattern("triangle"))
        data["gluing"] = {"kind": "torus_opposite"}
        with pytest.raises(InputError):
            pattern_from_json(json.dumps(data))
