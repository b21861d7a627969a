import json
import random

import pytest

import oracles
from continuum.adjacency import level_graph
from continuum.core import Cell, ContractError, InputError, cells_at_depth
from continuum.functions import (
    CellFunction,
    brouwer_witness,
    builtin_function,
    function_from_json,
    function_to_dict,
    head_const,
    identity,
    is_continuous,
    is_monotonic,
    is_strict,
    random_monotone_function,
    reverse,
    stream_image,
    streams_equivalent,
)
from continuum.patterns import euclid, get_pattern, sierpinski_triangle


@pytest.fixture
def e1():
    return euclid(1)


def table_from(p, k_max, rule):
    return CellFunction.from_table(
        p, p, k_max, {c.word: rule(c) for k in range(k_max + 1) for c in cells_at_depth(p.alphabet, k)}
    )


def test_identity_passes_everything(e1):
    f = identity(e1)
    assert is_monotonic(f, 6).passed and is_strict(f, 6).passed and is_continuous(f, 6).passed


def test_head_const(e1):
    h = head_const(e1)
    assert is_monotonic(h, 6).passed
    assert is_strict(h, 6).passed
    report = is_continuous(h, 6)
    assert not report.passed
    assert report.violations[0] == ["a.b", "b.a", "a.a", "b.b"]


def test_reverse_is_continuous(e1):
    r = reverse(e1)
    assert is_continuous(r, 8).passed
    assert is_continuous(reverse(euclid(2)), 4).passed
    with pytest.raises(InputError):
        reverse(sierpinski_triangle())


def test_non_monotone_fixture(e1):
    # a.a maps outside the image of its parent
    f = table_from(e1, 2, lambda c: (1, 1) if c.word == (0, 0) else c.word)
    report = is_monotonic(f, 2)
    assert not report.passed and report.violations == [["a", "a.a", "a", "b.b"]]
    with pytest.raises(ContractError):
        stream_image(f, e1.cell("a.a"))
    with pytest.raises(ContractError):
        brouwer_witness(f, 2)


def test_constant_is_not_strict(e1):
    f = table_from(e1, 3, lambda c: (0,) if c.word else ())
    report = is_strict(f, 3)
    assert not report.passed
    assert report.violations == ["a", "b", "a.a", "a.b", "b.a", "b.b"]
    assert report.details["unverified_depth"] == 3
    with pytest.raises(ContractError):
        brouwer_witness(f, 3)


def test_strict_matches_brute_force(e1):
    rng = random.Random(3)
    for _ in range(20):
        f = table_from(e1, 4, lambda c: c.word[: rng.randint(0, c.depth)] if c.depth < 4 else c.word)
        brute = []
        for k in range(4):
            for x in cells_at_depth(e1.alphabet, k):
                below = [
                    y for d in range(k + 1, 5) for y in cells_at_depth(e1.alphabet, d) if y.word[:k] == x.word
                ]
                if all(f(y) == f(x) for y in below):
                    brute.append(str(x) or "c_0")
        assert is_strict(f, 4).violations == brute


def test_stream_image(e1):
    assert stream_image(identity(e1), e1.cell("a.b.b")) == e1.cell("a.b.b")
    assert stream_image(head_const(e1), e1.cell("a.b.b")) == e1.cell("a.a.a")
    assert stream_image(reverse(e1), e1.cell("a.b")) == e1.cell("b.a")


def test_streams_equivalent(e1):
    assert streams_equivalent(e1, e1.cell("a.b.b"), e1.cell("b.a.a"))
    assert not streams_equivalent(e1, e1.cell("a.a.a"), e1.cell("b.b.b"))
    assert streams_equivalent(e1, e1.cell("a.b"), e1.cell("a.b"))
    with pytest.raises(InputError):
        streams_equivalent(e1, e1.cell("a"), e1.cell("a.b"))


def test_brouwer_head_const(e1):
    w = brouwer_witness(head_const(e1), 4)
    assert w.to_dict() == {
        "u": "a.b",
        "z": "b.a",
        "f_u": "a.a",
        "f_z": "b.b",
        "stream_u": "a.b.b.b",
        "stream_z": "b.a.a.a",
        "image_stream_u": "a.a.a.a",
        "image_stream_z": "b.b.b.b",
        "depth": 4,
    }


def test_brouwer_absent_for_continuous(e1):
    assert brouwer_witness(identity(e1), 8) is None
    assert brouwer_witness(reverse(e1), 8) is None


def test_head_const_wraps_continuously_on_the_circle():
    circle = get_pattern("circle")
    assert is_continuous(head_const(circle), 5).passed


def test_brouwer_through_a_gluing_edge(e1):
    circle = get_pattern("circle")
    unwrap = CellFunction("unwrap", circle, e1, 8, lambda c: Cell(e1.alphabet, c.word))
    w = brouwer_witness(unwrap, 4)
    assert (str(w.u), str(w.z)) == ("a.a", "b.b")
    assert (str(w.stream_u), str(w.stream_z)) == ("a.a.a.a", "b.b.b.b")
    assert streams_equivalent(circle, w.stream_u, w.stream_z)
    assert not streams_equivalent(e1, w.image_stream_u, w.image_stream_z)


@pytest.mark.parametrize("name", ["euclid1", "euclid2"])
def test_witness_iff_discontinuous(name):
    p = get_pattern(name)
    rng = random.Random(99)
    K = 4 if name == "euclid1" else 3
    for _ in range(40):
        f = random_monotone_function(p, K, rng, scramble=rng.choice([0.0, 0.1, 0.5]))
        assert is_monotonic(f, K).passed and is_strict(f, K).passed
        w = brouwer_witness(f, K)
        assert (w is None) == is_continuous(f, K).passed
        if w is not None:
            assert streams_equivalent(p, w.stream_u, w.stream_z)
            assert not streams_equivalent(p, w.image_stream_u, w.image_stream_z)


def test_continuous_maps_send_edges_to_edges_or_equal(e1):
    rng = random.Random(4)
    for _ in range(30):
        f = random_monotone_function(e1, 4, rng, scramble=0.1)
        if not is_continuous(f, 4).passed:
            continue
        for k in range(1, 5):
            allowed = oracles.interval_edges(k)
            for i, j in level_graph(e1, k).edges:
                a, b = f(Cell.from_code(e1.alphabet, i, k)), f(Cell.from_code(e1.alphabet, j, k))
                assert a == b or tuple(sorted((a.code, b.code))) in allowed


def test_table_file_round_trip(e1):
    h = head_const(e1)
    data = function_to_dict(h, 3)
    g = function_from_json(json.dumps(data))
    assert all(g(c) == h(c) for k in range(4) for c in cells_at_depth(e1.alphabet, k))
    assert data["map"]["c_0"] == "c_0"


def test_table_validation(e1):
    data = function_to_dict(identity(e1), 2)
    del data["map"]["a.b"]
    with pytest.raises(InputError, match="missing cell 'a.b'"):
        function_from_json(json.dumps(data), "f.json")
    data = function_to_dict(identity(e1), 2)
    data["map"]["a"] = "z"
    with pytest.raises(InputError, match=r"f.json: map\['a'\]"):
        function_from_json(json.dumps(data), "f.json")
    with pytest.raises(InputError):
        identity(e1, 3)(e1.cell("a.a.a.a"))


def test_builtin_lookup(e1):
    assert builtin_function("identity").name == "identity"
    with pytest.raises(InputError):
        builtin_function("square")
