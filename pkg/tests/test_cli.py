import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from continuum.cli import run
from continuum.complexes import Complex
from continuum.export import cell_polygons, level_graph_to_dot, render_svg, triangle_corners
from continuum.adjacency import level_graph
from continuum.patterns import euclid, get_pattern

FIXTURES = Path(__file__).parent / "fixtures"
SVG = "{http://www.w3.org/2000/svg}"


def cli(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_graph_dot_contains_table_pair(capsys):
    code, out, _ = cli(capsys, "graph", "gen", "--pattern", "euclid2", "--depth", "2", "--format", "dot")
    assert code == 0
    assert '"a.d" -- "b.c"' in out


def test_graph_json(capsys):
    code, out, _ = cli(capsys, "graph", "gen", "--pattern", "euclid1", "--depth", "2", "--format", "json")
    data = json.loads(out)
    assert data["nodes"] == ["a.a", "a.b", "b.a", "b.b"]
    assert ["a.b", "b.a", "rule"] in data["edges"]


def test_dot_parses_with_pydot():
    pydot = pytest.importorskip("pydot")
    text = level_graph_to_dot(level_graph(euclid(2), 3))
    (graph,) = pydot.graph_from_dot_data(text)
    assert len(graph.get_edges()) == 2 * 8 * 7
    assert len([n for n in graph.get_nodes() if n.get_name() not in ("node", "edge")]) == 64


def test_check_exit_codes(capsys):
    assert cli(capsys, "check", "refinement", "--pattern", "euclid1", "--depth", "6")[0] == 0
    code, out, _ = cli(capsys, "check", "homogeneity", "--pattern", "carpet", "--depth", "3")
    assert code == 1 and "FAIL" in out and "witness" in out
    code, out, _ = cli(capsys, "check", "dimension", "--pattern", "euclid2", "--format", "json")
    assert code == 0 and json.loads(out)["details"]["dimension"] == 2
    code, out, _ = cli(capsys, "check", "indiscernibility", "--pattern", "triangle")
    assert code == 0


def test_brouwer_cli(capsys):
    code, out, _ = cli(capsys, "fn", "brouwer", "--fn", "head_const", "--depth", "4")
    assert code == 1
    assert json.loads(out)["witness"]["stream_u"] == "a.b.b.b"
    code, out, _ = cli(capsys, "fn", "brouwer", "--fn", "reverse", "--depth", "6")
    assert code == 0 and json.loads(out)["witness"] is None


def test_fn_other_actions(capsys, tmp_path):
    assert cli(capsys, "fn", "continuous", "--fn", "identity", "--depth", "5")[0] == 0
    assert cli(capsys, "fn", "continuous", "--fn", "head_const", "--depth", "3")[0] == 1
    code, out, _ = cli(capsys, "fn", "image", "--fn", "head_const", "--cell", "a.b.b")
    assert (code, out) == (0, "a.a.a\n")
    table = tmp_path / "h.json"
    assert cli(capsys, "fn", "table", "--fn", "head_const", "--depth", "3", "--out", str(table))[0] == 0
    assert cli(capsys, "fn", "monotonic", "--fn", str(table), "--depth", "3")[0] == 0


def test_borders(capsys):
    code, out, _ = cli(capsys, "borders", "--pattern", "euclid2", "--depth", "3", "--format", "json")
    data = json.loads(out)
    assert data["census"] == {"0": 4, "1": 24}
    code, _, err = cli(capsys, "borders", "--pattern", "triangle", "--depth", "3")
    assert code == 2 and "dimension" in err


def test_complex_commands(capsys):
    code, out, _ = cli(capsys, "complex", "tree", "--complex", str(FIXTURES / "center_block.json"), "--format", "json")
    assert code == 0 and len(json.loads(out)["nodes"]) == 3
    code, _, _ = cli(capsys, "complex", "tree", "--complex", str(FIXTURES / "shape_tree_counterexample.json"))
    assert code == 1
    code, out, _ = cli(capsys, "complex", "segments", "--image", str(FIXTURES / "two_blobs.pbm"))
    assert code == 0 and len(out.splitlines()) == 4
    code, out, _ = cli(capsys, "complex", "tree", "--complex", str(FIXTURES / "center_block.json"), "--format", "dot")
    assert out.startswith("graph shape_tree {")


def test_input_errors(capsys, tmp_path):
    code, _, err = cli(capsys, "graph", "gen", "--pattern", "nope", "--depth", "2")
    assert code == 2 and "unknown pattern" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"pattern": "euclid2",\n "depth": }')
    code, _, err = cli(capsys, "complex", "tree", "--complex", str(bad))
    assert code == 2 and "bad.json: line 2" in err
    assert cli(capsys, "graph", "gen", "--pattern", "euclid2")[0] == 2
    assert cli(capsys, "frobnicate")[0] == 2
    code, _, err = cli(capsys, "render", "--pattern", "torus", "--depth", "2")
    assert code == 2 and "embedding" in err


def test_pattern_from_file(capsys, tmp_path):
    code, out, _ = cli(capsys, "pattern", "show", "--pattern", "euclid2")
    path = tmp_path / "mine.json"
    path.write_text(out)
    code, out2, _ = cli(capsys, "graph", "gen", "--pattern", str(path), "--depth", "2", "--format", "text")
    assert code == 0 and "a.d -- b.c rule" in out2


class TestSvg:
    def polygons(self, text):
        return ET.fromstring(text).findall(f"{SVG}polygon")

    def test_interval_has_equal_pieces(self):
        polys = self.polygons(render_svg(euclid(1), 3))
        widths = set()
        for poly in polys:
            xs = [float(p.split(",")[0]) for p in poly.get("points").split()]
            widths.add(round(max(xs) - min(xs), 3))
        assert len(polys) == 8 and len(widths) == 1

    def test_colored_grid(self):
        cx = Complex.from_mapping(euclid(2), 2, {"a.d": 2})
        polys = self.polygons(render_svg(euclid(2), 2, cx))
        assert len(polys) == 16
        fills = {p.get("id"): p.get("fill") for p in polys}
        assert fills["a.d"] == "#202020" and fills["a.a"] == "#ffffff"

    def test_carpet_omits_centres(self):
        polys = cell_polygons(get_pattern("carpet"), 2)
        assert len(polys) == 64
        centre = (0.5, 0.5)
        assert not any(p[0][0] < centre[0] < p[1][0] and p[0][1] < centre[1] < p[2][1] for p in polys)

    def test_overlay_draws_every_edge(self):
        root = ET.fromstring(render_svg(get_pattern("triangle"), 3, overlay=True))
        assert len(root.findall(f"{SVG}line")) == len(level_graph(get_pattern("triangle"), 3).edges)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_triangle_embedding_realises_adjacency(self, k):
        corners = triangle_corners(k)
        g = level_graph(get_pattern("triangle"), k)
        touching = {
            (i, j)
            for i in range(len(corners))
            for j in range(i + 1, len(corners))
            if set(corners[i]) & set(corners[j])
        }
        assert touching == set(g.edges)

    def test_render_is_deterministic(self):
        p = get_pattern("carpet")
        assert render_svg(p, 2, overlay=True) == render_svg(p, 2, overlay=True)
