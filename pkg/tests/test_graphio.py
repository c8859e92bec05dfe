import numpy as np
import pytest

from delaymin import (BaSpec, GraphError, GraphFileSpec, assign_delays,
                      generate_ba, load_graph, parse_delay_scheme, save_graph,
                      spd)
from delaymin.graphio import ParseError


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_load_edge_and_delay_files(tmp_path):
    edges = _write(tmp_path, "e.txt", "a b\nb c\n")
    delays = _write(tmp_path, "d.txt", "a 2\nb 5\nc 3\n")
    g = load_graph(GraphFileSpec(edges, delays))
    assert g.node_count == 3 and g.edge_count == 2
    assert g.labels == ("a", "b", "c")  # first-appearance order
    assert g.delays.tolist() == [2.0, 5.0, 3.0]
    assert spd(g) == 30.0


def test_load_deduplicates_reversed_edges(tmp_path):
    edges = _write(tmp_path, "e.txt", "a b\nb a\n# comment\n\n")
    g = load_graph(edges)
    assert g.node_count == 2 and g.edge_count == 1


def test_load_reports_component_count(tmp_path):
    edges = _write(tmp_path, "e.txt", "a b\nc d\n")
    with pytest.raises(GraphError, match="2 components"):
        load_graph(edges)


def test_load_parse_error_carries_line_number(tmp_path):
    edges = _write(tmp_path, "e.txt", "a b\na b c\n")
    with pytest.raises(ParseError, match="e.txt:2"):
        load_graph(edges)


def test_load_rejects_self_loop_with_line(tmp_path):
    edges = _write(tmp_path, "e.txt", "a b\nb b\n")
    with pytest.raises(ParseError, match=":2"):
        load_graph(edges)


def test_delay_file_validation(tmp_path):
    edges = _write(tmp_path, "e.txt", "a b\nb c\n")
    dup = _write(tmp_path, "dup.txt", "a 1\na 2\nb 1\nc 1\n")
    with pytest.raises(ParseError, match="duplicate"):
        load_graph(GraphFileSpec(edges, dup))
    unknown = _write(tmp_path, "unk.txt", "a 1\nb 1\nc 1\nz 4\n")
    with pytest.raises(ParseError, match="unknown node"):
        load_graph(GraphFileSpec(edges, unknown))
    missing = _write(tmp_path, "mis.txt", "a 1\nb 1\n")
    with pytest.raises(GraphError, match="no delay entry"):
        load_graph(GraphFileSpec(edges, missing))


def test_integer_label_mode_sorts_numerically(tmp_path):
    edges = _write(tmp_path, "e.txt", "10 2\n2 1\n")
    g = load_graph(GraphFileSpec(edges, label_mode="integer"))
    assert g.labels == ("1", "2", "10")
    g2 = load_graph(GraphFileSpec(edges, label_mode="string"))
    assert g2.labels == ("10", "2", "1")


def test_save_load_roundtrip(tmp_path):
    g = generate_ba(BaSpec(n=40, edges_per_node=3, seed=9))
    g = assign_delays(g, "uniform_int:10:100:10", seed=1)
    e, d = str(tmp_path / "e.txt"), str(tmp_path / "d.txt")
    save_graph(g, e, d)
    back = load_graph(GraphFileSpec(e, d, label_mode="integer"))
    assert back.node_count == g.node_count
    assert back.edge_count == g.edge_count
    assert sorted(back.edge_list()) == sorted(g.edge_list())
    assert np.array_equal(back.delays, g.delays)
    # label-space round trip holds regardless of id assignment
    as_str = load_graph(GraphFileSpec(e, d))
    pairs = {tuple(sorted((as_str.label_of(u), as_str.label_of(v))))
             for u, v in as_str.edge_list()}
    assert pairs == {tuple(sorted((str(u), str(v)))) for u, v in g.edge_list()}
    by_label = {as_str.label_of(v): as_str.delays[v]
                for v in range(as_str.node_count)}
    assert by_label == {str(v): g.delays[v] for v in range(g.node_count)}


def test_generate_ba_forced_clique():
    g = generate_ba(BaSpec(n=4, edges_per_node=3, seed=0))
    assert g.edge_count == 6  # K4


def test_generate_ba_edge_count_formula():
    g = generate_ba(BaSpec(n=2000, edges_per_node=5, seed=2))
    assert g.edge_count == 15 + 1994 * 5  # seed clique C(6,2) plus 5 per arrival
    assert g.edge_count == 9985
    assert g.is_uniform


def test_generate_ba_deterministic():
    a = generate_ba(BaSpec(n=300, edges_per_node=4, seed=11))
    b = generate_ba(BaSpec(n=300, edges_per_node=4, seed=11))
    assert a.edge_list() == b.edge_list()


def test_generate_ba_heavy_tail_grows():
    degs = []
    for n in (100, 400, 1600):
        g = generate_ba(BaSpec(n=n, edges_per_node=3, seed=4))
        degs.append(int(g.degrees.max()))
    assert degs[0] < degs[1] < degs[2]


def test_generate_ba_validates():
    with pytest.raises(GraphError):
        generate_ba(BaSpec(n=4, edges_per_node=0, seed=0))
    with pytest.raises(GraphError):
        generate_ba(BaSpec(n=4, edges_per_node=4, seed=0))


def test_assign_delays_schemes():
    g = generate_ba(BaSpec(n=100, edges_per_node=2, seed=3))
    assert assign_delays(g, "constant:1").is_uniform
    stepped = assign_delays(g, "uniform_int:10:100:10", seed=5)
    assert set(np.unique(stepped.delays)) <= {float(x) for x in range(10, 101, 10)}
    real = assign_delays(g, "uniform_real:500:1000", seed=5)
    assert np.all((real.delays >= 500) & (real.delays <= 1000))
    assert not real.is_uniform
    again = assign_delays(g, "uniform_real:500:1000", seed=5)
    assert np.array_equal(real.delays, again.delays)


def test_assign_delays_from_file(tmp_path):
    edges = tmp_path / "e.txt"
    edges.write_text("a b\nb c\n")
    delays = tmp_path / "d.txt"
    delays.write_text("a 4\nb 6\nc 8\n")
    g = load_graph(str(edges))
    out = assign_delays(g, f"file:{delays}")
    assert out.delays.tolist() == [4.0, 6.0, 8.0]


def test_assign_delays_rejects_nonpositive():
    g = generate_ba(BaSpec(n=10, edges_per_node=2, seed=0))
    for scheme in ("constant:0", "uniform_int:0:5", "uniform_real:0:1"):
        with pytest.raises(GraphError):
            assign_delays(g, scheme)


def test_parse_delay_scheme_errors():
    with pytest.raises(GraphError):
        parse_delay_scheme("banana:1")
    with pytest.raises(GraphError):
        parse_delay_scheme("uniform_int:abc:5")
