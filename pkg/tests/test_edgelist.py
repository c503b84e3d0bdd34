from __future__ import annotations

import pytest

from arborpack.edgelist import EdgeListError, format_edge_list, parse_edge_list, parse_graph_file
from arborpack.errors import LoopError
from arborpack.graph import Digraph, Graph


def test_parse_two_cycle():
    D = parse_edge_list("2 2 directed\n0 1\n1 0")
    assert isinstance(D, Digraph)
    assert [(a.tail, a.head) for a in D.arcs] == [(0, 1), (1, 0)]


def test_loop_rejected_with_rule():
    with pytest.raises(LoopError, match="loop"):
        parse_edge_list("2 1 directed\n0 0")


def test_parse_triangle_graph():
    G = parse_edge_list("3 3 undirected\n0 1\n1 2\n0 2")
    assert isinstance(G, Graph)
    assert G.m == 3


def test_comments_and_blank_lines():
    D = parse_edge_list("# a comment\n\n3 2 directed\n0 1  # trailing\n\n2 1\n")
    assert D.m == 2


@pytest.mark.parametrize(
    "text, line",
    [
        ("2 2 directed\n0 1\n", None),  # too few arcs
        ("2 1 directed\n0 5\n", 2),
        ("2 1 directed\n0 x\n", 2),
        ("2 1 sideways\n0 1\n", 1),
    ],
)
def test_malformed(text, line):
    with pytest.raises(EdgeListError) as info:
        parse_edge_list(text)
    if line is not None:
        assert info.value.line == line


def test_round_trip(tmp_path):
    D = Digraph.from_pairs(3, [(0, 1), (0, 1), (2, 0)])
    path = tmp_path / "g.txt"
    path.write_text(format_edge_list(D))
    again = parse_graph_file(path)
    assert [(a.tail, a.head) for a in again.arcs] == [(0, 1), (0, 1), (2, 0)]
