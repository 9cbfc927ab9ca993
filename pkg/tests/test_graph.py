import io
import warnings

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete
from mixspec import EmptyGraphError, Graph, ParseError, enumerate_triangles, load_edge_list, load_zachary
from mixspec.graph import cached_triangles, degree_vector, load_triangle_index, save_triangle_index
from oracles import dense_adjacency, triangle_adjacency


def test_load_k3_from_bytes():
    g = load_edge_list(b"0 1\n1 2\n2 0")
    assert (g.n, g.m) == (3, 3)


def test_dedup_and_self_loop_dropped():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        g = load_edge_list(io.StringIO("5 9\n9 5\n5 5"))
    assert (g.n, g.m) == (2, 1)
    assert g.dropped_self_loops == 1
    assert any("self-loop" in str(w.message) for w in caught)
    assert g.ids.tolist() == [5, 9]


def test_comments_and_first_appearance_order():
    g = load_edge_list(b"# header\n7 3\n\n3 11\n")
    assert g.ids.tolist() == [7, 3, 11]
    assert g.edges().tolist() == [[0, 1], [1, 2]]


def test_parse_error_reports_line():
    with pytest.raises(ParseError) as info:
        load_edge_list(b"0 1\n1 x\n")
    assert info.value.line == 2


def test_parse_error_on_single_token():
    with pytest.raises(ParseError):
        load_edge_list(b"0 1\n2\n")


def test_empty_input():
    with pytest.raises(EmptyGraphError):
        load_edge_list(b"# nothing here\n")


def test_adjacency_symmetric_and_sorted():
    g = load_edge_list(b"0 1\n1 2\n2 0\n2 3")
    a = g.adjacency()
    assert (a != a.T).nnz == 0
    for i in range(g.n):
        nb = g.neighbors(i)
        assert np.all(np.diff(nb) > 0)
        assert i not in nb


def test_zachary_size_and_triangles():
    g, truth = load_zachary()
    assert (g.n, g.m) == (34, 78)
    assert len(enumerate_triangles(g)) == 45
    assert truth.k == 2


def test_k3_triangles(k3):
    g, ti = k3
    assert len(ti) == 1
    assert ti.wt.toarray()[np.triu_indices(3, 1)].tolist() == [1, 1, 1]


def test_c4_has_no_triangles():
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    ti = enumerate_triangles(g)
    assert len(ti) == 0
    assert ti.wt.nnz == 0
    assert ti.dt.tolist() == [0, 0, 0, 0]


def test_k4_triangles(k4):
    g, ti = k4
    assert len(ti) == 4
    wt = ti.wt.toarray()
    assert np.all(wt[~np.eye(4, dtype=bool)] == 2)
    assert ti.dt.tolist() == [6, 6, 6, 6]


def test_degree_vector_examples(k3, k4):
    assert degree_vector(k3[0].adjacency()).tolist() == [2, 2, 2]
    assert degree_vector(k4[1].wt).tolist() == [6, 6, 6, 6]
    assert degree_vector(sp.csr_matrix((5, 5))).tolist() == [0] * 5


@st.composite
def small_graphs(draw, max_n=12):
    n = draw(st.integers(3, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [p for p, k in zip(pairs, keep) if k]
    return n, edges


@settings(max_examples=80, deadline=None)
@given(small_graphs())
def test_triangle_count_matches_trace(data):
    n, edges = data
    g = Graph.from_edges(edges, n=n)
    ti = enumerate_triangles(g)
    w = dense_adjacency(n, edges)
    assert len(ti) == round(np.trace(w @ w @ w) / 6)
    np.testing.assert_array_equal(ti.wt.toarray(), triangle_adjacency(w))
    assert ti.dt.sum() == 6 * len(ti)
    # triangle weight only sits on existing edges
    assert np.all(w[ti.wt.toarray() > 0] == 1)
    # stored triples are sorted and unique
    tri = ti.triangles
    assert np.all(tri[:, 0] < tri[:, 1]) and np.all(tri[:, 1] < tri[:, 2])
    assert len({tuple(t) for t in tri.tolist()}) == len(ti)


def test_subgraph_is_induced():
    g = complete(5)
    sub = g.subgraph([4, 1, 2])
    assert sub.n == 3 and sub.m == 3
    assert sub.ids.tolist() == [4, 1, 2]


def test_triangle_cache_round_trip(tmp_path, zachary):
    g, ti, _ = zachary
    path = tmp_path / "t.npz"
    save_triangle_index(ti, path)
    back = load_triangle_index(path)
    np.testing.assert_array_equal(back.triangles, ti.triangles)
    assert (back.wt != ti.wt).nnz == 0
    first = cached_triangles(g, tmp_path / "cache")
    again = cached_triangles(g, tmp_path / "cache")
    assert len(list((tmp_path / "cache").iterdir())) == 1
    np.testing.assert_array_equal(first.triangles, again.triangles)


def test_content_hash_depends_on_edges():
    a = Graph.from_edges([(0, 1), (1, 2)])
    b = Graph.from_edges([(0, 1), (0, 2)])
    assert a.content_hash() != b.content_hash()
    assert a.content_hash() == Graph.from_edges([(1, 2), (1, 0)]).content_hash()


def test_graph_is_immutable(k3):
    g, ti = k3
    with pytest.raises(ValueError):
        g.indices[0] = 2
    with pytest.raises(ValueError):
        ti.triangles[0, 0] = 1
