
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from reference import gasket_edges, sierpinski_edges

from sierpinski_eip.errors import ParameterError
from sierpinski_eip.graphs import (
    HAMMING,
    QUOTIENT,
    SIERPINSKI,
    GraphSpec,
    VertexWord,
    cartesian_product,
    complete_graph,
    corner_index,
    corner_vertices,
    counts,
    embed,
    format_edge_list,
    hamming_graph,
    index_to_word,
    is_edge,
    km_decomposition,
    neighbor_indices,
    neighbors,
    parse_edge_list,
    parse_word,
    quotient_graph,
    sierpinski_graph,
    word_to_index,
)

small_nm = st.tuples(st.integers(1, 4), st.integers(2, 4))


@pytest.mark.parametrize("n,m", [(n, m) for n in range(1, 5) for m in range(2, 5)])
def test_counts_match_materialized(n, m):
    g = sierpinski_graph(n, m)
    nv, ne = counts(GraphSpec(SIERPINSKI, n, m))
    assert (g.num_vertices, g.num_edges) == (nv, ne) == (m**n, (m ** (n + 1) - m) // 2)


@pytest.mark.parametrize("n,m", [(1, 3), (2, 3), (3, 3), (2, 4), (3, 2)])
def test_edges_match_reference(n, m):
    words, edges = sierpinski_edges(n, m)
    g = sierpinski_graph(n, m)
    assert sorted(g.edges) == sorted(edges)
    assert [index_to_word(r, n, m) for r in range(m**n)] == words


def test_path_for_m2():
    for n in range(1, 11):
        g = sierpinski_graph(n, 2)
        degrees = sorted(g.degree(v) for v in range(g.num_vertices))
        assert g.num_edges == 2**n - 1
        assert degrees == [1, 1] + [2] * (2**n - 2)


@given(small_nm, st.data())
def test_index_word_roundtrip(nm, data):
    n, m = nm
    r = data.draw(st.integers(0, m**n - 1))
    w = index_to_word(r, n, m)
    assert word_to_index(w, m) == r
    assert VertexWord(w, m).index == r


@given(small_nm, st.data())
def test_is_edge_agrees_with_neighbors(nm, data):
    n, m = nm
    spec = GraphSpec(SIERPINSKI, n, m)
    u = data.draw(st.integers(0, m**n - 1))
    nb = neighbors(VertexWord.from_index(u, n, m), spec)
    assert sorted(x.index for x in nb) == sorted(neighbor_indices(u, n, m))
    for v in range(m**n):
        if v != u:
            assert is_edge(index_to_word(u, n, m), index_to_word(v, n, m), spec) == (v in {x.index for x in nb})


@given(small_nm, st.data())
def test_embedding_adjacency(nm, data):
    """Adjacent iff the embedded points are at l1 distance 2 (l-inf distance 1)."""
    n, m = nm
    spec = GraphSpec(SIERPINSKI, n, m)
    u = data.draw(st.integers(0, m**n - 1))
    v = data.draw(st.integers(0, m**n - 1).filter(lambda x: x != u))
    yu = embed(VertexWord.from_index(u, n, m))
    yv = embed(VertexWord.from_index(v, n, m))
    diff = [a - b for a, b in zip(yu.coordinates, yv.coordinates)]
    assert sum(yu.coordinates) == 2**n - 1
    adjacent = is_edge(index_to_word(u, n, m), index_to_word(v, n, m), spec)
    assert adjacent == (sum(abs(d) for d in diff) == 2)
    assert adjacent == (max(abs(d) for d in diff) == 1)


def test_corners():
    spec = GraphSpec(SIERPINSKI, 3, 4)
    g = sierpinski_graph(3, 4)
    for i, c in enumerate(corner_vertices(spec)):
        assert c.index == corner_index(i, 3, 4)
        assert g.degree(c.index) == 3


def test_km_decomposition_partitions_vertices():
    spec = GraphSpec(SIERPINSKI, 3, 3)
    cliques = km_decomposition(spec)
    assert len(cliques) == 9
    flat = sorted(v.index for c in cliques for v in c)
    assert flat == list(range(27))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_quotient_matches_reference(n):
    nv, edges = gasket_edges(n)
    q = quotient_graph(n, 3)
    assert q.num_vertices == nv == (3**n + 3) // 2
    assert q.num_edges == len(edges) == 3**n
    assert sorted(sorted(q.degree(v) for v in range(nv))) == sorted(
        sum(1 for e in edges if v in e) for v in range(nv)
    )


def test_quotient_counts_formula():
    for n in range(1, 5):
        for m in range(3, 5):
            q = quotient_graph(n, m)
            assert (q.num_vertices, q.num_edges) == counts(GraphSpec(QUOTIENT, n, m))


def test_hamming_and_products():
    q3 = hamming_graph(3, 2)
    assert (q3.num_vertices, q3.num_edges) == (8, 12)
    k3k3 = cartesian_product(complete_graph(3), complete_graph(3))
    assert (k3k3.num_vertices, k3k3.num_edges) == (9, 18)
    assert (q3.num_vertices, q3.num_edges) == counts(GraphSpec(HAMMING, 3, 2))
    h = cartesian_product(complete_graph(2), hamming_graph(2, 2))
    assert sorted(map(len, h.adjacency)) == [3] * 8


def test_edge_list_roundtrip():
    g = sierpinski_graph(2, 3)
    header, edges = parse_edge_list(format_edge_list(g))
    assert header == {"family": "sierpinski", "n": "2", "m": "3"}
    assert len(edges) == 12
    assert ("00", "01") in edges


def test_parameter_errors():
    with pytest.raises(ParameterError):
        parse_word("013", 3, 3)
    with pytest.raises(ParameterError):
        GraphSpec("cycle", 2, 3)
    with pytest.raises(ParameterError):
        GraphSpec(QUOTIENT, 2, 2)
    with pytest.raises(ParameterError):
        is_edge((0, 0), (0, 0), GraphSpec(SIERPINSKI, 2, 3))


def test_nbr_masks_consistent():
    g = sierpinski_graph(3, 3)
    for u, mask in enumerate(g.nbr_masks):
        assert [v for v in range(27) if mask >> v & 1] == sorted(g.adjacency[u])
    assert isinstance(np.array(g.nbr_masks, dtype=np.uint64), np.ndarray)
