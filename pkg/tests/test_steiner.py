import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sierpinski_eip.eip import (
    DecoratedContext,
    VertexSet,
    boundary,
    cut_size,
    decorated_boundary,
    lex_profile_table,
    lex_segment,
)
from sierpinski_eip.errors import ParameterError
from sierpinski_eip.graphs import cartesian_product, complete_graph, hamming_graph
from sierpinski_eip.oracle import exact_profile
from sierpinski_eip.steiner import (
    boundary_parts,
    compress,
    compress_fix,
    fibre_sizes,
    is_compressed,
    is_stable,
    potentials,
    product_compress,
    product_lower_bound,
    section_context,
    stabilize,
    stabilize_fix,
    subadd_step,
    subadditivate,
    trace_lines,
)

CTX3 = DecoratedContext.all_pairs(3)
masks_23 = st.integers(0, (1 << 9) - 1)
masks_33 = st.integers(0, (1 << 27) - 1)


def words(S):
    return sorted(str(w) for w in S.members)


@given(masks_33, st.sampled_from([(0, 1), (0, 2), (1, 2)]), st.sampled_from(CTX3))
def test_stabilize_is_steiner(mask, ij, ctx):
    S = VertexSet(3, 3, mask)
    T = stabilize(S, *ij)
    assert T.cardinality == S.cardinality
    assert decorated_boundary(T, None, ctx) <= decorated_boundary(S, None, ctx)


@given(masks_33, masks_33, st.sampled_from([(0, 1), (0, 2), (1, 2)]))
def test_stabilize_monotone(a, b, ij):
    S, T = VertexSet(3, 3, a & b), VertexSet(3, 3, a)
    assert stabilize(S, *ij).issubset(stabilize(T, *ij))


@given(masks_33, st.sampled_from(CTX3))
def test_stabilize_fix_is_stable(mask, ctx):
    S = VertexSet(3, 3, mask)
    T, cycles = stabilize_fix(S, return_cycles=True)
    assert is_stable(T) and cycles >= 1
    assert decorated_boundary(T, None, ctx) <= decorated_boundary(S, None, ctx)


@given(masks_33, st.integers(0, 2), st.sampled_from(CTX3))
def test_compress_is_nonmonotone_steiner(mask, h, ctx):
    S = VertexSet(3, 3, mask)
    T = compress(S, h, None, ctx)
    assert T.cardinality == S.cardinality
    assert T.section_vector == S.section_vector
    assert decorated_boundary(T, None, ctx) <= decorated_boundary(S, None, ctx)


def test_example11_nonmonotone():
    # [PAPER] Comp_{Lex_0}({01^n}) = {0^(n+1)} while {01^n, 10^n} is fixed
    for n in (1, 2, 3):
        for m in (2, 3, 4):
            small = VertexSet.from_words(["0" + "1" * n], n + 1, m)
            big = VertexSet.from_words(["0" + "1" * n, "1" + "0" * n], n + 1, m)
            assert words(compress(small, 0)) == ["0" * (n + 1)]
            assert compress(big, 0) == big
            assert small.issubset(big)
            assert not compress(small, 0).issubset(compress(big, 0))


@given(masks_23, st.sampled_from(CTX3))
def test_compress_fix_bound_s23(mask, ctx):
    S = VertexSet(2, 3, mask)
    rho = potentials(S, ctx).rho
    T, cycles = compress_fix(S, None, ctx, return_cycles=True)
    # the returned count includes the last, unchanged cycle
    assert cycles - 1 <= 1 + 3 * rho
    assert is_compressed(T, ctx)


@given(masks_33, st.sampled_from(CTX3))
def test_compress_fix_converges_s33(mask, ctx):
    S = VertexSet(3, 3, mask)
    T, cycles = compress_fix(S, None, ctx, return_cycles=True)
    assert is_compressed(T, ctx) and cycles <= 5
    assert decorated_boundary(T, None, ctx) <= decorated_boundary(S, None, ctx)


def test_cycle_bound_fails_on_s33():
    """rho can rise mid-cycle, so 1 + m rho(S) changing cycles is not enough."""
    ctx = DecoratedContext(0, 0, 3)
    S = VertexSet.from_words(["021", "101"], 3, 3)
    assert potentials(S, ctx).rho == 0
    T, cycles = compress_fix(S, None, ctx, return_cycles=True)
    assert cycles - 1 == 2
    assert words(T) == ["011", "100"]


def test_section_context():
    S = VertexSet.from_words(["01", "10"], 2, 3)
    sc = section_context(S, 0)
    assert (sc.I, sc.J, sc.K) == ((1,), (0,), (2,))
    assert sc.order.sequence == (1, 0, 2)
    with pytest.raises(ParameterError):
        section_context(VertexSet(1, 3, 1), 0)


def test_potentials_small():
    # all corners in K: {11} scores its own corner 11 with weight 1
    ctx = DecoratedContext(0, 0, 3)
    p = potentials(VertexSet.from_words(["11"], 2, 3), ctx)
    assert (p.rho, p.tau) == (1, 1)


def test_lemma1_literal_counterexample():
    """Compressing one section can raise rho: the other sections' I_i change."""
    ctx = DecoratedContext(0, 0, 3)
    S = VertexSet.from_words(["11"], 2, 3)
    T = compress(S, 1, None, ctx)
    assert words(T) == ["10"]
    assert potentials(T, ctx).rho > potentials(S, ctx).rho


def test_lemma2_literal_counterexample():
    """h-compressed S whose stabilization keeps l but is not h-compressed."""
    ctx = DecoratedContext.plain(3)
    S = VertexSet.from_words(["02", "11"], 2, 3)
    assert compress(S, 1, None, ctx) == S
    T = stabilize(S, 1, 2)
    assert words(T) == ["01", "11"]
    assert T.section_vector == S.section_vector
    C = compress(T, 1, None, ctx)
    assert C != T
    assert words(C) == ["01", "10"]
    assert (boundary(C), boundary(T)) == (4, 5)


def test_subadd_examples():
    plain = DecoratedContext.plain(3)
    S = VertexSet.from_words(["00", "01", "02", "10", "20"], 2, 3)
    assert is_stable(S) and is_compressed(S, plain)
    r = subadd_step(S, plain)
    assert not r.identity and (r.h_min, r.h_max) == (1, 2)
    assert words(r.result) == ["00", "01", "02", "10", "11"]
    assert r.delta == -1
    lex = lex_segment(4, m=3, n=2)
    assert subadd_step(lex, plain).identity
    with pytest.raises(ParameterError):
        subadd_step(VertexSet.from_words(["22"], 2, 3))


@given(masks_23, st.sampled_from(CTX3))
def test_subadd_on_stable_compressed(mask, ctx):
    S = VertexSet(2, 3, mask)
    if not (is_stable(S) and is_compressed(S, ctx)):
        return
    r = subadd_step(S, ctx)
    assert r.result.cardinality == S.cardinality
    parts = boundary_parts(r.result, ctx)
    before = boundary_parts(S, ctx)
    assert r.delta == sum(parts) - sum(before)
    assert decorated_boundary(subadditivate(S, None, ctx), None, ctx) <= decorated_boundary(S, None, ctx)


def test_trace_records():
    trace = []
    S = VertexSet.from_words(["22", "12"], 2, 3)
    stabilize_fix(S, trace=trace)
    compress_fix(S, trace=trace)
    text = trace_lines(trace)
    assert text.count("\n") == len(trace) > 0
    assert '"op": "stab_01"' in text


def test_stabilized_lex_is_fixed():
    for ell in range(10):
        S = lex_segment(ell, m=3, n=2)
        assert is_stable(S)
        assert is_compressed(S, DecoratedContext.plain(3))
    assert [boundary(lex_segment(ell, m=3, n=2)) for ell in range(10)] == lex_profile_table(2, 3)


# --- product compression ---


@pytest.mark.parametrize(
    "G,H",
    [
        (complete_graph(3), complete_graph(3)),
        (complete_graph(2), hamming_graph(2, 2)),
        (hamming_graph(2, 2), complete_graph(2)),
    ],
)
def test_product_compression(G, H):
    P = cartesian_product(G, H)
    prof = exact_profile(G).values
    eta = {3: [0, 1, 2], 2: [0, 1], 4: [0, 1, 3, 2]}[G.num_vertices]
    rng = random.Random(20260)
    for _ in range(500):
        S = rng.getrandbits(P.num_vertices)
        C = product_compress(S, G, H, eta)
        assert bin(C).count("1") == bin(S).count("1")
        assert fibre_sizes(C, G.num_vertices, H.num_vertices) == fibre_sizes(S, G.num_vertices, H.num_vertices)
        assert cut_size(C, P.nbr_masks) <= cut_size(S, P.nbr_masks)
        assert product_lower_bound(S, prof, H) <= cut_size(S, P.nbr_masks)


def test_product_compress_rejects_bad_numbering():
    with pytest.raises(ParameterError):
        product_compress(1, complete_graph(3), complete_graph(3), [0, 0, 1])
