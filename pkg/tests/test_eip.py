import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from reference import cut, sierpinski_edges
from reference import lex_profile as ref_lex_profile

from sierpinski_eip.eip import (
    OMEGA,
    PRINTED_CONVENTION,
    RESOLVED_CONVENTION,
    ClosedFormConvention,
    DecoratedContext,
    PermutationOrder,
    ProfileTable,
    VertexSet,
    boundary,
    decorated_boundary,
    eta_inverse,
    lambda_at,
    lambda_triadic,
    lex_order_indices,
    lex_profile,
    lex_profile_direct,
    lex_profile_table,
    lex_segment,
    profile_closed_form,
    profile_recursive_m3,
    resolve_closed_form_convention,
    scaled_lex_point,
    ternary_digits,
    theta0,
    theta1,
)
from sierpinski_eip.errors import ParameterError
from sierpinski_eip.graphs import sierpinski_graph

# [DERIVED] tests/reference.py, brute force over the adjacency rule
LEX_33 = [0, 2, 3, 2, 3, 4, 3, 4, 3, 2, 3, 4, 3, 4, 4, 3, 4, 3, 2, 3, 4, 3, 4, 3, 2, 3, 2, 0]
LEX_24 = [0, 3, 5, 5, 3, 5, 6, 6, 4, 6, 6, 5, 3, 5, 5, 3, 0]
LEX_23 = [0, 2, 3, 2, 3, 3, 2, 3, 2, 0]


def test_frozen_profiles():
    assert lex_profile_table(3, 3) == LEX_33
    assert lex_profile_table(2, 4) == LEX_24
    assert lex_profile_table(2, 3) == LEX_23


@pytest.mark.parametrize("n,m", [(2, 3), (3, 3), (2, 4), (3, 2)])
def test_profiles_against_reference(n, m):
    assert lex_profile_table(n, m) == ref_lex_profile(n, m)


def test_small_values():
    # [PAPER] f(1, m; l) = l (m - l) on K_m
    for m in range(2, 6):
        assert lex_profile_table(1, m) == [ell * (m - ell) for ell in range(m + 1)]
    assert profile_recursive_m3(1, 1).theta == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_triple_agreement_m3(n):
    table = lex_profile_table(n, 3)
    for ell in range(3**n + 1):
        assert profile_recursive_m3(n, ell).theta == table[ell] == profile_closed_form(n, 3, ell)
    assert lex_profile_direct(n, 3, 3**n // 2) == table[3**n // 2]


@given(st.integers(1, 4), st.integers(2, 5), st.data())
def test_closed_form_general_m(n, m, data):
    ell = data.draw(st.integers(0, m**n))
    assert profile_closed_form(n, m, ell) == lex_profile_direct(n, m, ell)


def test_convention_resolution():
    good = resolve_closed_form_convention(4, 4)
    assert RESOLVED_CONVENTION in good
    assert PRINTED_CONVENTION not in good
    assert all(c.correction == "self-corner" for c in good)
    assert ClosedFormConvention("strict", "natural", "self-corner", "ell") in good
    # the printed level term over-counts at S(2,3), l = 3
    assert profile_closed_form(2, 3, 3, PRINTED_CONVENTION) == 4
    assert lex_profile_direct(2, 3, 3) == 2


def test_theta_split():
    assert [theta0(2, x) for x in range(10)] == [0, 1, 2, 2, 2, 2, 2, 2, 1, 0]
    for x in range(28):
        v = profile_recursive_m3(3, x)
        assert v.theta == v.theta0 + v.theta1
        assert v.theta1 == theta1(3, x)


def test_symmetry():
    for n, m in [(3, 3), (2, 4), (2, 5), (4, 3)]:
        t = lex_profile_table(n, m)
        assert t == t[::-1]


def test_profile_table_csv():
    t = lex_profile(3, 3)
    text = t.to_csv()
    lines = text.split("\n")
    assert lines[0] == "ell,theta,theta0,theta1"
    assert len(lines) == 30 and lines[-1] == ""
    assert t.is_symmetric() and t.size == 27
    assert "\r" not in text
    plain = ProfileTable(2, 4, LEX_24)
    assert plain.to_csv().startswith("ell,theta\n0,0\n1,3\n")


def test_vertex_set_basics():
    S = VertexSet.from_words(["02", "11"], 2, 3)
    assert S.cardinality == 2
    assert S.indices == (2, 4)
    assert S.section_vector == (1, 1, 0)
    assert "02" in [str(w) for w in S.members]
    assert S.complement().cardinality == 7
    assert boundary(S) == 5
    with pytest.raises(ParameterError):
        VertexSet(2, 3, 1 << 9)


@given(st.integers(0, (1 << 9) - 1))
def test_boundary_against_reference(mask):
    _, edges = sierpinski_edges(2, 3)
    S = VertexSet(2, 3, mask)
    assert boundary(S) == cut({v for v in range(9) if mask >> v & 1}, edges)
    assert boundary(S) == boundary(S.complement())


def test_boundary_with_edges():
    S = lex_segment(3, m=3, n=2)
    value, edges = boundary(S, sierpinski_graph(2, 3), with_edges=True)
    assert value == len(edges) == 2


@given(st.integers(0, (1 << 9) - 1), st.sampled_from(DecoratedContext.all_pairs(3)))
def test_decorated_boundary_counts_corner_edges(mask, ctx):
    S = VertexSet(2, 3, mask)
    extra = 0
    for i in ctx.I:
        extra += not mask >> (4 * i) & 1
    for i in ctx.K:
        extra += bool(mask >> (4 * i) & 1)
    assert decorated_boundary(S, None, ctx) == boundary(S) + extra


def test_decorated_context_validation():
    assert len(DecoratedContext.all_pairs(3)) == 10
    assert len(DecoratedContext.all_pairs(4)) == 15
    ctx = DecoratedContext(1, 1, 3)
    assert (ctx.I, ctx.J, ctx.K) == ((0,), (1,), (2,))
    with pytest.raises(ParameterError):
        DecoratedContext(2, 2, 3)


def test_permutation_orders():
    pi = PermutationOrder((2, 0, 1))
    assert pi.rank(2) == 0 and pi.rank(1) == 2
    assert pi.swap(0, 2).sequence == (0, 2, 1)
    seg = lex_segment(4, pi, n=2)
    assert {str(w) for w in seg.members} == {"22", "20", "21", "02"}
    assert lex_order_indices((0, 1, 2), 2) == tuple(range(9))


# --- continuous limit ---


def test_eta_inverse_examples():
    # [PAPER] worked examples of the limiting map
    assert eta_inverse(Fraction(1, 3)) == (Fraction(1, 2), 0, Fraction(1, 2))
    assert eta_inverse(Fraction(1, 2)) == (0, 1, 0)
    assert eta_inverse(Fraction(1, 6)) == (Fraction(1, 2), Fraction(1, 2), 0)
    assert eta_inverse("1/3") == eta_inverse(Fraction(1, 3))


def test_ternary_expansion():
    assert ternary_digits(Fraction(1, 3)) == ([0], [2])
    assert ternary_digits(Fraction(1, 2)) == ([], [1])
    assert ternary_digits(1) == ([], [2])
    assert ternary_digits(0) == ([], [0])


@pytest.mark.parametrize("n", range(1, 11))
def test_eta_inverse_matches_scaled_lex_points(n):
    # exhaustive up to n = 7, a fixed sample of 3000 points beyond
    ells = range(1, 3**n + 1) if n <= 7 else random.Random(n).sample(range(1, 3**n + 1), 3000)
    for ell in ells:
        y = scaled_lex_point(ell, n)
        corr = (0, 0, Fraction(1, 2**n))
        assert eta_inverse(Fraction(ell, 3**n)) == tuple(a + b for a, b in zip(y, corr))


def test_lambda_values():
    for n in range(1, 6):
        table = lex_profile_table(n, 3)
        for ell in range(3**n + 1):
            assert lambda_triadic(ell, n) == table[ell]
            assert lambda_at(Fraction(ell, 3**n)) == table[ell]
    assert lambda_at(Fraction(1, 2)) is OMEGA
    assert lambda_at(0) == 0 and lambda_at(1) == 0
    with pytest.raises(ParameterError):
        lambda_at(0.5)
    with pytest.raises(ParameterError):
        lambda_at(Fraction(4, 3))


@given(st.integers(1, 6), st.data())
def test_lambda_scale_invariance(n, data):
    ell = data.draw(st.integers(0, 3**n))
    assert lambda_triadic(ell, n) == lambda_triadic(3 * ell, n + 1)
