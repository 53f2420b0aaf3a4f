"""Steiner operations on S_{s,t}(n,m): stabilization, compression, subadditivation.

All operations take and return `VertexSet`s.  Compression and subadditivation
act on sections {h} x S(n-1, m), which are contiguous bit ranges of the mask
because the leading digit is the most significant.  Pass a list as ``trace``
to the fixed-point drivers to collect one JSON-ready record per application.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .eip import (
    DecoratedContext,
    PermutationOrder,
    VertexSet,
    corner_terms,
    cut_size,
    lex_prefix_masks,
)
from .errors import DefectError, ParameterError
from .graphs import (
    Graph,
    corner_index,
    index_to_word,
    neighbor_indices,
    word_to_index,
)
from .posets import lies_below_image, transpose_word


def _ctx(ctx: DecoratedContext | None, m: int) -> DecoratedContext:
    if ctx is None:
        return DecoratedContext.plain(m)
    if ctx.m != m:
        raise ParameterError(f"decoration is for m={ctx.m}, set has m={m}")
    return ctx


def _check_graph(S: VertexSet, graph: Graph | None) -> None:
    if graph is not None and (graph.family, graph.n, graph.m) != ("sierpinski", S.n, S.m):
        raise ParameterError("graph does not match the set's (n, m)")


@lru_cache(maxsize=64)
def _graph_tables(n: int, m: int):
    """Neighbour masks and the intra-section part of them for S(n,m)."""
    N = m**n
    size = m ** (n - 1)
    nbr, inner = [], []
    for r in range(N):
        nb = 0
        inn = 0
        for w in neighbor_indices(r, n, m):
            nb |= 1 << w
            if w // size == r // size:
                inn |= 1 << w
        nbr.append(nb)
        inner.append(inn)
    return tuple(nbr), tuple(inner)


@lru_cache(maxsize=64)
def _pair_table(n: int, m: int, i: int, j: int) -> tuple[tuple[int, int], ...]:
    """(lower, upper) index pairs swapped by the transposition (ij)."""
    out = []
    for r in range(m**n):
        v = index_to_word(r, n, m)
        if lies_below_image(v, i, j):
            out.append((r, word_to_index(transpose_word(v, i, j), m)))
    return tuple(out)


def section_vector(S: VertexSet) -> tuple[int, ...]:
    return S.section_vector


def boundary_parts(S: VertexSet, ctx: DecoratedContext | None = None) -> tuple[int, int, int]:
    """(interior, exterior, corner) cut counts; their sum is the decorated boundary.

    Interior edges stay inside one section, exterior edges join two sections,
    corner edges are the decoration's phantom edges.
    """
    if S.n < 2:
        raise ParameterError("sections need n >= 2")
    ctx = _ctx(ctx, S.m)
    nbr, inner = _graph_tables(S.n, S.m)
    out = ~S.mask
    interior = total = 0
    rest, v = S.mask, 0
    while rest:
        if rest & 1:
            total += bin(nbr[v] & out).count("1")
            interior += bin(inner[v] & out).count("1")
        rest >>= 1
        v += 1
    return interior, total - interior, corner_terms(S.mask, S.n, S.m, ctx)


def decorated_cut(S: VertexSet, ctx: DecoratedContext | None = None) -> int:
    nbr, _ = _graph_tables(S.n, S.m)
    return cut_size(S.mask, nbr) + corner_terms(S.mask, S.n, S.m, _ctx(ctx, S.m))


# --- stabilization -----------------------------------------------------------


def stabilize(S: VertexSet, i: int, j: int, graph: Graph | None = None, ctx: DecoratedContext | None = None) -> VertexSet:
    """Stab_ij: move every lone upper member of a pair {v, (ij)v} to its lower partner.

    The lower member is the one with y_i > y_j.  The decoration does not
    enter: corners i^n and j^n form a pair like any other, and the result never
    increases the decorated boundary because I precedes J precedes K.
    """
    if not 0 <= i < j < S.m:
        raise ParameterError(f"need 0 <= i < j < m (got i={i}, j={j})")
    _check_graph(S, graph)
    _ctx(ctx, S.m)
    mask = S.mask
    for lo, hi in _pair_table(S.n, S.m, i, j):
        if mask >> hi & 1 and not mask >> lo & 1:
            mask ^= (1 << hi) | (1 << lo)
    return VertexSet(S.n, S.m, mask)


def transposition_cycle(m: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(m) for j in range(i + 1, m)]


def stabilize_fix(
    S: VertexSet,
    graph: Graph | None = None,
    ctx: DecoratedContext | None = None,
    *,
    trace: list | None = None,
    return_cycles: bool = False,
):
    """Stab_inf: apply all Stab_ij (pairs ascending) until a full cycle changes nothing."""
    cap = S.m**S.n * len(transposition_cycle(S.m)) + 2
    cur = S
    for cycle in range(1, cap + 1):
        changed = False
        for i, j in transposition_cycle(S.m):
            nxt = stabilize(cur, i, j, graph, ctx)
            if trace is not None:
                trace.append(_record(f"stab_{i}{j}", nxt, ctx))
            if nxt.mask != cur.mask:
                changed = True
            cur = nxt
        if not changed:
            return (cur, cycle) if return_cycles else cur
    raise DefectError(f"stabilization did not settle within {cap} cycles")


def is_stable(S: VertexSet) -> bool:
    return all(stabilize(S, i, j).mask == S.mask for i, j in transposition_cycle(S.m))


# --- compression -------------------------------------------------------------


@dataclass(frozen=True)
class SectionOrderContext:
    """Digit classes I_h, J_h, K_h seen from section h, and the order they induce."""

    h: int
    I: tuple[int, ...]  # noqa: E741
    J: tuple[int, ...]
    K: tuple[int, ...]

    @property
    def order(self) -> PermutationOrder:
        return PermutationOrder(self.I + self.J + self.K)


def section_context(S: VertexSet, h: int, ctx: DecoratedContext | None = None) -> SectionOrderContext:
    """I_h holds the digits i != h whose neighbouring corner i h^n lies in S
    (plus h itself if h is in I); K_h those whose corner lies outside (plus h
    if h is in K); J_h is the rest."""
    m = S.m
    if S.n < 2:
        raise ParameterError("sections need n >= 2")
    if not 0 <= h < m:
        raise ParameterError(f"section h={h} outside [0, {m})")
    ctx = _ctx(ctx, m)
    depth = S.n - 1
    size = m**depth
    I, J, K = [], [], []
    for i in range(m):
        if i == h:
            {"I": I, "J": J, "K": K}[ctx.side(h)].append(h)
        elif S.mask >> (i * size + corner_index(h, depth, m)) & 1:
            I.append(i)
        else:
            K.append(i)
    return SectionOrderContext(h, tuple(I), tuple(J), tuple(K))


def compress(S: VertexSet, h: int, graph: Graph | None = None, ctx: DecoratedContext | None = None) -> VertexSet:
    """Comp_{Lex_h}: replace section h by the initial segment of Lex_h of the same size."""
    _check_graph(S, graph)
    sc = section_context(S, h, ctx)
    depth = S.n - 1
    size = S.m**depth
    block = ((1 << size) - 1) << (h * size)
    ell_h = bin(S.mask & block).count("1")
    seg = lex_prefix_masks(sc.order.sequence, depth)[ell_h] << (h * size)
    return VertexSet(S.n, S.m, (S.mask & ~block) | seg)


def compress_fix(
    S: VertexSet,
    graph: Graph | None = None,
    ctx: DecoratedContext | None = None,
    *,
    trace: list | None = None,
    return_cycles: bool = False,
    max_cycles: int | None = None,
):
    """Comp_inf: cycle Comp_{Lex_h}, h = 0..m-1, until a full cycle changes nothing.

    The cycle count includes the final unchanged cycle.  The bound
    1 + m * rho(S) on changing cycles holds on S(2,m) but not on S(3,3) (for
    example {021, 101} with every corner in K needs two at rho = 0), so the
    default cap is only a termination guard; exceeding it raises DefectError.
    """
    if max_cycles is None:
        max_cycles = 2 + S.m * (potentials(S, ctx).rho + S.m**S.n)
    cur = S
    for cycle in range(1, max_cycles + 1):
        changed = False
        for h in range(S.m):
            nxt = compress(cur, h, graph, ctx)
            if trace is not None:
                trace.append(_record(f"comp_{h}", nxt, ctx))
            if nxt.mask != cur.mask:
                changed = True
            cur = nxt
        if not changed:
            return (cur, cycle) if return_cycles else cur
    raise DefectError(f"compression did not settle within {max_cycles} cycles")


def is_compressed(S: VertexSet, ctx: DecoratedContext | None = None) -> bool:
    return all(compress(S, h, None, ctx).mask == S.mask for h in range(S.m))


# --- potentials --------------------------------------------------------------


@dataclass(frozen=True)
class Potentials:
    tau: int
    rho: int


def potentials(S: VertexSet, ctx: DecoratedContext | None = None) -> Potentials:
    """tau and rho summed over the corners i j^n of every section i.

    A corner i j^n scores when j is in I_i but the corner is outside S
    (rho weight m - j) or j is in K_i and the corner is inside S (rho weight j).
    For j != i this is a cut exterior edge seen from section i, so every cut
    edge between two sections is counted once from each side.
    """
    m = S.m
    depth = S.n - 1
    size = m**depth
    tau = rho = 0
    for i in range(m):
        sc = section_context(S, i, ctx)
        for j in range(m):
            inside = bool(S.mask >> (i * size + corner_index(j, depth, m)) & 1)
            if j in sc.I and not inside:
                tau += 1
                rho += m - j
            elif j in sc.K and inside:
                tau += 1
                rho += j
    return Potentials(tau, rho)


def rho(S: VertexSet, ctx: DecoratedContext | None = None) -> int:
    return potentials(S, ctx).rho


def tau(S: VertexSet, ctx: DecoratedContext | None = None) -> int:
    return potentials(S, ctx).tau


# --- subadditivation ---------------------------------------------------------


@dataclass(frozen=True)
class SubAddResult:
    """Output of one subadditivation with its boundary bookkeeping.

    ``delta_*`` are (after - before) for interior, exterior and corner edges.
    ``identity`` is set when h_min >= h_max and nothing was merged.
    """

    result: VertexSet
    identity: bool
    h_min: int | None
    h_max: int | None
    delta_interior: int
    delta_exterior: int
    delta_corner: int

    @property
    def delta(self) -> int:
        return self.delta_interior + self.delta_exterior + self.delta_corner


def subadd_step(S: VertexSet, ctx: DecoratedContext | None = None, *, check: bool = True) -> SubAddResult:
    """Merge the first non-full section h_min with the last non-empty one h_max.

    If l_min + l_max <= m^n section h_min receives the first l_min + l_max
    vertices of Lex_{h_min} and h_max is emptied; otherwise h_min is filled and
    h_max keeps the first l_min + l_max - m^n vertices of Lex_{h_max}.  Both
    orders are read off the input set.
    """
    ctx = _ctx(ctx, S.m)
    if check and not (is_stable(S) and is_compressed(S, ctx)):
        raise ParameterError("subadditivation needs a stable, compressed set")
    m = S.m
    depth = S.n - 1
    size = m**depth
    ells = S.section_vector
    lows = [h for h in range(m) if ells[h] < size]
    highs = [h for h in range(m) if ells[h] > 0]
    h_min = min(lows) if lows else None
    h_max = max(highs) if highs else None
    if h_min is None or h_max is None or h_min >= h_max:
        return SubAddResult(S, True, h_min, h_max, 0, 0, 0)
    pi_min = section_context(S, h_min, ctx).order.sequence
    pi_max = section_context(S, h_max, ctx).order.sequence
    full = (1 << size) - 1
    mask = S.mask & ~(full << (h_min * size)) & ~(full << (h_max * size))
    total = ells[h_min] + ells[h_max]
    if total <= size:
        mask |= lex_prefix_masks(pi_min, depth)[total] << (h_min * size)
    else:
        mask |= full << (h_min * size)
        mask |= lex_prefix_masks(pi_max, depth)[total - size] << (h_max * size)
    out = VertexSet(S.n, m, mask)
    b0 = boundary_parts(S, ctx)
    b1 = boundary_parts(out, ctx)
    return SubAddResult(out, False, h_min, h_max, b1[0] - b0[0], b1[1] - b0[1], b1[2] - b0[2])


def subadditivate(S: VertexSet, graph: Graph | None = None, ctx: DecoratedContext | None = None, *, check: bool = True) -> VertexSet:
    _check_graph(S, graph)
    return subadd_step(S, ctx, check=check).result


# --- product compression -----------------------------------------------------


def _check_numbering(eta: Sequence[int], size: int) -> list[int]:
    eta = [int(a) for a in eta]
    if sorted(eta) != list(range(size)):
        raise ParameterError("eta must list every vertex of G exactly once")
    return eta


def fibre_sizes(mask: int, ng: int, nh: int) -> list[int]:
    full = (1 << ng) - 1
    return [bin(mask >> (w * ng) & full).count("1") for w in range(nh)]


def product_compress(S: int, G: Graph, H: Graph, eta: Sequence[int]) -> int:
    """Comp_{eta, GxH}: fill each fibre G x {w} with the first l_w vertices of eta.

    Masks use the `graphs.cartesian_product` layout (index w * |G| + a).
    """
    ng, nh = G.num_vertices, H.num_vertices
    eta = _check_numbering(eta, ng)
    if S < 0 or S >> (ng * nh):
        raise ParameterError("set has bits outside G x H")
    prefix = [0]
    for a in eta:
        prefix.append(prefix[-1] | 1 << a)
    out = 0
    for w, ell in enumerate(fibre_sizes(S, ng, nh)):
        out |= prefix[ell] << (w * ng)
    return out


def product_lower_bound(S: int, g_profile: Sequence[int], H: Graph) -> int:
    """sum_w profile_G(l_w) + sum over edges {w1, w2} of H of |l_w1 - l_w2|."""
    ng = len(g_profile) - 1
    ells = fibre_sizes(S, ng, H.num_vertices)
    return sum(g_profile[x] for x in ells) + sum(abs(ells[a] - ells[b]) for a, b in H.edges)


# --- tracing -----------------------------------------------------------------


def _record(op: str, S: VertexSet, ctx: DecoratedContext | None) -> dict:
    rec = {"op": op, "mask": S.mask, "ell": list(S.section_vector), "boundary": decorated_cut(S, ctx)}
    if S.n >= 2:
        p = potentials(S, ctx)
        rec["rho"] = p.rho
        rec["tau"] = p.tau
    return rec


def trace_lines(trace: list[dict]) -> str:
    """JSON-lines rendering of a trace list."""
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in trace)
