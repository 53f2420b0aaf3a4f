"""Pure-Python/numpy fallback for the subset sweep.

Instead of walking a Gray code this evaluates whole blocks of masks at once:
with the vertices split into low bits [0, L) and high bits [L, nv), the cost of
``(p << L) | low`` is

    const(p) + lowtab[low] + sum_u w_u(p) * bit_u(low)

where lowtab holds the unary terms and edges inside the low part, and each
edge from a low vertex u to a high vertex v contributes ``bit_u`` if v is out
of the mask or ``1 - bit_u`` if it is in.  Results match the compiled kernel
exactly, including tie-breaking toward the smallest mask.
"""

from __future__ import annotations

import numpy as np

INT64_MAX = np.iinfo(np.int64).max


def _doubling(weights) -> np.ndarray:
    """sum_u weights[u] * bit_u(low) for every low in [0, 2^len(weights))."""
    out = np.zeros(1, dtype=np.int64)
    for w in weights:
        out = np.concatenate((out, out + int(w)))
    return out


def _low_table(nbr, unary, low_bits):
    tab = _doubling(unary[:low_bits])
    lows = np.arange(1 << low_bits, dtype=np.int64)
    for u in range(low_bits):
        m = int(nbr[u])
        for v in range(u + 1, low_bits):
            if m >> v & 1:
                tab += ((lows >> u) ^ (lows >> v)) & 1
    return tab


def sweep_range(nbr, unary, low_bits, prefixes):
    nbr = [int(x) for x in nbr]
    unary = np.asarray(unary, dtype=np.int64)
    nv = len(nbr)
    if nv > 63 or not 0 <= low_bits <= nv:
        raise ValueError("need low_bits <= nv <= 63")
    best = np.full(nv + 1, INT64_MAX, dtype=np.int64)
    witness = np.zeros(nv + 1, dtype=np.uint64)

    tab = _low_table(nbr, unary, low_bits)
    pc = _doubling([1] * low_bits)
    order = np.argsort(pc, kind="stable")
    sorted_pc = pc[order]
    starts = np.searchsorted(sorted_pc, np.arange(low_bits + 2))
    low_mask = (1 << low_bits) - 1

    for p in prefixes:
        p = int(p)
        full_hi = p << low_bits
        const = 0
        for v in range(low_bits, nv):
            if full_hi >> v & 1:
                const += int(unary[v])
                # edges inside the high part, each counted once from its lower end
                const += bin(nbr[v] & ~full_hi & ~low_mask & ~((1 << (v + 1)) - 1)).count("1")
            else:
                const += bin(nbr[v] & full_hi & ~((1 << (v + 1)) - 1)).count("1")
        w = []
        for u in range(low_bits):
            hi_nb = nbr[u] & ~low_mask
            inside = bin(hi_nb & full_hi).count("1")
            outside = bin(hi_nb).count("1") - inside
            const += inside
            w.append(outside - inside)
        cost = tab + _doubling(w) + const
        sorted_cost = cost[order]
        base_pc = bin(p).count("1")
        for k in range(low_bits + 1):
            s, e = starts[k], starts[k + 1]
            if s == e:
                continue
            j = int(np.argmin(sorted_cost[s:e]))
            c = int(sorted_cost[s + j])
            mask = full_hi | int(order[s + j])
            slot = base_pc + k
            if c < best[slot] or (c == best[slot] and mask < int(witness[slot])):
                best[slot] = c
                witness[slot] = mask
    return best, witness


def gray_checkpoints(nbr, unary, nbits, checkpoints):
    """Plain-loop Gray walk; slow, meant for small checks only."""
    nbr = [int(x) for x in nbr]
    unary = [int(x) for x in unary]
    deg = [bin(x).count("1") for x in nbr]
    cps = [int(c) for c in checkpoints]
    masks = np.zeros(len(cps), dtype=np.uint64)
    costs = np.zeros(len(cps), dtype=np.int64)
    k = 0
    mask = cost = 0
    while k < len(cps) and cps[k] == 0:
        k += 1
    for i in range(1, 1 << nbits):
        if k >= len(cps):
            break
        v = (i & -i).bit_length() - 1
        d = deg[v] - 2 * bin(nbr[v] & mask).count("1") + unary[v]
        cost += -d if mask >> v & 1 else d
        mask ^= 1 << v
        while k < len(cps) and cps[k] == i:
            masks[k] = mask
            costs[k] = cost
            k += 1
    return masks, costs
