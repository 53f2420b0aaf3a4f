"""Vectorized Steiner operations over arrays of vertex masks.

The exhaustive suites apply every operation to all 2^16 subsets of S(2,4)
under 15 decorations; doing that one set at a time is too slow, so this module
evaluates the same maps on numpy uint64 arrays.  The scalar functions in
`steiner` remain the reference and the tests cross-check the two.
"""

from __future__ import annotations

import numpy as np

from .eip import DecoratedContext, lex_prefix_masks
from .errors import DefectError, ParameterError
from .graphs import corner_index, neighbor_indices
from .steiner import _pair_table, transposition_cycle

U64 = np.uint64
ONE = U64(1)


def bit(arr: np.ndarray, v: int) -> np.ndarray:
    return (arr >> U64(v)) & ONE


def all_masks(nv: int) -> np.ndarray:
    return np.arange(1 << nv, dtype=np.uint64)


class BatchEngine:
    """Operations on S_{s,t}(n,m) for many masks at once (m^n <= 63)."""

    def __init__(self, n: int, m: int, ctx: DecoratedContext | None = None):
        if n < 2:
            raise ParameterError("sections need n >= 2")
        if m**n > 63:
            raise ParameterError("batch masks hold at most 63 vertices")
        self.n, self.m = n, m
        self.ctx = DecoratedContext.plain(m) if ctx is None else ctx
        if self.ctx.m != m:
            raise ParameterError("decoration and m disagree")
        self.N = m**n
        self.depth = n - 1
        self.size = m**self.depth
        self.edges_in, self.edges_out = [], []
        for u in range(self.N):
            for w in neighbor_indices(u, n, m):
                if u < w:
                    (self.edges_in if u // self.size == w // self.size else self.edges_out).append((u, w))
        self.pairs = {ij: _pair_table(n, m, *ij) for ij in transposition_cycle(m)}
        # corner of section h adjacent to section i: the word i h^depth
        self.corner_pos = [[i * self.size + corner_index(h, self.depth, m) for i in range(m)] for h in range(m)]
        self.others = [[i for i in range(m) if i != h] for h in range(m)]
        self._build_tables()

    def _order(self, h: int, key: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        I, J, K = [], [], []
        for k, i in enumerate(self.others[h]):
            (I if key >> k & 1 else K).append(i)
        side = self.ctx.side(h)
        {"I": I, "J": J, "K": K}[side].append(h)
        return tuple(sorted(I)), tuple(J), tuple(sorted(K))

    def _build_tables(self):
        m, size = self.m, self.size
        nkeys = 1 << (m - 1)
        self.segtab = []
        self.pottab = []  # per section: (rho, tau) indexed by [key, own corner bits]
        for h in range(m):
            seg = np.zeros((nkeys, size + 1), dtype=np.uint64)
            rho = np.zeros((nkeys, 1 << m), dtype=np.int64)
            tau = np.zeros((nkeys, 1 << m), dtype=np.int64)
            for key in range(nkeys):
                I, J, K = self._order(h, key)
                pref = lex_prefix_masks(I + J + K, self.depth)
                seg[key] = np.array([p << (h * size) for p in pref], dtype=np.uint64)
                for own in range(1 << m):
                    r = t = 0
                    for j in range(m):
                        inside = own >> j & 1
                        if j in I and not inside:
                            r += m - j
                            t += 1
                        elif j in K and inside:
                            r += j
                            t += 1
                    rho[key, own] = r
                    tau[key, own] = t
            self.segtab.append(seg)
            self.pottab.append((rho, tau))
        self.block = [U64(((1 << size) - 1) << (h * size)) for h in range(m)]

    # --- evaluation ---

    def _cut(self, arr, edges):
        out = np.zeros(arr.shape, dtype=np.int64)
        for u, w in edges:
            out += (((arr >> U64(u)) ^ (arr >> U64(w))) & ONE).astype(np.int64)
        return out

    def corner(self, arr):
        out = np.zeros(arr.shape, dtype=np.int64)
        for i in self.ctx.I:
            out += 1 - bit(arr, corner_index(i, self.n, self.m)).astype(np.int64)
        for i in self.ctx.K:
            out += bit(arr, corner_index(i, self.n, self.m)).astype(np.int64)
        return out

    def parts(self, arr):
        return self._cut(arr, self.edges_in), self._cut(arr, self.edges_out), self.corner(arr)

    def boundary(self, arr):
        a, b, c = self.parts(arr)
        return a + b + c

    def sections(self, arr):
        return np.stack([np.bitwise_count(arr & self.block[h]).astype(np.int64) for h in range(self.m)])

    # --- stabilization ---

    def stab(self, arr, i, j):
        out = arr.copy()
        for lo, hi in self.pairs[(i, j)]:
            move = bit(out, hi) & (ONE - bit(out, lo))
            out ^= move * U64((1 << hi) | (1 << lo))
        return out

    def stab_fix(self, arr):
        cur = arr.copy()
        cycles = np.zeros(arr.shape, dtype=np.int64)
        active = np.ones(arr.shape, dtype=bool)
        cap = self.N * len(self.pairs) + 2
        for _ in range(cap):
            cycles += active
            nxt = cur
            for ij in self.pairs:
                nxt = self.stab(nxt, *ij)
            active = nxt != cur
            cur = nxt
            if not active.any():
                return cur, cycles
        raise DefectError("stabilization did not settle")

    def is_stable(self, arr):
        ok = np.ones(arr.shape, dtype=bool)
        for ij in self.pairs:
            ok &= self.stab(arr, *ij) == arr
        return ok

    # --- compression ---

    def key(self, arr, h):
        k = np.zeros(arr.shape, dtype=np.int64)
        for b, i in enumerate(self.others[h]):
            k |= bit(arr, self.corner_pos[h][i]).astype(np.int64) << b
        return k

    def comp(self, arr, h):
        ell = np.bitwise_count(arr & self.block[h]).astype(np.int64)
        seg = self.segtab[h][self.key(arr, h), ell]
        return (arr & ~self.block[h]) | seg

    def comp_fix(self, arr, max_cycles=None):
        """Fixed point of the compression cycle and the number of cycles that
        changed something (a set already compressed reports 0)."""
        cur = arr.copy()
        changed_cycles = np.zeros(arr.shape, dtype=np.int64)
        cap = max_cycles if max_cycles is not None else 10 * self.N * self.m
        for _ in range(cap + 1):
            nxt = cur
            for h in range(self.m):
                nxt = self.comp(nxt, h)
            moved = nxt != cur
            if not moved.any():
                return cur, changed_cycles
            changed_cycles += moved
            cur = nxt
        raise DefectError("compression did not settle within the cycle cap")

    def is_compressed(self, arr):
        ok = np.ones(arr.shape, dtype=bool)
        for h in range(self.m):
            ok &= self.comp(arr, h) == arr
        return ok

    # --- potentials ---

    def potentials(self, arr):
        rho = np.zeros(arr.shape, dtype=np.int64)
        tau = np.zeros(arr.shape, dtype=np.int64)
        for i in range(self.m):
            own = np.zeros(arr.shape, dtype=np.int64)
            for j in range(self.m):
                own |= bit(arr, i * self.size + corner_index(j, self.depth, self.m)).astype(np.int64) << j
            key = self.key(arr, i)
            r, t = self.pottab[i]
            rho += r[key, own]
            tau += t[key, own]
        return rho, tau

    # --- subadditivation ---

    def subadd(self, arr):
        """Vectorized SubAdd: returns (result, identity flag, h_min, h_max)."""
        m, size = self.m, self.size
        ells = self.sections(arr)
        h_min = np.full(arr.shape, m, dtype=np.int64)
        for h in reversed(range(m)):
            h_min = np.where(ells[h] < size, h, h_min)
        h_max = np.full(arr.shape, -1, dtype=np.int64)
        for h in range(m):
            h_max = np.where(ells[h] > 0, h, h_max)
        identity = h_min >= h_max
        out = arr.copy()
        full = U64((1 << size) - 1)
        for a in range(m):
            for b in range(a + 1, m):
                sel = (~identity) & (h_min == a) & (h_max == b)
                if not sel.any():
                    continue
                x = arr[sel]
                la, lb = ells[a][sel], ells[b][sel]
                total = la + lb
                base = x & ~self.block[a] & ~self.block[b]
                ka, kb = self.key(x, a), self.key(x, b)
                small = total <= size
                fill_a = self.segtab[a][ka, np.minimum(total, size)]
                rest_b = self.segtab[b][kb, np.maximum(total - size, 0)]
                merged = np.where(small, base | fill_a, base | (full << U64(a * size)) | rest_b)
                out[sel] = merged
        return out, identity, h_min, h_max
