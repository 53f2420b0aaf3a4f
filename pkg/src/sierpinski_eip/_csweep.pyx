# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Gray-code subset sweep.

cost(mask) = sum of unary[v] over v in mask + number of edges with exactly one
endpoint in mask.  Flipping v changes the cut by deg(v) - 2|N(v) & mask|.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef int64_t INT64_MAX = 0x7FFFFFFFFFFFFFFF


cdef inline int64_t _cost(const uint64_t[::1] nbr, const int64_t[::1] unary,
                          uint64_t mask, int nv) noexcept nogil:
    cdef int64_t c = 0
    cdef int v
    for v in range(nv):
        if (mask >> v) & 1:
            c += unary[v] + __builtin_popcountll(nbr[v] & ~mask)
    return c


cdef void _walk(const uint64_t[::1] nbr, const int64_t[::1] unary, const int64_t[::1] deg,
                int nv, int low_bits, uint64_t prefix,
                int64_t[::1] best, uint64_t[::1] witness) noexcept nogil:
    cdef uint64_t mask = prefix << low_bits
    cdef int64_t cost = _cost(nbr, unary, mask, nv)
    cdef int pc = __builtin_popcountll(mask)
    cdef uint64_t i, bit, stop = (<uint64_t>1) << low_bits
    cdef int v
    cdef int64_t d
    if cost < best[pc] or (cost == best[pc] and mask < witness[pc]):
        best[pc] = cost
        witness[pc] = mask
    i = 1
    while i < stop:
        v = __builtin_ctzll(i)
        bit = (<uint64_t>1) << v
        d = deg[v] - 2 * __builtin_popcountll(nbr[v] & mask) + unary[v]
        if mask & bit:
            cost -= d
            pc -= 1
        else:
            cost += d
            pc += 1
        mask ^= bit
        if cost < best[pc] or (cost == best[pc] and mask < witness[pc]):
            best[pc] = cost
            witness[pc] = mask
        i += 1


def sweep_range(nbr, unary, int low_bits, prefixes):
    """Per-cardinality minimum cost over masks ``(p << low_bits) | low``.

    Ties are broken toward the numerically smallest mask.  Returns
    ``(best, witness)`` arrays of length nv + 1; unreached cardinalities keep
    the INT64_MAX sentinel.
    """
    cdef const uint64_t[::1] nb = np.ascontiguousarray(nbr, dtype=np.uint64)
    cdef const int64_t[::1] un = np.ascontiguousarray(unary, dtype=np.int64)
    cdef int nv = nb.shape[0]
    if nv > 63 or low_bits > nv or low_bits < 0:
        raise ValueError("need low_bits <= nv <= 63")
    deg_arr = np.array([bin(int(x)).count("1") for x in nbr], dtype=np.int64)
    cdef const int64_t[::1] deg = deg_arr
    best_arr = np.full(nv + 1, INT64_MAX, dtype=np.int64)
    wit_arr = np.zeros(nv + 1, dtype=np.uint64)
    cdef int64_t[::1] best = best_arr
    cdef uint64_t[::1] witness = wit_arr
    cdef uint64_t p
    for py_p in prefixes:
        p = <uint64_t>py_p
        with nogil:
            _walk(nb, un, deg, nv, low_bits, p, best, witness)
    return best_arr, wit_arr


def gray_checkpoints(nbr, unary, int nbits, checkpoints):
    """Walk the Gray code over the low ``nbits`` bits and record (mask, cost)
    after each step index listed in the sorted ``checkpoints`` array."""
    cdef const uint64_t[::1] nb = np.ascontiguousarray(nbr, dtype=np.uint64)
    cdef const int64_t[::1] un = np.ascontiguousarray(unary, dtype=np.int64)
    cdef const uint64_t[::1] cps = np.ascontiguousarray(checkpoints, dtype=np.uint64)
    cdef int nv = nb.shape[0]
    deg_arr = np.array([bin(int(x)).count("1") for x in nbr], dtype=np.int64)
    cdef const int64_t[::1] deg = deg_arr
    cdef Py_ssize_t k = 0, ncp = cps.shape[0]
    masks_arr = np.zeros(ncp, dtype=np.uint64)
    costs_arr = np.zeros(ncp, dtype=np.int64)
    cdef uint64_t[::1] masks = masks_arr
    cdef int64_t[::1] costs = costs_arr
    cdef uint64_t mask = 0, i = 0, bit, stop = (<uint64_t>1) << nbits
    cdef int64_t cost = 0, d
    cdef int v
    with nogil:
        while k < ncp and cps[k] == 0:
            masks[k] = 0
            costs[k] = 0
            k += 1
        i = 1
        while i < stop and k < ncp:
            v = __builtin_ctzll(i)
            bit = (<uint64_t>1) << v
            d = deg[v] - 2 * __builtin_popcountll(nb[v] & mask) + un[v]
            if mask & bit:
                cost -= d
            else:
                cost += d
            mask ^= bit
            while k < ncp and cps[k] == i:
                masks[k] = mask
                costs[k] = cost
                k += 1
            i += 1
    return masks_arr, costs_arr
