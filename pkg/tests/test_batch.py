"""The vectorized engine against the scalar reference operations."""

import numpy as np
import pytest

from sierpinski_eip.batch import BatchEngine
from sierpinski_eip.eip import DecoratedContext, VertexSet, decorated_boundary
from sierpinski_eip.errors import ParameterError
from sierpinski_eip.steiner import (
    boundary_parts,
    compress,
    compress_fix,
    is_compressed,
    is_stable,
    potentials,
    stabilize,
    stabilize_fix,
    subadd_step,
)

CASES = [(2, 3), (2, 4), (3, 3), (2, 5)]


def _sample(n, m, k, seed):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 1 << (m**n), size=k, dtype=np.uint64)


@pytest.mark.parametrize("n,m", CASES)
def test_batch_matches_scalar(n, m):
    for ctx in DecoratedContext.all_pairs(m)[:: max(1, len(DecoratedContext.all_pairs(m)) // 4)]:
        E = BatchEngine(n, m, ctx)
        arr = _sample(n, m, 40, seed=n * 10 + m)
        parts = np.stack(E.parts(arr))
        rho, tau = E.potentials(arr)
        fixed, _ = E.comp_fix(arr)
        sfix, _ = E.stab_fix(arr)
        for k, x in enumerate(arr):
            S = VertexSet(n, m, int(x))
            assert tuple(parts[:, k]) == boundary_parts(S, ctx)
            assert E.boundary(arr[k : k + 1])[0] == decorated_boundary(S, None, ctx)
            for h in range(m):
                assert int(E.comp(arr[k : k + 1], h)[0]) == compress(S, h, None, ctx).mask
            for i, j in E.pairs:
                assert int(E.stab(arr[k : k + 1], i, j)[0]) == stabilize(S, i, j).mask
            p = potentials(S, ctx)
            assert (rho[k], tau[k]) == (p.rho, p.tau)
            assert int(fixed[k]) == compress_fix(S, None, ctx).mask
            assert int(sfix[k]) == stabilize_fix(S).mask


@pytest.mark.parametrize("n,m", [(2, 3), (2, 4)])
def test_batch_subadd_matches_scalar(n, m):
    arr = np.arange(1 << (m**n), dtype=np.uint64)
    for ctx in DecoratedContext.all_pairs(m):
        E = BatchEngine(n, m, ctx)
        sel = arr[E.is_stable(arr) & E.is_compressed(arr)]
        out, ident, h_min, h_max = E.subadd(sel)
        for k in range(0, len(sel), max(1, len(sel) // 25)):
            S = VertexSet(n, m, int(sel[k]))
            assert is_stable(S) and is_compressed(S, ctx)
            r = subadd_step(S, ctx)
            assert int(out[k]) == r.result.mask
            assert bool(ident[k]) == r.identity


def test_engine_limits():
    with pytest.raises(ParameterError):
        BatchEngine(1, 3)
    with pytest.raises(ParameterError):
        BatchEngine(3, 4)
    with pytest.raises(ParameterError):
        BatchEngine(2, 3, DecoratedContext(0, 0, 4))
