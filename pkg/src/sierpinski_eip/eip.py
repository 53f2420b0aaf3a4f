"""Edge boundaries, Lex orders and the Lex-segment isoperimetric profile.

The profile f(n, m; l) = |boundary of the first l vertices in Lex order| is
computed three independent ways:

* `lex_profile_direct` scans edges of the segment with the implicit edge rule;
* `profile_recursive_m3` uses the m = 3 split into a "top level" part
  ``theta0`` and a replicated lower-level part ``theta1``;
* `profile_closed_form` sums per-level contributions from the base-m digits
  of l - 1.

Closed-form reading.  Write l - 1 = sum_h d_h m^(n-h).  At level h the first
d_h sub-copies of the current block are complete, copy d_h is partial and the
rest are empty.  Let p_h = 1 + max{j : j^(n-h) <=_Lex (d_{h+1}, ..., d_n)},
the number of corners of the partial copy that lie in the segment (p_n = m:
at the last level the partial copy is the single vertex itself).  The level
contributes

    d_h (m - 1 - d_h) + max(0, d_h - p_h) + max(0, p_h - 1 - d_h).

The printed variant ``d(m-d) + |p-d| - d`` agrees whenever p_h <= d_h and
over-counts by one otherwise, because it counts an edge from the partial copy
to itself.  `resolve_closed_form_convention` re-derives this choice by
exhaustive agreement with the direct evaluator.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import ParameterError
from .graphs import (
    SIERPINSKI,
    Graph,
    VertexWord,
    corner_index,
    index_to_word,
    neighbor_indices,
    parse_word,
    word_to_index,
)

# --- domain types ------------------------------------------------------------


@dataclass(frozen=True)
class DecoratedContext:
    """Corner decoration (s, t) of S_{s,t}(n,m).

    Corners i^n with i in I carry an exterior edge to a phantom vertex that
    counts as inside the set; corners with i in K have a phantom outside the
    set; corners in J have no exterior edge.
    """

    s: int
    t: int
    m: int

    def __post_init__(self):
        if self.s < 0 or self.t < 0 or self.s + self.t > self.m or self.m < 2:
            raise ParameterError(f"need s, t >= 0 and s + t <= m (got s={self.s}, t={self.t}, m={self.m})")

    @classmethod
    def plain(cls, m: int) -> "DecoratedContext":
        """The undecorated graph: every corner in J."""
        return cls(0, m, m)

    @property
    def I(self) -> tuple[int, ...]:  # noqa: E743
        return tuple(range(self.s))

    @property
    def J(self) -> tuple[int, ...]:
        return tuple(range(self.s, self.s + self.t))

    @property
    def K(self) -> tuple[int, ...]:
        return tuple(range(self.s + self.t, self.m))

    def side(self, i: int) -> str:
        if i < self.s:
            return "I"
        if i < self.s + self.t:
            return "J"
        return "K"

    @staticmethod
    def all_pairs(m: int) -> list["DecoratedContext"]:
        return [DecoratedContext(s, t, m) for s in range(m + 1) for t in range(m + 1 - s)]


@dataclass(frozen=True)
class PermutationOrder:
    """A reordering of the digit alphabet; ``sequence[k]`` is the digit ranked k.

    Lex_pi ranks words by comparing digit ranks position by position, so the
    identity sequence gives plain Lex order.
    """

    sequence: tuple[int, ...]

    def __post_init__(self):
        seq = tuple(int(d) for d in self.sequence)
        if sorted(seq) != list(range(len(seq))):
            raise ParameterError(f"{self.sequence} is not a permutation of 0..{len(seq) - 1}")
        object.__setattr__(self, "sequence", seq)

    @classmethod
    def identity(cls, m: int) -> "PermutationOrder":
        return cls(tuple(range(m)))

    @property
    def m(self) -> int:
        return len(self.sequence)

    @property
    def ranks(self) -> tuple[int, ...]:
        r = [0] * self.m
        for k, d in enumerate(self.sequence):
            r[d] = k
        return tuple(r)

    def rank(self, d: int) -> int:
        return self.ranks[d]

    def lex_rank(self, v: Sequence[int]) -> int:
        """0-based position of word v in Lex_pi order."""
        ranks = self.ranks
        r = 0
        for d in v:
            r = r * self.m + ranks[d]
        return r

    def swap(self, i: int, j: int) -> "PermutationOrder":
        """The order with the ranks of digits i and j exchanged (pi composed with (ij))."""
        seq = list(self.sequence)
        a, b = seq.index(i), seq.index(j)
        seq[a], seq[b] = seq[b], seq[a]
        return PermutationOrder(tuple(seq))


@dataclass(frozen=True)
class VertexSet:
    """A subset of the words of length n over m digits, stored as a Lex-rank bitmask."""

    n: int
    m: int
    mask: int = 0

    def __post_init__(self):
        if self.mask < 0 or self.mask >> (self.m**self.n):
            raise ParameterError(f"mask has bits outside the {self.m ** self.n} vertices of (n={self.n}, m={self.m})")

    @classmethod
    def from_words(cls, words, n: int, m: int) -> "VertexSet":
        mask = 0
        for w in words:
            if isinstance(w, VertexWord):
                if (w.n, w.m) != (n, m):
                    raise ParameterError(f"word {w} is not a vertex of (n={n}, m={m})")
                digits = w.digits
            elif isinstance(w, str):
                digits = parse_word(w, n, m)
            else:
                digits = tuple(w)
            if len(digits) != n or any(not 0 <= d < m for d in digits):
                raise ParameterError(f"word {digits} is not a vertex of (n={n}, m={m})")
            mask |= 1 << word_to_index(digits, m)
        return cls(n, m, mask)

    @classmethod
    def from_indices(cls, indices, n: int, m: int) -> "VertexSet":
        mask = 0
        for r in indices:
            mask |= 1 << r
        return cls(n, m, mask)

    @classmethod
    def full(cls, n: int, m: int) -> "VertexSet":
        return cls(n, m, (1 << m**n) - 1)

    @property
    def cardinality(self) -> int:
        return bin(self.mask).count("1")

    def __len__(self) -> int:
        return self.cardinality

    @property
    def indices(self) -> tuple[int, ...]:
        mask, out, r = self.mask, [], 0
        while mask:
            if mask & 1:
                out.append(r)
            mask >>= 1
            r += 1
        return tuple(out)

    @property
    def members(self) -> tuple[VertexWord, ...]:
        return tuple(VertexWord.from_index(r, self.n, self.m) for r in self.indices)

    def __contains__(self, v) -> bool:
        digits = v.digits if isinstance(v, VertexWord) else tuple(v)
        return bool(self.mask >> word_to_index(digits, self.m) & 1)

    @property
    def section_vector(self) -> tuple[int, ...]:
        size = self.m ** (self.n - 1)
        full = (1 << size) - 1
        return tuple(bin(self.mask >> (h * size) & full).count("1") for h in range(self.m))

    def complement(self) -> "VertexSet":
        return VertexSet(self.n, self.m, ((1 << self.m**self.n) - 1) & ~self.mask)

    def issubset(self, other: "VertexSet") -> bool:
        return self.mask & ~other.mask == 0

    def __str__(self) -> str:
        return "{" + ",".join(str(w) for w in self.members) + "}"


# --- boundaries --------------------------------------------------------------


def _check_set_graph(S, graph: Graph) -> int:
    if isinstance(S, VertexSet):
        if graph.is_word_graph and (S.n, S.m) != (graph.n, graph.m):
            raise ParameterError(f"set over (n={S.n}, m={S.m}) used with graph (n={graph.n}, m={graph.m})")
        mask = S.mask
    else:
        mask = int(S)
    if mask < 0 or mask >> graph.num_vertices:
        raise ParameterError("set has members outside the graph's vertex range")
    return mask


def cut_size(mask: int, nbr_masks: Sequence[int]) -> int:
    """Number of edges leaving ``mask``; each cut edge is seen from its inside end."""
    total, v, rest = 0, 0, mask
    outside = ~mask
    while rest:
        if rest & 1:
            total += bin(nbr_masks[v] & outside).count("1")
        rest >>= 1
        v += 1
    return total


def boundary(S, graph: Graph | None = None, *, with_edges: bool = False):
    """|Theta(S)|: edges with exactly one endpoint in S.

    With ``graph=None`` a VertexSet is evaluated on S(n,m) through the implicit
    edge rule.  ``with_edges=True`` also returns the cut edges as index pairs.
    """
    if graph is None:
        if not isinstance(S, VertexSet):
            raise ParameterError("boundary() without a graph needs a VertexSet")
        edges = [(u, w) for u in S.indices for w in neighbor_indices(u, S.n, S.m) if not S.mask >> w & 1]
        return (len(edges), edges) if with_edges else len(edges)
    mask = _check_set_graph(S, graph)
    if not with_edges:
        return cut_size(mask, graph.nbr_masks)
    edges = [(u, v) for u, v in graph.edges if (mask >> u & 1) != (mask >> v & 1)]
    return len(edges), edges


def corner_terms(mask: int, n: int, m: int, ctx: DecoratedContext) -> int:
    """Phantom-edge contribution of the decoration."""
    c = 0
    for i in ctx.I:
        if not mask >> corner_index(i, n, m) & 1:
            c += 1
    for i in ctx.K:
        if mask >> corner_index(i, n, m) & 1:
            c += 1
    return c


def decorated_boundary(S, graph: Graph | None, ctx: DecoratedContext) -> int:
    """|Theta_{s,t}(S)| on S_{s,t}(n,m)."""
    if not isinstance(S, VertexSet):
        raise ParameterError("decorated_boundary() takes a VertexSet")
    if ctx.m != S.m:
        raise ParameterError(f"decoration is for m={ctx.m} but the set has m={S.m}")
    if graph is not None and graph.family != SIERPINSKI:
        raise ParameterError("decorations are defined on the sierpinski family")
    return boundary(S, graph) + corner_terms(S.mask, S.n, S.m, ctx)


def unary_weights(n: int, m: int, ctx: DecoratedContext | None) -> tuple[list[int], int]:
    """Decoration as (per-vertex weight, constant) so that the decorated
    boundary equals cut + const + sum of weights over the set."""
    w = [0] * (m**n)
    const = 0
    if ctx is None:
        return w, const
    for i in ctx.I:
        w[corner_index(i, n, m)] -= 1
        const += 1
    for i in ctx.K:
        w[corner_index(i, n, m)] += 1
    return w, const


# --- Lex segments ------------------------------------------------------------


@lru_cache(maxsize=256)
def lex_order_indices(sequence: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Vertex ranks listed in Lex_pi order for the digit order ``sequence``."""
    m = len(sequence)
    out = []
    for digits in itertools.product(sequence, repeat=n):
        out.append(word_to_index(digits, m))
    return tuple(out)


@lru_cache(maxsize=256)
def lex_prefix_masks(sequence: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Masks of every initial segment of Lex_pi (length m^n + 1)."""
    masks = [0]
    acc = 0
    for r in lex_order_indices(sequence, n):
        acc |= 1 << r
        masks.append(acc)
    return tuple(masks)


def lex_segment(ell: int, order: PermutationOrder | None = None, n: int = 1, m: int | None = None) -> VertexSet:
    """The first ``ell`` vertices in Lex_pi order."""
    if order is None:
        if m is None:
            raise ParameterError("lex_segment() needs m or an order")
        order = PermutationOrder.identity(m)
    m = order.m if m is None else m
    if order.m != m:
        raise ParameterError("order and m disagree")
    if not 0 <= ell <= m**n:
        raise ParameterError(f"ell={ell} outside [0, {m ** n}]")
    if order.sequence == tuple(range(m)):
        return VertexSet(n, m, (1 << ell) - 1)
    return VertexSet(n, m, lex_prefix_masks(order.sequence, n)[ell])


def lex_profile_direct(n: int, m: int, ell: int) -> int:
    """Boundary of the identity-Lex ell-segment by a direct edge scan.

    Uses the implicit edge rule, so nothing of size m^n is materialized.
    """
    if not 0 <= ell <= m**n:
        raise ParameterError(f"ell={ell} outside [0, {m ** n}]")
    return sum(1 for r in range(ell) for w in neighbor_indices(r, n, m) if w >= ell)


def lex_profile_table(n: int, m: int, family: str = SIERPINSKI) -> list[int]:
    """All values f(n, m; l), l = 0..m^n, adding one vertex at a time.

    ``family="hamming"`` gives the Lex-segment boundaries of K_m^n instead.
    """
    out = [0]
    cur = 0
    for r in range(m**n):
        back = sum(1 for w in neighbor_indices(r, n, m, family) if w < r)
        deg = len(neighbor_indices(r, n, m, family))
        cur += deg - 2 * back
        out.append(cur)
    return out


# --- the m = 3 recursion -----------------------------------------------------


def theta0(n: int, ell: int) -> int:
    """Top-level part of the m = 3 profile; thresholds compared on doubled integers."""
    N = 3**n
    ell %= N
    if ell == 0:
        return 0
    lo = 3 ** (n - 1)  # doubled threshold 3^(n-1)/2
    two = 2 * ell
    if two < lo or two > 2 * N - lo:
        return 1
    return 2


def theta1(n: int, ell: int) -> int:
    """Lower-level part: the 3-replicate of f(n-1, .) - 1, zero on multiples of 3^(n-1)."""
    if n <= 0:
        return 0
    block = 3 ** (n - 1)
    r = ell % block
    if r == 0:
        return 0
    return profile_recursive_m3(n - 1, r).theta - 1


@dataclass(frozen=True)
class RecursiveValue:
    theta: int
    theta0: int
    theta1: int


@lru_cache(maxsize=None)
def profile_recursive_m3(n: int, ell: int) -> RecursiveValue:
    """f(n, 3; l) as theta0 + theta1, with f(1, 3; l) = l(3 - l)."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if not 0 <= ell <= 3**n:
        raise ParameterError(f"ell={ell} outside [0, {3 ** n}]")
    if n == 1:
        return RecursiveValue(ell * (3 - ell), theta0(1, ell), 0)
    t0, t1 = theta0(n, ell), theta1(n, ell)
    return RecursiveValue(t0 + t1, t0, t1)


# --- closed form -------------------------------------------------------------


@dataclass(frozen=True)
class ClosedFormConvention:
    """Free choices in the level-sum formula.

    comparison   'inclusive' or 'strict' test of j^(n-h) against the suffix digits
    last_level   corner count at the last level (empty suffix): 'natural' follows
                 the comparison (all j for inclusive, none for strict) or a fixed
                 value 'm', 'm-1', '1', '0'
    correction   'printed' uses |p - d| - d with d(m - d); 'self-corner' drops
                 the partial copy's own digit from the corner count
    expand       digits taken from 'ell-1' or 'ell'
    """

    comparison: str = "inclusive"
    last_level: str = "natural"
    correction: str = "self-corner"
    expand: str = "ell-1"


RESOLVED_CONVENTION = ClosedFormConvention()
PRINTED_CONVENTION = ClosedFormConvention(correction="printed")


def _corner_count(suffix: tuple[int, ...], m: int, conv: ClosedFormConvention) -> int:
    k = len(suffix)
    if k == 0 and conv.last_level != "natural":
        return {"m": m, "m-1": m - 1, "1": 1, "0": 0}[conv.last_level]
    best = -1
    for j in range(m):
        cj = (j,) * k
        if cj < suffix or (cj == suffix and conv.comparison == "inclusive"):
            best = j
    return best + 1


def closed_form_levels(n: int, m: int, ell: int, conv: ClosedFormConvention = RESOLVED_CONVENTION) -> list[int]:
    """Per-level contributions; their sum is the closed-form profile value."""
    x = ell - 1 if conv.expand == "ell-1" else ell
    x %= m**n
    d = index_to_word(x, n, m)
    out = []
    for h in range(n):
        p = _corner_count(d[h + 1 :], m, conv)
        dh = d[h]
        if conv.correction == "printed":
            out.append(dh * (m - dh) + abs(p - dh) - dh)
        else:
            out.append(dh * (m - 1 - dh) + max(0, dh - p) + max(0, p - 1 - dh))
    return out


def profile_closed_form(n: int, m: int, ell: int, conv: ClosedFormConvention = RESOLVED_CONVENTION) -> int:
    if not 0 <= ell <= m**n:
        raise ParameterError(f"ell={ell} outside [0, {m ** n}]")
    if ell in (0, m**n):
        return 0
    return sum(closed_form_levels(n, m, ell, conv))


def closed_form_conventions() -> list[ClosedFormConvention]:
    return [
        ClosedFormConvention(c, last, corr, exp)
        for c in ("inclusive", "strict")
        for last in ("natural", "m", "m-1", "1", "0")
        for corr in ("printed", "self-corner")
        for exp in ("ell-1", "ell")
    ]


def resolve_closed_form_convention(max_n: int = 4, max_m: int = 4) -> list[ClosedFormConvention]:
    """All conventions that match the direct evaluator for every n <= max_n,
    2 <= m <= max_m and 0 < l < m^n."""
    tables = {(n, m): lex_profile_table(n, m) for n in range(1, max_n + 1) for m in range(2, max_m + 1)}
    good = []
    for conv in closed_form_conventions():
        if all(
            profile_closed_form(n, m, ell, conv) == tab[ell]
            for (n, m), tab in tables.items()
            for ell in range(1, m**n)
        ):
            good.append(conv)
    return good


# --- profile tables ----------------------------------------------------------


@dataclass
class ProfileTable:
    """Map l -> boundary value, l = 0..|V|, with optional m = 3 components and witnesses."""

    n: int
    m: int
    values: list[int]
    theta0: list[int] | None = None
    theta1: list[int] | None = None
    witnesses: list[int] | None = field(default=None, repr=False)
    label: str = ""

    def __getitem__(self, ell: int) -> int:
        return self.values[ell]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def size(self) -> int:
        return len(self.values) - 1

    def is_symmetric(self) -> bool:
        v = self.values
        return all(v[i] == v[-1 - i] for i in range(len(v)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        with_parts = self.theta0 is not None and self.theta1 is not None
        w.writerow(["ell", "theta", "theta0", "theta1"] if with_parts else ["ell", "theta"])
        for ell, v in enumerate(self.values):
            row = [ell, v]
            if with_parts:
                row += [self.theta0[ell], self.theta1[ell]]
            w.writerow(row)
        return buf.getvalue()


def lex_profile(n: int, m: int, *, components: bool | None = None) -> ProfileTable:
    """Lex-segment profile of S(n,m); for m = 3 the theta0/theta1 columns are filled."""
    values = lex_profile_table(n, m)
    if components is None:
        components = m == 3
    t0 = t1 = None
    if components:
        if m != 3:
            raise ParameterError("theta0/theta1 components exist only for m = 3")
        t0 = [theta0(n, ell) for ell in range(3**n + 1)]
        t1 = [theta1(n, ell) for ell in range(3**n + 1)]
    return ProfileTable(n, m, values, t0, t1, label=f"lex S({n},{m})")


# --- continuous limit --------------------------------------------------------


class CountableInfinity:
    """The value omega taken by lambda at non-triadic points."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "omega"

    __str__ = __repr__


OMEGA = CountableInfinity()


def lambda_triadic(ell: int, n: int) -> int:
    """lambda(l / 3^n) = f(n, 3; l)."""
    if not 0 <= ell <= 3**n:
        raise ParameterError(f"ell={ell} outside [0, {3 ** n}]")
    return profile_closed_form(n, 3, ell)


def _as_fraction(a) -> Fraction:
    if isinstance(a, str):
        a = Fraction(a.strip())
    elif isinstance(a, float):
        raise ParameterError("pass exact rationals (Fraction, int or 'p/q'), not floats")
    a = Fraction(a)
    if not 0 <= a <= 1:
        raise ParameterError(f"a={a} outside [0, 1]")
    return a


def lambda_at(a) -> int | CountableInfinity:
    a = _as_fraction(a)
    q = a.denominator
    n = 0
    while q % 3 == 0:
        q //= 3
        n += 1
    if q != 1:
        return OMEGA
    return lambda_triadic(a.numerator, n) if n > 0 else 0


def ternary_digits(a) -> tuple[list[int], list[int]]:
    """Non-terminating base-3 expansion of a in (0, 1] as (preperiod, period).

    Triadic rationals get the representation ending in repeated 2s; a = 0 gives
    ([], [0]).
    """
    a = _as_fraction(a)
    if a == 0:
        return [], [0]
    seen: dict[Fraction, int] = {}
    digits = []
    x = a
    while x not in seen:
        seen[x] = len(digits)
        y = 3 * x
        d = -((-y.numerator) // y.denominator) - 1  # ceil(3x) - 1
        digits.append(d)
        x = y - d
    start = seen[x]
    return digits[:start], digits[start:]


def eta_inverse(a) -> tuple[Fraction, Fraction, Fraction]:
    """Point of the limiting gasket in R^3 reached after "area" a, computed exactly."""
    pre, period = ternary_digits(a)
    coords = [Fraction(0)] * 3
    for i, d in enumerate(pre, start=1):
        coords[d] += Fraction(1, 2**i)
    k = len(pre)
    p = len(period)
    # digit at position k + j + 1 + r p contributes 2^-(k+j+1) / (1 - 2^-p) overall
    scale = Fraction(2**p, 2**p - 1)
    for j, d in enumerate(period):
        coords[d] += Fraction(1, 2 ** (k + j + 1)) * scale
    return tuple(coords)


def scaled_lex_point(ell: int, n: int) -> tuple[Fraction, Fraction, Fraction]:
    """y(Lex^-1(l)) / 2^n for S(n,3): the finite-n approximation of eta_inverse(l/3^n)."""
    from .graphs import embed_digits

    if not 1 <= ell <= 3**n:
        raise ParameterError(f"ell={ell} outside [1, {3 ** n}]")
    y = embed_digits(index_to_word(ell - 1, n, 3), 3)
    return tuple(Fraction(c, 2**n) for c in y)
