"""Generalized Sierpinski graphs S(n,m), their quotients S[n,m], and Hamming graphs.

Vertices of S(n,m) and K_m^n are words over ``{0, ..., m-1}`` of length n.  They
are indexed by Lex rank (the word read as a base-m integer, leading digit most
significant), so a vertex set is an ``int`` bitmask over ranks throughout the
package.  Graphs with at most ``MATERIALIZE_LIMIT`` vertices are built as
adjacency lists; beyond that, `neighbors` and `is_edge` evaluate the edge rule
directly.
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, ParameterError

MATERIALIZE_LIMIT = 1 << 16
INT64_MAX = (1 << 63) - 1
DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"

SIERPINSKI = "sierpinski"
QUOTIENT = "sierpinski-quotient"
HAMMING = "hamming"
FAMILIES = (SIERPINSKI, QUOTIENT, HAMMING)


# --- words -----------------------------------------------------------------


def word_to_index(digits: Sequence[int], m: int) -> int:
    r = 0
    for d in digits:
        r = r * m + d
    return r


def index_to_word(r: int, n: int, m: int) -> tuple[int, ...]:
    out = [0] * n
    for p in range(n - 1, -1, -1):
        r, out[p] = divmod(r, m)
    return tuple(out)


def word_string(digits: Sequence[int]) -> str:
    return "".join(DIGITS[d] for d in digits)


def parse_word(text: str, n: int, m: int) -> tuple[int, ...]:
    text = text.strip().lower()
    if len(text) != n:
        raise ParameterError(f"word {text!r} has length {len(text)}, expected n={n}")
    try:
        digits = tuple(DIGITS.index(c) for c in text)
    except ValueError:
        raise ParameterError(f"word {text!r} contains a non-digit character") from None
    if any(d >= m for d in digits):
        raise ParameterError(f"word {text!r} has a digit outside [0, {m})")
    return digits


def _check_nm(n: int, m: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    if not isinstance(m, (int, np.integer)) or m < 2:
        raise ParameterError(f"m must be an integer >= 2, got {m!r}")
    if m > len(DIGITS):
        raise ParameterError(f"m={m} exceeds the supported alphabet size {len(DIGITS)}")


@dataclass(frozen=True)
class VertexWord:
    """A vertex of S(n,m) or K_m^n: an n-digit base-m word."""

    digits: tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        _check_nm(len(self.digits), self.m)
        if any(d < 0 or d >= self.m for d in self.digits):
            raise ParameterError(f"digits {self.digits} not all in [0, {self.m})")

    @property
    def n(self) -> int:
        return len(self.digits)

    @classmethod
    def parse(cls, text: str, m: int) -> "VertexWord":
        return cls(parse_word(text, len(text.strip()), m), m)

    @classmethod
    def from_index(cls, r: int, n: int, m: int) -> "VertexWord":
        return cls(index_to_word(r, n, m), m)

    @property
    def index(self) -> int:
        return word_to_index(self.digits, self.m)

    def _require_same_shape(self, other: "VertexWord") -> None:
        if not isinstance(other, VertexWord):
            raise TypeError(f"cannot compare VertexWord with {type(other).__name__}")
        if other.n != self.n or other.m != self.m:
            raise ParameterError(
                f"words from different graphs: (n={self.n}, m={self.m}) vs (n={other.n}, m={other.m})"
            )

    def __lt__(self, other: "VertexWord") -> bool:
        self._require_same_shape(other)
        return self.digits < other.digits

    def __le__(self, other: "VertexWord") -> bool:
        self._require_same_shape(other)
        return self.digits <= other.digits

    def relabel(self, perm: Sequence[int]) -> "VertexWord":
        """Apply a digit permutation (``perm[d]`` replaces d) to every position."""
        return VertexWord(tuple(perm[d] for d in self.digits), self.m)

    def __str__(self) -> str:
        return word_string(self.digits)


@dataclass(frozen=True)
class GraphSpec:
    family: str
    n: int
    m: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        _check_nm(self.n, self.m)
        if self.family == QUOTIENT and self.m < 3:
            raise ParameterError("the quotient S[n,m] needs m >= 3 (S(n,2) has no triangles)")

    @property
    def vertex_count(self) -> int:
        if self.family == QUOTIENT:
            # every non-clique edge is contracted and they form a matching
            return self.m**self.n - _exterior_edge_count(self.n, self.m)
        return self.m**self.n


@dataclass(frozen=True)
class EmbeddingPoint:
    coordinates: tuple[int, ...]

    def __getitem__(self, j: int) -> int:
        return self.coordinates[j]

    def __len__(self) -> int:
        return len(self.coordinates)


def _as_word(v, spec: GraphSpec) -> tuple[int, ...]:
    if isinstance(v, VertexWord):
        if v.n != spec.n or v.m != spec.m:
            raise ParameterError(f"vertex {v} does not belong to {spec}")
        return v.digits
    digits = tuple(v)
    if len(digits) != spec.n or any(d < 0 or d >= spec.m for d in digits):
        raise ParameterError(f"vertex {digits} does not belong to {spec}")
    return digits


# --- edge rule ---------------------------------------------------------------


def is_edge(u, v, spec: GraphSpec) -> bool:
    """Edge test straight from the defining conditions (no adjacency lookup)."""
    if spec.family == QUOTIENT:
        raise ParameterError("query quotient edges on the graph returned by quotient_graph()")
    a, b = _as_word(u, spec), _as_word(v, spec)
    if a == b:
        raise ParameterError("self-loops are not edges")
    h = next(i for i in range(spec.n) if a[i] != b[i])
    if spec.family == HAMMING:
        return a[h + 1 :] == b[h + 1 :]
    return all(a[j] == b[h] and b[j] == a[h] for j in range(h + 1, spec.n))


def exterior_neighbor_digits(v: tuple[int, ...]) -> tuple[int, ...] | None:
    """The unique neighbor of v outside its K_m, or None for corner words i^n."""
    n = len(v)
    p = n - 1
    while p > 0 and v[p - 1] == v[n - 1]:
        p -= 1
    if p == 0:
        return None
    h = p - 1
    a, b = v[h], v[n - 1]
    return v[:h] + (b,) + (a,) * (n - h - 1)


def _sierpinski_neighbors(v: tuple[int, ...], m: int) -> list[tuple[int, ...]]:
    head = v[:-1]
    out = [head + (d,) for d in range(m) if d != v[-1]]
    ext = exterior_neighbor_digits(v)
    if ext is not None:
        out.append(ext)
    return out


def _hamming_neighbors(v: tuple[int, ...], m: int) -> list[tuple[int, ...]]:
    out = []
    for p, x in enumerate(v):
        for d in range(m):
            if d != x:
                out.append(v[:p] + (d,) + v[p + 1 :])
    return out


def neighbors(v, spec: GraphSpec) -> frozenset[VertexWord]:
    if spec.family == QUOTIENT:
        raise ParameterError("query quotient neighbors on the graph returned by quotient_graph()")
    digits = _as_word(v, spec)
    fn = _sierpinski_neighbors if spec.family == SIERPINSKI else _hamming_neighbors
    return frozenset(VertexWord(w, spec.m) for w in fn(digits, spec.m))


def neighbor_indices(r: int, n: int, m: int, family: str = SIERPINSKI) -> list[int]:
    """Neighbor ranks of the vertex with Lex rank r, without materializing the graph."""
    v = index_to_word(r, n, m)
    fn = _sierpinski_neighbors if family == SIERPINSKI else _hamming_neighbors
    return [word_to_index(w, m) for w in fn(v, m)]


def _exterior_edge_count(n: int, m: int) -> int:
    return (m ** (n + 1) - m) // 2 - m ** (n - 1) * m * (m - 1) // 2


def counts(spec: GraphSpec) -> tuple[int, int]:
    """(vertex count, edge count) from the closed formulas."""
    n, m = spec.n, spec.m
    if spec.family == SIERPINSKI:
        nv, ne = m**n, (m ** (n + 1) - m) // 2
    elif spec.family == HAMMING:
        nv, ne = m**n, m**n * (m - 1) * n // 2
    else:
        nv = spec.vertex_count
        ne = m ** (n - 1) * m * (m - 1) // 2
    if nv > INT64_MAX or ne > INT64_MAX:
        raise OverflowError(f"counts for {spec} do not fit in a signed 64-bit integer")
    return nv, ne


def embed(v) -> EmbeddingPoint:
    """Integer linear coordinates y(v) in R^m.

    Position p (0 = leftmost digit) contributes 2^(n-1-p) to coordinate v_p, so
    the coordinates sum to 2^n - 1 and the leading digit dominates.
    """
    if not isinstance(v, VertexWord):
        raise ParameterError("embed() takes a VertexWord")
    y = [0] * v.m
    n = v.n
    for p, d in enumerate(v.digits):
        y[d] += 1 << (n - 1 - p)
    return EmbeddingPoint(tuple(y))


def embed_digits(v: Sequence[int], m: int) -> list[int]:
    y = [0] * m
    n = len(v)
    for p, d in enumerate(v):
        y[d] += 1 << (n - 1 - p)
    return y


# --- materialized graphs -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class Graph:
    """An explicit simple graph on vertices ``0..N-1``.

    ``labels`` are the display strings used for export; for word families the
    vertex index equals the Lex rank of the word.
    """

    family: str
    n: int
    m: int
    labels: tuple[str, ...]
    adjacency: tuple[tuple[int, ...], ...]
    members: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)

    @property
    def num_vertices(self) -> int:
        return len(self.adjacency)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def nbr_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in nb) for nb in self.adjacency)

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        e = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        return e[:, 0].copy(), e[:, 1].copy()

    @property
    def full_mask(self) -> int:
        return (1 << self.num_vertices) - 1

    @property
    def is_word_graph(self) -> bool:
        return self.family in (SIERPINSKI, HAMMING)

    def index_of(self, v) -> int:
        if not self.is_word_graph:
            raise ParameterError("index_of() needs a word-indexed graph")
        return word_to_index(_as_word(v, GraphSpec(self.family, self.n, self.m)), self.m)

    def word(self, r: int) -> VertexWord:
        if not self.is_word_graph:
            raise ParameterError("word() needs a word-indexed graph")
        return VertexWord.from_index(r, self.n, self.m)

    def mask_labels(self, mask: int) -> list[str]:
        return [self.labels[v] for v in range(self.num_vertices) if mask >> v & 1]


def _from_adjacency(family, n, m, labels, adj_sets, members=None) -> Graph:
    adjacency = tuple(tuple(sorted(s)) for s in adj_sets)
    return Graph(family, n, m, tuple(labels), adjacency, members)


def _check_budget(nv: int) -> None:
    if nv > MATERIALIZE_LIMIT:
        raise BudgetExceeded(
            f"{nv} vertices exceeds the materialization limit {MATERIALIZE_LIMIT}; "
            "use neighbors()/is_edge() for implicit queries"
        )


def sierpinski_graph(n: int, m: int) -> Graph:
    _check_nm(n, m)
    nv = m**n
    _check_budget(nv)
    adj = []
    labels = []
    for r in range(nv):
        v = index_to_word(r, n, m)
        labels.append(word_string(v))
        adj.append({word_to_index(w, m) for w in _sierpinski_neighbors(v, m)})
    return _from_adjacency(SIERPINSKI, n, m, labels, adj)


def hamming_graph(n: int, m: int) -> Graph:
    _check_nm(n, m)
    nv = m**n
    _check_budget(nv)
    adj, labels = [], []
    for r in range(nv):
        v = index_to_word(r, n, m)
        labels.append(word_string(v))
        adj.append({word_to_index(w, m) for w in _hamming_neighbors(v, m)})
    return _from_adjacency(HAMMING, n, m, labels, adj)


def hypercube(n: int) -> Graph:
    return hamming_graph(n, 2)


def complete_graph(m: int) -> Graph:
    return hamming_graph(1, m)


def quotient_graph(n: int, m: int) -> Graph:
    """S[n,m]: contract every edge of S(n,m) that lies in no triangle.

    Contraction classes are the connected components of the non-triangle
    edges; each class is named by its Lex-least member and classes are
    indexed in that order.
    """
    spec = GraphSpec(QUOTIENT, n, m)
    g = sierpinski_graph(n, m)
    nb = [set(a) for a in g.adjacency]
    parent = list(range(g.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        if not (nb[u] & nb[v]):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    classes: dict[int, list[int]] = {}
    for v in range(g.num_vertices):
        classes.setdefault(find(v), []).append(v)
    ordered = sorted(classes.values(), key=lambda c: c[0])
    cls_of = {}
    for k, members in enumerate(ordered):
        for v in members:
            cls_of[v] = k
    adj = [set() for _ in ordered]
    for u, v in g.edges:
        a, b = cls_of[u], cls_of[v]
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    labels = [g.labels[c[0]] for c in ordered]
    q = _from_adjacency(QUOTIENT, n, m, labels, adj, tuple(tuple(c) for c in ordered))
    assert q.num_vertices == spec.vertex_count
    return q


def build_graph(spec: GraphSpec) -> Graph:
    if spec.family == SIERPINSKI:
        return sierpinski_graph(spec.n, spec.m)
    if spec.family == HAMMING:
        return hamming_graph(spec.n, spec.m)
    return quotient_graph(spec.n, spec.m)


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """G x H with vertex (a, w) at index ``w * |G| + a``.

    That layout makes the fibre G x {w} a contiguous bit range of a mask.
    """
    ng, nh = g.num_vertices, h.num_vertices
    _check_budget(ng * nh)
    adj, labels = [], []
    for w in range(nh):
        for a in range(ng):
            s = {w * ng + b for b in g.adjacency[a]}
            s.update(x * ng + a for x in h.adjacency[w])
            adj.append(s)
            labels.append(f"{h.labels[w]}{g.labels[a]}")
    return _from_adjacency("product", 0, 0, labels, adj)


# --- structure ---------------------------------------------------------------


def corner_vertices(spec: GraphSpec) -> list[VertexWord]:
    if spec.family != SIERPINSKI:
        raise ParameterError("corner vertices are defined for the sierpinski family")
    return [VertexWord((i,) * spec.n, spec.m) for i in range(spec.m)]


def corner_index(i: int, n: int, m: int) -> int:
    return i * (m**n - 1) // (m - 1)


def km_decomposition(spec: GraphSpec) -> list[list[VertexWord]]:
    """The m^(n-1) disjoint m-cliques (words sharing all but the last digit).

    Raises DefectError if some triangle of the materialized graph escapes
    them, which would contradict uniqueness of the decomposition.
    """
    from .errors import DefectError

    if spec.family != SIERPINSKI:
        raise ParameterError("the K_m-decomposition is defined for the sierpinski family")
    n, m = spec.n, spec.m
    cliques = []
    for head in itertools.product(range(m), repeat=n - 1):
        cliques.append([VertexWord(head + (d,), m) for d in range(m)])
    if m**n <= MATERIALIZE_LIMIT:
        g = sierpinski_graph(n, m)
        nb = [set(a) for a in g.adjacency]
        for u, v in g.edges:
            for w in nb[u] & nb[v]:
                if not (u // m == v // m == w // m):
                    raise DefectError(f"triangle {u},{v},{w} not inside a K_m block")
    return cliques


# --- export ------------------------------------------------------------------


def format_edge_list(graph: Graph) -> str:
    """Edge-list text: header line, then one Lex-sorted edge per line."""
    rows = sorted(tuple(sorted((graph.labels[u], graph.labels[v]))) for u, v in graph.edges)
    buf = io.StringIO()
    buf.write(f"# family={graph.family} n={graph.n} m={graph.m}\n")
    for a, b in rows:
        buf.write(f"{a} {b}\n")
    return buf.getvalue()


def parse_edge_list(text: str) -> tuple[dict, list[tuple[str, str]]]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# "):
        raise ParameterError("edge list is missing its header line")
    header = dict(tok.split("=", 1) for tok in lines[0][2:].split())
    edges = [tuple(line.split()) for line in lines[1:] if line.strip()]
    return header, edges


def mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for v in indices:
        mask |= 1 << v
    return mask
