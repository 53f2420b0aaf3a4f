"""The stabilization order, its components, ideals and derived networks.

For i < j, a word v lies below its transposed image (ij)v when, among the
positions holding i or j, the first one holds i.  Equivalently y_i(v) > y_j(v)
in the embedding, so the lower element is on the chamber side of the
reflection.  The order is the transitive closure of these relations over all
transpositions.  Restricting to adjacent transpositions gives a strictly
weaker order (11 ideals instead of 9 on the two-digit component of S(2,3)),
so all pairs are used; stable sets are then exactly the ideals.

Elements are vertex indices (Lex ranks) and sets are int bitmasks, matching
`eip.VertexSet`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .errors import BudgetExceeded, DefectError, ParameterError
from .graphs import (
    QUOTIENT,
    SIERPINSKI,
    Graph,
    embed_digits,
    index_to_word,
    quotient_graph,
    word_string,
    word_to_index,
)

ELEMENT_LIMIT = 10**6
DEFAULT_IDEAL_CAP = 10**6


def transpose_word(v: Sequence[int], i: int, j: int) -> tuple[int, ...]:
    return tuple(j if d == i else i if d == j else d for d in v)


def lies_below_image(v: Sequence[int], i: int, j: int) -> bool:
    """True when v < (ij)v, i.e. the first of i, j occurring in v is i."""
    for d in v:
        if d == i:
            return True
        if d == j:
            return False
    return False


def chamber_minimum(v: Sequence[int]) -> tuple[int, ...]:
    """Minimum of v's component: digits relabelled in order of first occurrence."""
    relabel: dict[int, int] = {}
    for d in v:
        if d not in relabel:
            relabel[d] = len(relabel)
    return tuple(relabel[d] for d in v)


def in_chamber(y: Sequence[int]) -> bool:
    return all(y[k] >= y[k + 1] for k in range(len(y) - 1))


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind."""

    @lru_cache(maxsize=None)
    def s(a: int, b: int) -> int:
        if a == b:
            return 1
        if b == 0 or b > a:
            return 0
        return b * s(a - 1, b) + s(a - 1, b - 1)

    return s(n, k)


def stirling_sum(n: int, m: int) -> int:
    return sum(stirling2(n, k) for k in range(1, m + 1))


@dataclass(frozen=True)
class Ideal:
    """A down-closed set of poset elements, as a bitmask over element indices."""

    mask: int

    @property
    def size(self) -> int:
        return bin(self.mask).count("1")

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(r for r in range(self.mask.bit_length()) if self.mask >> r & 1)


@dataclass(frozen=True)
class StabOrder:
    """Stabilization order on the vertices of S(n,m) or of the quotient S[n,m].

    ``relations`` holds every generating pair (lower, upper, (i, j)); ``covers``
    is its transitive reduction.  ``components`` list element indices in a
    linear extension (smallest first) and ``down`` maps every element to the
    mask of elements strictly below it.
    """

    family: str
    n: int
    m: int
    labels: tuple[str, ...]
    relations: tuple[tuple[int, int, tuple[int, int]], ...]
    covers: tuple[tuple[int, int, tuple[int, int]], ...]
    components: tuple[tuple[int, ...], ...]
    down: tuple[int, ...] = field(repr=False)
    component_id: tuple[int, ...] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.labels)

    def less(self, u: int, v: int) -> bool:
        return bool(self.down[v] >> u & 1)

    def component_of(self, v: int) -> tuple[int, ...]:
        return self.components[self.component_id[v]]

    def minimum(self, component: int) -> int:
        return self.components[component][0]

    def minimal_elements(self, component: int) -> list[int]:
        return [v for v in self.components[component] if self.down[v] == 0]

    def is_ideal(self, mask: int) -> bool:
        rest = mask
        v = 0
        while rest:
            if rest & 1 and self.down[v] & ~mask:
                return False
            rest >>= 1
            v += 1
        return True

    def down_closure(self, mask: int) -> int:
        out = mask
        for v in range(mask.bit_length()):
            if mask >> v & 1:
                out |= self.down[v]
        return out

    def component_mask(self, component: int) -> int:
        mask = 0
        for v in self.components[component]:
            mask |= 1 << v
        return mask

    def inventory(self) -> list[dict]:
        """JSON-ready summary of the components."""
        out = []
        for c, comp in enumerate(self.components):
            out.append(
                {
                    "index": c,
                    "size": len(comp),
                    "minimum": self.labels[comp[0]],
                    "elements": [self.labels[v] for v in comp],
                }
            )
        return out

    def inventory_json(self) -> str:
        return json.dumps(
            {"family": self.family, "n": self.n, "m": self.m, "components": self.inventory()},
            indent=2,
            sort_keys=True,
        )

    def hasse_dot(self, component: int | None = None) -> str:
        keep = set(range(self.size)) if component is None else set(self.components[component])
        lines = ["digraph stab_order {", "  rankdir=BT;"]
        for v in sorted(keep):
            lines.append(f'  v{v} [label="{self.labels[v]}"];')
        for u, v, (i, j) in self.covers:
            if u in keep and v in keep:
                lines.append(f'  v{u} -> v{v} [label="({i}{j})"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _finish_order(family, n, m, labels, relations, potential) -> StabOrder:
    N = len(labels)
    parent = list(range(N))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    preds: list[list[tuple[int, tuple[int, int]]]] = [[] for _ in range(N)]
    for u, v, t in relations:
        preds[v].append((u, t))
        a, b = find(u), find(v)
        if a != b:
            parent[max(a, b)] = min(a, b)

    order = sorted(range(N), key=lambda v: (potential[v], v))
    down = [0] * N
    for v in order:
        acc = 0
        for u, _ in preds[v]:
            if potential[u] >= potential[v]:
                raise DefectError(f"relation {labels[u]} < {labels[v]} does not raise the potential")
            acc |= down[u] | (1 << u)
        down[v] = acc

    covers = []
    for v in range(N):
        seen = set()
        for u, t in preds[v]:
            if u in seen:
                continue
            seen.add(u)
            if not any(down[w] >> u & 1 for w, _ in preds[v] if w != u):
                covers.append((u, v, t))
    covers.sort()

    groups: dict[int, list[int]] = {}
    for v in order:
        groups.setdefault(find(v), []).append(v)
    comps = sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])
    comp_id = [0] * N
    for c, g in enumerate(comps):
        for v in g:
            comp_id[v] = c
    return StabOrder(family, n, m, tuple(labels), tuple(sorted(relations)), tuple(covers), tuple(comps), tuple(down), tuple(comp_id))


def build_stab_order(n: int, m: int) -> StabOrder:
    """Stabilization order on the m^n words of S(n,m).

    Every component's minimum is checked to be its unique element inside the
    fundamental chamber of the embedding.
    """
    if n < 1 or m < 1:
        raise ParameterError("need n >= 1 and m >= 1")
    N = m**n
    if N > ELEMENT_LIMIT:
        raise BudgetExceeded(f"S({n},{m}) has {N} vertices, above the {ELEMENT_LIMIT} element limit")
    words = [index_to_word(r, n, m) for r in range(N)]
    relations = []
    for r, v in enumerate(words):
        for i in range(m):
            for j in range(i + 1, m):
                if lies_below_image(v, i, j):
                    relations.append((r, word_to_index(transpose_word(v, i, j), m), (i, j)))
    ys = [embed_digits(v, m) for v in words]
    potential = [sum(k * y for k, y in enumerate(yv)) for yv in ys]
    order = _finish_order(SIERPINSKI, n, m, [word_string(v) for v in words], relations, potential)
    for comp in order.components:
        lo = comp[0]
        if words[lo] != chamber_minimum(words[lo]):
            raise DefectError(f"component minimum {word_string(words[lo])} is not the relabelled word")
        inside = [v for v in comp if in_chamber(ys[v])]
        if inside != [lo]:
            raise DefectError(f"chamber elements of component {word_string(words[lo])}: {inside}")
        if any(order.down[v] & 1 << lo == 0 for v in comp if v != lo):
            raise DefectError(f"component of {word_string(words[lo])} has no unique minimum")
    return order


def build_quotient_stab_order(n: int, m: int, graph: Graph | None = None) -> StabOrder:
    """Stabilization order on the classes of S[n,m].

    Class c lies below its image under (ij) when the summed embedding
    coordinates of its members satisfy sum(y_i) > sum(y_j).
    """
    g = quotient_graph(n, m) if graph is None else graph
    if g.family != QUOTIENT:
        raise ParameterError("expected a quotient graph")
    member_of = {}
    for c, members in enumerate(g.members):
        for w in members:
            member_of[w] = c
    relations = []
    ysum = []
    for members in g.members:
        tot = [0] * m
        for w in members:
            for k, y in enumerate(embed_digits(index_to_word(w, n, m), m)):
                tot[k] += y
        ysum.append(tot)
    for c, members in enumerate(g.members):
        for i in range(m):
            for j in range(i + 1, m):
                images = {member_of[word_to_index(transpose_word(index_to_word(w, n, m), i, j), m)] for w in members}
                if len(images) != 1:
                    raise DefectError(f"transposition ({i}{j}) splits class {g.labels[c]}")
                (d,) = images
                if d == c:
                    continue
                if ysum[c][i] == ysum[c][j]:
                    raise DefectError(f"class {g.labels[c]} has no definite side for ({i}{j})")
                below = ysum[c][i] > ysum[c][j]
                if below:
                    relations.append((c, d, (i, j)))
    potential = [sum(k * y for k, y in enumerate(t)) for t in ysum]
    return _finish_order(QUOTIENT, n, m, list(g.labels), relations, potential)


def count_components(n: int, m: int, *, structural: bool = True) -> int:
    """Component count; ``structural=True`` builds the order and cross-checks the Stirling sum."""
    expected = stirling_sum(n, m)
    if not structural:
        return expected
    got = len(build_stab_order(n, m).components)
    if got != expected:
        raise DefectError(f"S({n},{m}): {got} components, Stirling sum gives {expected}")
    return got


# --- ideals ------------------------------------------------------------------


def _component_ideals(order: StabOrder, comp: Sequence[int], cap: int) -> list[int]:
    """Down-sets of one component as global masks."""
    found = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for mask in frontier:
            for v in comp:
                if not mask >> v & 1 and order.down[v] & ~mask == 0:
                    new = mask | 1 << v
                    if new not in found:
                        found.add(new)
                        nxt.append(new)
                        if len(found) > cap:
                            raise BudgetExceeded(f"more than {cap} ideals", partial=len(found))
        frontier = nxt
    return list(found)


def _ideal_sort_key(mask: int):
    members = tuple(r for r in range(mask.bit_length()) if mask >> r & 1)
    return (len(members), members)


def enumerate_ideals(order: StabOrder, component: int | None = None, cap: int = DEFAULT_IDEAL_CAP) -> list[Ideal]:
    """All ideals of one component, or of the whole order, smallest first.

    Whole-order ideals are unions of one ideal per component.  Output is sorted
    by size and then by the sorted member list, so it is deterministic.
    """
    if component is not None:
        masks = _component_ideals(order, order.components[component], cap)
    else:
        per = [_component_ideals(order, comp, cap) for comp in order.components]
        total = 1
        for p in per:
            total *= len(p)
        if total > cap:
            raise BudgetExceeded(f"{total} ideals exceed the cap of {cap}", partial=0)
        masks = [0]
        for p in per:
            masks = [a | b for a in masks for b in p]
    return [Ideal(mk) for mk in sorted(masks, key=_ideal_sort_key)]


def count_ideals(order: StabOrder, component: int | None = None, cap: int = DEFAULT_IDEAL_CAP) -> int:
    if component is not None:
        return len(_component_ideals(order, order.components[component], cap))
    total = 1
    for comp in order.components:
        total *= len(_component_ideals(order, comp, cap))
    return total


def find_component(order: StabOrder, label: str) -> int:
    """Index of the component containing the element labelled ``label``."""
    try:
        v = order.labels.index(label)
    except ValueError:
        raise ParameterError(f"no element labelled {label!r}") from None
    return order.component_id[v]


# --- derived network ---------------------------------------------------------


@dataclass
class DerivedNetwork:
    """Hasse diagram of the ideals, weighted by boundary size."""

    nodes: list[int]
    weights: list[int]
    arcs: list[tuple[int, int]]

    def level_minima(self) -> dict[int, int]:
        best: dict[int, int] = {}
        for mask, w in zip(self.nodes, self.weights):
            k = bin(mask).count("1")
            best[k] = min(best.get(k, w), w)
        return best

    def optimal_nodes(self) -> list[int]:
        """Indices of nodes whose weight is minimal among ideals of their size."""
        best = self.level_minima()
        return [a for a, (mask, w) in enumerate(zip(self.nodes, self.weights)) if w == best[bin(mask).count("1")]]

    def min_weight_path(self) -> tuple[int, list[int]]:
        """Monotone path from the empty ideal to the full one with least total weight."""
        n = len(self.nodes)
        succ: list[list[int]] = [[] for _ in range(n)]
        for a, b in self.arcs:
            succ[a].append(b)
        start = self.nodes.index(0)
        end = max(range(n), key=lambda a: bin(self.nodes[a]).count("1"))
        dist = {start: self.weights[start]}
        prev: dict[int, int] = {}
        for a in sorted(range(n), key=lambda a: _ideal_sort_key(self.nodes[a])):
            if a not in dist:
                continue
            for b in sorted(succ[a]):
                d = dist[a] + self.weights[b]
                if b not in dist or d < dist[b]:
                    dist[b] = d
                    prev[b] = a
        path = [end]
        while path[-1] != start:
            path.append(prev[path[-1]])
        return dist[end], path[::-1]

    def nested_chain(self) -> list[int] | None:
        """A path from empty to full through optimal nodes only, if one exists."""
        ok = set(self.optimal_nodes())
        n = len(self.nodes)
        succ: list[list[int]] = [[] for _ in range(n)]
        for a, b in self.arcs:
            succ[a].append(b)
        start = self.nodes.index(0)
        end = max(range(n), key=lambda a: bin(self.nodes[a]).count("1"))
        prev = {start: None}
        for a in sorted(range(n), key=lambda a: _ideal_sort_key(self.nodes[a])):
            if a not in prev or a not in ok:
                continue
            for b in sorted(succ[a]):
                if b in ok and b not in prev:
                    prev[b] = a
        if end not in prev:
            return None
        path = [end]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        return path[::-1]

    def to_dot(self, labels: Sequence[str] | None = None) -> str:
        opt = set(self.optimal_nodes())
        lines = ["digraph derived_network {", "  rankdir=BT;"]
        for a, (mask, w) in enumerate(zip(self.nodes, self.weights)):
            size = bin(mask).count("1")
            shape = "doublecircle" if a in opt else "circle"
            lines.append(f'  i{a} [label="{size}:{w}", shape={shape}];')
        for a, b in self.arcs:
            lines.append(f"  i{a} -> i{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def derived_network(order: StabOrder, graph: Graph, cap: int = 10**5, weight=None) -> DerivedNetwork:
    """Ideals of ``order`` weighted by their boundary in ``graph``.

    ``weight`` overrides the weight function (mask -> int), e.g. for decorated
    boundaries.
    """
    if graph.num_vertices != order.size:
        raise ParameterError("graph and order have different vertex counts")
    from .eip import cut_size

    ideals = [i.mask for i in enumerate_ideals(order, cap=cap)]
    index = {mk: a for a, mk in enumerate(ideals)}
    nbr = graph.nbr_masks
    weights = [weight(mk) if weight else cut_size(mk, nbr) for mk in ideals]
    arcs = []
    for a, mk in enumerate(ideals):
        for v in range(order.size):
            if not mk >> v & 1:
                b = index.get(mk | 1 << v)
                if b is not None:
                    arcs.append((a, b))
    return DerivedNetwork(ideals, weights, arcs)
