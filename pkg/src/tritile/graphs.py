"""Immutable bitset graphs, triangle enumeration and independence bounds.

Vertices are dense integers 0..n-1 and every vertex set is a Python int
bitmask, so neighborhood intersections are single word-parallel ANDs. All
graph objects are immutable after construction; derived views copy.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import EmptyGraph, ParseError, SameVertex

Triangle = tuple[int, int, int]


def mask_of(vertices: Iterable[int]) -> int:
    """Bitmask of a vertex collection."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Iterate the set bits of a mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_list(mask: int) -> list[int]:
    return list(bits(mask))


class Graph:
    """Undirected simple graph with per-vertex neighbor bitmasks."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: Sequence[int]):
        if len(adj) != n:
            raise ValueError("adjacency length must equal n")
        full = (1 << n) - 1
        for v, a in enumerate(adj):
            if a & (1 << v):
                raise ValueError(f"loop at vertex {v}")
            if a & ~full:
                raise ValueError(f"neighbor index out of range at vertex {v}")
        for v, a in enumerate(adj):
            for u in bits(a):
                if not adj[u] & (1 << v):
                    raise ValueError(f"asymmetric adjacency {v}->{u}")
        self.n = n
        self.adj = tuple(adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop edge ({u},{v})")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n)

    @classmethod
    def complete_multipartite(cls, sizes: Sequence[int]) -> "Graph":
        n = sum(sizes)
        adj = [0] * n
        start = 0
        full = (1 << n) - 1
        for s in sizes:
            part = ((1 << s) - 1) << start
            outside = full & ~part
            for v in range(start, start + s):
                adj[v] = outside
            start += s
        return cls(n, adj)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] & (1 << v))

    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges (u, v) with u < v in lexicographic order."""
        for u in range(self.n):
            higher = self.adj[u] >> (u + 1)
            for off in bits(higher):
                yield u, u + 1 + off

    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def induced(self, mask: int) -> tuple["Graph", list[int]]:
        """Induced subgraph on the masked vertices plus old-index mapping."""
        verts = bit_list(mask)
        index = {v: i for i, v in enumerate(verts)}
        adj = [0] * len(verts)
        for i, v in enumerate(verts):
            for u in bits(self.adj[v] & mask):
                adj[i] |= 1 << index[u]
        return Graph(len(verts), adj), verts

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [full & ~self.adj[v] & ~(1 << v) for v in range(self.n)])

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"


@dataclass(frozen=True)
class IndependenceBound:
    """Witnessed bounds on the independence number.

    lower is always attained by `witness`; exact means lower == upper was
    proved, not merely observed.
    """

    lower: int
    upper: int
    exact: bool
    witness: int  # bitmask of an independent set of size `lower`


def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise EmptyGraph("minimum degree of the empty-vertex graph is undefined")
    return min(g.degree(v) for v in range(g.n))


def common_neighbors(g: Graph, u: int, v: int) -> int:
    if u == v:
        raise SameVertex(f"common_neighbors requires distinct vertices, got {u}")
    return g.adj[u] & g.adj[v]


def enumerate_triangles(g: Graph) -> list[Triangle]:
    """All triangles (u, v, w) with u < v < w, lexicographically sorted.

    Per edge u < v, the third vertices are the common neighbors above v.
    """
    out: list[Triangle] = []
    for u in range(g.n):
        above_u = g.adj[u] >> (u + 1)
        for off in bits(above_u):
            v = u + 1 + off
            both = (g.adj[u] & g.adj[v]) >> (v + 1)
            for off2 in bits(both):
                out.append((u, v, v + 1 + off2))
    return out


def triangle_mask(t: Triangle) -> int:
    u, v, w = t
    return (1 << u) | (1 << v) | (1 << w)


def is_triangle(g: Graph, t: Triangle) -> bool:
    u, v, w = t
    return u < v < w and g.has_edge(u, v) and g.has_edge(u, w) and g.has_edge(v, w)


def is_independent(g: Graph, mask: int) -> bool:
    for v in bits(mask):
        if g.adj[v] & mask:
            return False
    return True


def greedy_independent_set(g: Graph, order: Sequence[int] | None = None) -> int:
    """Greedy independent set (mask); default order is ascending degree."""
    if order is None:
        order = sorted(range(g.n), key=lambda v: (g.degree(v), v))
    taken = 0
    blocked = 0
    for v in order:
        if not blocked & (1 << v):
            taken |= 1 << v
            blocked |= (1 << v) | g.adj[v]
    return taken


def greedy_clique_cover(g: Graph) -> list[int]:
    """Cover V(G) by cliques greedily; len() upper-bounds the independence number.

    Every clique meets an independent set in at most one vertex.
    """
    remaining = g.vertex_mask()
    cliques: list[int] = []
    while remaining:
        v = (remaining & -remaining).bit_length() - 1
        clique = 1 << v
        cand = g.adj[v] & remaining
        while cand:
            u = (cand & -cand).bit_length() - 1
            clique |= 1 << u
            cand &= g.adj[u]
        cliques.append(clique)
        remaining &= ~clique
    return cliques


def _color_bound(g: Graph, cand: int) -> list[tuple[int, int]]:
    """Greedy coloring of G[cand]; returns (vertex, colors-used-so-far) in
    an order where the second coordinate upper-bounds the independent set
    extendable from the prefix. Used for branch-and-bound pruning."""
    # Classes are cliques of the complement: within a class, vertices are
    # pairwise adjacent in the complement, i.e. pairwise NON-adjacent in G is
    # false. For MIS pruning we color G's vertices so each class is a clique
    # in G: an independent set takes at most one vertex per class.
    order: list[tuple[int, int]] = []
    remaining = cand
    color = 0
    while remaining:
        color += 1
        # build one clique class greedily
        avail = remaining
        cls = 0
        while avail:
            v = (avail & -avail).bit_length() - 1
            cls |= 1 << v
            avail &= g.adj[v]
        remaining &= ~cls
        for v in bits(cls):
            order.append((v, color))
    return order


def independence_number(
    g: Graph,
    budget: float | None = None,
    exact_limit: int = 50,
) -> IndependenceBound:
    """Independence number, exact when feasible.

    Runs branch-and-bound with a clique-cover bound for n <= exact_limit
    (subject to the wall-clock budget, in seconds); otherwise returns the
    greedy lower bound and clique-cover upper bound with exact=False.
    """
    if g.n == 0:
        return IndependenceBound(0, 0, True, 0)
    greedy = greedy_independent_set(g)
    upper = len(greedy_clique_cover(g))
    best = [greedy.bit_count(), greedy]
    if g.n > exact_limit:
        return IndependenceBound(best[0], max(upper, best[0]), False, best[1])

    deadline = None if budget is None else time.monotonic() + budget
    timed_out = [False]

    def expand(cand: int, current_mask: int, current_size: int) -> None:
        if timed_out[0]:
            return
        if deadline is not None and time.monotonic() > deadline:
            timed_out[0] = True
            return
        order = _color_bound(g, cand)
        # iterate in reverse: vertices with the highest color bound first
        local_cand = cand
        for v, colors in reversed(order):
            if current_size + colors <= best[0]:
                return
            local_cand &= ~(1 << v)
            new_mask = current_mask | (1 << v)
            new_size = current_size + 1
            if new_size > best[0]:
                best[0] = new_size
                best[1] = new_mask
            nxt = local_cand & ~g.adj[v]
            if nxt:
                expand(nxt, new_mask, new_size)

    expand(g.vertex_mask(), 0, 0)
    if timed_out[0]:
        return IndependenceBound(best[0], max(upper, best[0]), False, best[1])
    return IndependenceBound(best[0], best[0], True, best[1])


def _components_of(adj: Sequence[int], n: int) -> list[int]:
    seen = 0
    comps = []
    for v in range(n):
        if seen >> v & 1:
            continue
        frontier = 1 << v
        comp = 0
        while frontier:
            comp |= frontier
            nxt = 0
            for u in bits(frontier):
                nxt |= adj[u]
            frontier = nxt & ~comp
        comps.append(comp)
        seen |= comp
    return comps


def has_clique(g: Graph, k: int, budget: float | None = None) -> bool | None:
    """Whether G contains a k-clique; None if the budget ran out first.

    A k-clique is an independent k-set of the complement, which splits over
    the complement's connected components (one summand each), so each
    component is solved by the exact independence search.
    """
    if k <= 0:
        return True
    if k == 1:
        return g.n >= 1
    deadline = None if budget is None else time.monotonic() + budget
    comp = g.complement()
    total = 0
    comps = sorted(_components_of(comp.adj, comp.n), key=lambda m: m.bit_count())
    remaining_ub = sum(min(m.bit_count(), k) for m in comps)
    for mask in comps:
        remaining_ub -= min(mask.bit_count(), k)
        sub, _ = comp.induced(mask)
        left = None if deadline is None else deadline - time.monotonic()
        if left is not None and left <= 0:
            return None
        bound = independence_number(sub, budget=left, exact_limit=sub.n)
        if not bound.exact:
            return None
        total += bound.lower
        if total >= k:
            return True
        if total + remaining_ub < k:
            return False
    return total >= k


def greedy_triangle_free_set(g: Graph, seeds: int = 8, rng: random.Random | None = None) -> int:
    """Heuristically grow a large vertex set whose induced subgraph is
    triangle-free; returns the best mask found across seed orders."""
    rng = rng or random.Random(0)
    best = 0
    orders = [sorted(range(g.n), key=lambda v: (g.degree(v), v))]
    for _ in range(max(0, seeds - 1)):
        perm = list(range(g.n))
        rng.shuffle(perm)
        orders.append(perm)
    for order in orders:
        taken = 0
        for v in order:
            # v joins unless two of its neighbors inside the set are adjacent
            nb = g.adj[v] & taken
            ok = True
            m = nb
            while m:
                low = m & -m
                u = low.bit_length() - 1
                m ^= low
                if g.adj[u] & nb:
                    ok = False
                    break
            if ok:
                taken |= 1 << v
        if taken.bit_count() > best.bit_count():
            best = taken
    return best


def gnp(n: int, p: float, rng: random.Random) -> Graph:
    """Erdos-Renyi G(n, p) from the supplied RNG."""
    adj = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return Graph(n, adj)


def parse_edge_list(text: str) -> Graph:
    """Parse the toolkit's edge-list format.

    First line "n m"; then m lines "u v" with 0 <= u < v < n. Duplicate and
    loop lines are rejected with their line number.
    """
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "missing header line 'n m'")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(1, f"expected 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(1, f"expected integers in header, got {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise ParseError(1, "n and m must be non-negative")
    adj = [0] * n
    count = 0
    for idx, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 2:
            raise ParseError(idx, f"expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(idx, f"expected integers, got {raw!r}") from None
        if u == v:
            raise ParseError(idx, f"loop edge ({u},{v})")
        if not (0 <= u < v < n):
            raise ParseError(idx, f"edge ({u},{v}) violates 0 <= u < v < n={n}")
        if adj[u] & (1 << v):
            raise ParseError(idx, f"duplicate edge ({u},{v})")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        count += 1
    if count != m:
        raise ParseError(len(lines), f"header declared m={m} edges but found {count}")
    return Graph(n, adj)


def format_edge_list(g: Graph) -> str:
    rows = [f"{g.n} {g.edge_count()}"]
    rows.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(rows) + "\n"
