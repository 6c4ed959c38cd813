"""Bipartite matching primitives.

A bipartite graph is given as left-vertex adjacency bitmasks over right
indices 0..r-1. Hopcroft-Karp gives maximum matchings; on top of it sits the
robust-matchability test: every |Y|-subset of X must match perfectly onto Y.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .errors import SideMismatch
from .graphs import bits

INF = -1


def hopcroft_karp(adj: Sequence[int], n_right: int) -> tuple[int, list[int], list[int]]:
    """Maximum matching of a bipartite graph.

    adj[i] is the bitmask of right-neighbors of left vertex i. Returns
    (size, match_left, match_right) where match_left[i] is the right partner
    of left i or -1, and symmetrically for match_right.
    """
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0] * n_left

    def bfs() -> bool:
        q = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = INF
        found = False
        while q:
            u = q.popleft()
            for v in bits(adj[u]):
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in bits(adj[u]):
            w = match_r[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    size = 0
    while bfs():
        for u in range(n_left):
            if match_l[u] == -1 and dfs(u):
                size += 1
    return size, match_l, match_r


def has_matching_saturating_left(adj: Sequence[int], n_right: int) -> bool:
    size, _, _ = hopcroft_karp(adj, n_right)
    return size == len(adj)


def robustly_matchable(adj: Sequence[int], n_right: int) -> bool:
    """Whether every |Y|-subset of the left side X matches perfectly onto Y.

    adj[i] is the Y-neighborhood mask of x_i; requires |X| >= |Y|. Equivalent
    to the surplus condition |N(Y')| >= |Y'| + |X| - |Y| for every nonempty
    Y' subseteq Y, which is decided by one Y-saturating matching test per
    y in Y on the graph where y is replaced by |X| - |Y| + 1 clones.
    """
    n_left = len(adj)
    if n_left < n_right:
        raise SideMismatch(f"|X|={n_left} < |Y|={n_right}")
    if n_right == 0:
        return True
    surplus = n_left - n_right
    # right-side adjacency as masks over left indices
    radj = [0] * n_right
    for i, a in enumerate(adj):
        for v in bits(a):
            radj[v] |= 1 << i
    # plain Hall for Y itself (the y-clone tests below subsume it, but this
    # rejects cheap failures like isolated Y-vertices immediately)
    for y in range(n_right):
        if radj[y] == 0:
            return False
    for y in range(n_right):
        cloned = [radj[v] for v in range(n_right)] + [radj[y]] * surplus
        if not has_matching_saturating_left(cloned, n_left):
            return False
    return True
