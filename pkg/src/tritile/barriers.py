"""Detection and certification of tiling obstructions.

A divisibility barrier is an ordered partition (A, B) with |A| = 1 and
|B| = 2 mod 3, no B-triangles and no two vertex-disjoint A-triangles; it
forces every tiling to leave vertices uncovered by a counting obstruction.
A space barrier is a triangle-free set of more than 2n/3 vertices; slack r
forces at least 3r uncovered vertices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotAPartition, SolverBudget
from .graphs import Graph, bit_list, enumerate_triangles, greedy_triangle_free_set, triangle_mask
from .tiling import max_tiling_exact


@dataclass(frozen=True)
class DivisibilityBarrier:
    A: int
    B: int
    a_triangle_count: int  # number of A-triangles found (any two intersect)
    disjoint_a_pairs: int  # always 0 for a confirmed barrier

    def to_json(self) -> dict:
        return {
            "kind": "divisibility",
            "A": bit_list(self.A),
            "B": bit_list(self.B),
            "slack": None,
            "verified": True,
        }


@dataclass(frozen=True)
class SpaceBarrier:
    A: int
    slack: Fraction  # |A| - 2n/3 > 0

    def to_json(self) -> dict:
        return {
            "kind": "space",
            "A": bit_list(self.A),
            "B": None,
            "slack": [self.slack.numerator, self.slack.denominator],
            "verified": True,
        }


@dataclass(frozen=True)
class BarrierRefutation:
    """Why the candidate is not a barrier."""

    reason: str
    witness: tuple | None = None

    def to_json(self) -> dict:
        return {"kind": "refutation", "reason": self.reason, "witness": self.witness}


def _triangle_types(g: Graph, A: int, B: int):
    """Split triangles by side counts: returns (A-triangles, B-triangles)."""
    a_tris, b_tris = [], []
    for t in enumerate_triangles(g):
        in_a = (triangle_mask(t) & A).bit_count()
        if in_a == 2:
            a_tris.append(t)
        elif in_a == 1:
            b_tris.append(t)
    return a_tris, b_tris


def check_divisibility_barrier(g: Graph, A: int, B: int):
    """Verify the ordered pair (A, B) as a divisibility barrier or refute it.

    Order matters: the size congruences are |A| = 1, |B| = 2 (mod 3), there
    must be no B-triangle, and no two vertex-disjoint A-triangles (decided
    exactly by a pairwise disjointness scan with early exit).
    """
    if A & B or (A | B) != g.vertex_mask():
        raise NotAPartition("{A, B} must partition the vertex set")
    if A.bit_count() % 3 != 1:
        return BarrierRefutation(reason=f"|A| = {A.bit_count()} is not 1 mod 3")
    if B.bit_count() % 3 != 2:
        return BarrierRefutation(reason=f"|B| = {B.bit_count()} is not 2 mod 3")
    a_tris, b_tris = _triangle_types(g, A, B)
    if b_tris:
        return BarrierRefutation(reason="B-triangle exists", witness=b_tris[0])
    masks = [triangle_mask(t) for t in a_tris]
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if not masks[i] & masks[j]:
                return BarrierRefutation(
                    reason="two disjoint A-triangles exist",
                    witness=(a_tris[i], a_tris[j]),
                )
    return DivisibilityBarrier(A, B, len(a_tris), 0)


def check_space_barrier(g: Graph, A: int):
    """Verify A as a space barrier: |A| > 2n/3 and G[A] triangle-free."""
    slack = Fraction(3 * A.bit_count() - 2 * g.n, 3)
    if slack <= 0:
        return BarrierRefutation(reason=f"|A| = {A.bit_count()} <= 2n/3")
    sub, verts = g.induced(A)
    tris = enumerate_triangles(sub)
    if tris:
        u, v, w = tris[0]
        return BarrierRefutation(
            reason="A spans a triangle", witness=(verts[u], verts[v], verts[w])
        )
    return SpaceBarrier(A, slack)


def search_space_barrier(g: Graph, seeds: int = 20, seed: int = 0):
    """Heuristic search for a space barrier by growing triangle-free sets.

    Returns a SpaceBarrier or None. Absence of output is NOT a proof of
    absence; finding a maximum triangle-free induced subgraph is hard.
    """
    rng = random.Random(seed)
    best = greedy_triangle_free_set(g, seeds=seeds, rng=rng)
    if 3 * best.bit_count() > 2 * g.n:
        result = check_space_barrier(g, best)
        if isinstance(result, SpaceBarrier):
            return result
    return None


@dataclass(frozen=True)
class BarrierConsequence:
    """Exact-solver confirmation of the coverage deficit a barrier forces."""

    kind: str
    predicted_min_uncovered: int
    solver_uncovered: int
    agrees: bool

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "predicted_min_uncovered": self.predicted_min_uncovered,
            "solver_uncovered": self.solver_uncovered,
            "agrees": self.agrees,
        }


def barrier_implies_no_perfect_tiling(
    g: Graph, barrier, budget: float | None = None
) -> BarrierConsequence:
    """Confirm a validated barrier against the exact solver.

    A divisibility barrier forces an imperfect tiling; a space barrier with
    slack r forces at least ceil(3r) uncovered vertices.
    """
    tiling, optimal = max_tiling_exact(g, budget=budget)
    if not optimal:
        raise SolverBudget("exact solver did not finish within budget")
    uncovered = g.n - tiling.covered_count()
    if isinstance(barrier, DivisibilityBarrier):
        predicted = 1  # not perfect
        return BarrierConsequence("divisibility", predicted, uncovered, uncovered >= 1)
    if isinstance(barrier, SpaceBarrier):
        three_r = 3 * barrier.slack
        predicted = int(three_r) if three_r.denominator == 1 else int(three_r) + 1
        return BarrierConsequence("space", predicted, uncovered, uncovered >= predicted)
    raise TypeError("barrier must be a validated DivisibilityBarrier or SpaceBarrier")
