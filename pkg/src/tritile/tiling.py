"""Triangle-tiling machinery.

Contains the exact maximum-tiling solver (branch and bound over the triangle
hypergraph), the two greedy regular-pair tiling procedures, the tripartite
balancing loop, the link-graph builder and the robust-matchability test.

The greedy procedures re-enact proofs that assume a parameter hierarchy
1/n << gamma << eps << phi, eps' << d << omega. At finite n those hypotheses
have no exact meaning, so the procedures attempt the construction and raise
StarvedStep when no admissible triangle exists, rather than pre-verifying
asymptotics. All tie-breaking is lowest-vertex-index, then lexicographic.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    DivisibilityViolation,
    NotAMatching,
    NotAPartition,
    StarvedStep,
)
from .graphs import (
    Graph,
    Triangle,
    bit_list,
    bits,
    enumerate_triangles,
    greedy_triangle_free_set,
    is_triangle,
    mask_of,
    triangle_mask,
)
from .matching import robustly_matchable


@dataclass(frozen=True)
class TriangleTiling:
    """Vertex-disjoint triangles with coverage accounting."""

    triangles: tuple[Triangle, ...]
    covered: int  # bitmask

    @classmethod
    def build(cls, g: Graph, triangles: Sequence[Triangle]) -> "TriangleTiling":
        covered = 0
        tris = tuple(sorted(tuple(sorted(t)) for t in triangles))
        for t in tris:
            if not is_triangle(g, t):
                raise ValueError(f"{t} is not a triangle of the host graph")
            tm = triangle_mask(t)
            if tm & covered:
                raise ValueError(f"{t} overlaps earlier triangles")
            covered |= tm
        return cls(tris, covered)

    @property
    def size(self) -> int:
        return len(self.triangles)

    def covered_count(self) -> int:
        return self.covered.bit_count()

    def is_perfect(self, g: Graph) -> bool:
        return self.covered_count() == g.n

    def to_json(self, optimal: bool | None = None, seed: int | None = None) -> dict:
        out: dict = {
            "triangles": [list(t) for t in self.triangles],
            "covered": self.covered_count(),
        }
        if optimal is not None:
            out["optimal"] = optimal
        if seed is not None:
            out["seed"] = seed
        return out


@dataclass(frozen=True)
class TilerParams:
    """Greedy-procedure fractions; mirrors the hierarchy eps << phi < eps'."""

    eps: float = 0.01
    phi: float = 0.1
    eps_prime: float = 0.3
    omega: float = 0.05

    def __post_init__(self):
        if not (0 < self.eps < 1):
            raise ValueError("eps must lie in (0,1)")
        if not (0 < self.phi < self.eps_prime < 1):
            raise ValueError("need 0 < phi < eps_prime < 1")
        if self.omega <= 0:
            raise ValueError("omega must be positive")


@dataclass(frozen=True)
class ABTilingSpec:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("triangle counts must be non-negative")


@dataclass
class ProcedureTrace:
    """Ordered log of a tiling procedure; replaying it against the host
    graph reproduces the output."""

    procedure: str
    meta: dict = field(default_factory=dict)
    steps: list[dict] = field(default_factory=list)

    def log(self, label: str, **data) -> None:
        entry = {"label": label}
        entry.update(data)
        self.steps.append(entry)

    def to_json(self) -> dict:
        return {"procedure": self.procedure, "meta": self.meta, "steps": self.steps}


def tiling_is_valid(g: Graph, t: TriangleTiling) -> bool:
    """Re-check disjointness and edge membership of every triangle."""
    covered = 0
    for tri in t.triangles:
        if not is_triangle(g, tri):
            return False
        tm = triangle_mask(tri)
        if tm & covered:
            return False
        covered |= tm
    return covered == t.covered


# ---------------------------------------------------------------------------
# exact maximum tiling


def _component_masks(g: Graph) -> list[int]:
    seen = 0
    comps = []
    for v in range(g.n):
        if seen >> v & 1:
            continue
        frontier = 1 << v
        comp = 0
        while frontier:
            comp |= frontier
            nxt = 0
            for u in bits(frontier):
                nxt |= g.adj[u]
            frontier = nxt & ~comp
        comps.append(comp)
        seen |= comp
    return comps


def _greedy_pack(tri_masks: list[int], order: Sequence[int]) -> list[int]:
    covered = 0
    sel = []
    for i in order:
        if not tri_masks[i] & covered:
            sel.append(i)
            covered |= tri_masks[i]
    return sel


class _ComponentSolver:
    """Branch and bound on one connected component.

    Branches on the uncovered vertex with the fewest available triangles.
    Upper bounds: floor(coverable/3), and |uncovered \\ F| for a heuristic
    triangle-free set F (every triangle needs a vertex outside F).
    """

    CHECK_EVERY = 512

    def __init__(self, g: Graph, comp_mask: int, tris: list[Triangle], deadline: float | None):
        self.comp_mask = comp_mask
        self.tris = tris
        self.tri_masks = [triangle_mask(t) for t in tris]
        self.vert_tris: dict[int, list[int]] = {v: [] for v in bits(comp_mask)}
        for i, tm in enumerate(self.tri_masks):
            for v in bits(tm):
                self.vert_tris[v].append(i)
        self.deadline = deadline
        self.timed_out = False
        self._tick = 0
        sub, verts = g.induced(comp_mask)
        tf_local = greedy_triangle_free_set(sub)
        self.tf_mask = mask_of(verts[i] for i in bits(tf_local))
        # incumbent: best of lexicographic and scarcest-vertex-first greedy
        lex = _greedy_pack(self.tri_masks, range(len(tris)))
        by_scarcity = sorted(
            range(len(tris)),
            key=lambda i: (min(len(self.vert_tris[v]) for v in self.tris[i]), i),
        )
        scarce = _greedy_pack(self.tri_masks, by_scarcity)
        self.best = max([lex, scarce], key=len)
        self.best_count = len(self.best)

    def _out_of_time(self) -> bool:
        if self.deadline is None:
            return False
        self._tick += 1
        if self._tick % self.CHECK_EVERY == 0 and time.monotonic() > self.deadline:
            self.timed_out = True
        return self.timed_out

    def solve(self) -> tuple[list[int], bool]:
        if not self.tris:
            return [], True
        self._dfs(0, 0, [])
        return self.best, not self.timed_out

    def _dfs(self, covered: int, skipped: int, chosen: list[int]) -> None:
        if self._out_of_time():
            return
        if len(chosen) > self.best_count:
            self.best_count = len(chosen)
            self.best = list(chosen)
        dead = covered | skipped
        uncovered = self.comp_mask & ~dead
        # forced skips: vertices with no available triangle
        branch_v = -1
        branch_opts: list[int] | None = None
        coverable = 0
        forced = 0
        for v in bits(uncovered):
            opts = [i for i in self.vert_tris[v] if not self.tri_masks[i] & dead]
            if not opts:
                forced |= 1 << v
                continue
            coverable += 1
            if branch_opts is None or len(opts) < len(branch_opts):
                branch_v = v
                branch_opts = opts
        if branch_opts is None:
            return
        bound = len(chosen) + min(
            coverable // 3, (uncovered & ~forced & ~self.tf_mask).bit_count()
        )
        if bound <= self.best_count:
            return
        skipped |= forced
        for i in branch_opts:
            chosen.append(i)
            self._dfs(covered | self.tri_masks[i], skipped, chosen)
            chosen.pop()
            if self.timed_out:
                return
        self._dfs(covered, skipped | (1 << branch_v), chosen)


def max_tiling_exact(g: Graph, budget: float | None = None) -> tuple[TriangleTiling, bool]:
    """Maximum triangle-tiling by branch and bound.

    Solves each connected component independently. optimal=True iff every
    component search completed within the budget (seconds).
    """
    deadline = None if budget is None else time.monotonic() + budget
    all_tris = enumerate_triangles(g)
    chosen: list[Triangle] = []
    optimal = True
    for comp in _component_masks(g):
        comp_tris = [t for t in all_tris if triangle_mask(t) & comp]
        if not comp_tris:
            continue
        solver = _ComponentSolver(g, comp, comp_tris, deadline)
        sel, ok = solver.solve()
        optimal &= ok
        chosen.extend(comp_tris[i] for i in sel)
    return TriangleTiling.build(g, chosen), optimal


# ---------------------------------------------------------------------------
# greedy regular-pair procedures


def _find_apex_triangle(
    g: Graph, apex_avail: int, pair_avail: int
) -> tuple[int, int, int] | None:
    """Triangle with apex in apex_avail and an edge inside pair_avail.

    Apexes are tried in decreasing pair-side degree (lowest index on ties);
    the edge is the lexicographically least inside the apex neighborhood.
    """
    order = sorted(bits(apex_avail), key=lambda v: (-(g.adj[v] & pair_avail).bit_count(), v))
    for x in order:
        nb = g.adj[x] & pair_avail
        for u in bits(nb):
            inner = g.adj[u] & nb
            inner >>= u + 1
            if inner:
                w = u + 1 + ((inner & -inner).bit_length() - 1)
                return x, u, w
    return None


def greedy_ab_tiling(
    g: Graph, A: int, B: int, spec: ABTilingSpec, p: TilerParams
) -> TriangleTiling:
    """Tiling with exactly spec.a A-triangles and spec.b B-triangles.

    An A-triangle has two vertices in A and one in B. Triangles are chosen
    greedily: the apex (the single vertex on the minority side) maximizes its
    degree into the other side's uncovered vertices, then the lexicographic
    least edge inside that neighborhood completes the triangle.
    """
    if A & B or (A | B) != g.vertex_mask():
        raise NotAPartition("{A, B} must partition the vertex set")
    tris, _ = _greedy_ab(g, A, B, spec.a, spec.b)
    return TriangleTiling.build(g, tris)


class _SearchCap(Exception):
    pass


def _greedy_ab(
    g: Graph, A: int, B: int, a: int, b: int, covered: int = 0
) -> tuple[list[Triangle], int]:
    """Exactly a A-triangles and b B-triangles by the proof's plain greedy."""
    tris: list[Triangle] = []
    for step in range(a):
        found = _find_apex_triangle(g, B & ~covered, A & ~covered)
        if found is None:
            raise StarvedStep("A", step, f"after {len(tris)} triangles")
        x, u, w = found
        covered |= mask_of((x, u, w))
        tris.append(tuple(sorted((x, u, w))))
    for step in range(b):
        found = _find_apex_triangle(g, A & ~covered, B & ~covered)
        if found is None:
            raise StarvedStep("B", step, f"after {len(tris)} triangles")
        x, u, w = found
        covered |= mask_of((x, u, w))
        tris.append(tuple(sorted((x, u, w))))
    return tris, covered


def _typed_perfect_small(
    g: Graph, A: int, B: int, a: int, b: int, node_budget: int = 200_000
) -> list[Triangle] | None:
    """Perfect tiling of the masked vertices into exactly a A-triangles and
    b B-triangles, by complete search. Intended for small residuals."""
    avail = A | B
    tris: list[Triangle] = []
    for u in bits(avail):
        for off in bits((g.adj[u] & avail) >> (u + 1)):
            v = u + 1 + off
            for off2 in bits((g.adj[u] & g.adj[v] & avail) >> (v + 1)):
                w = v + 1 + off2
                in_a = ((A >> u) & 1) + ((A >> v) & 1) + ((A >> w) & 1)
                if in_a in (1, 2):  # mixed triangles only
                    tris.append((u, v, w))
    tri_masks = [triangle_mask(t) for t in tris]
    tri_type_a = [((A & tri_masks[i]).bit_count() == 2) for i in range(len(tris))]
    vert_tris: dict[int, list[int]] = {v: [] for v in bits(avail)}
    for i, tm in enumerate(tri_masks):
        for v in bits(tm):
            vert_tris[v].append(i)
    nodes = 0

    def dfs(cov: int, a_left: int, b_left: int, acc: list[Triangle]) -> bool:
        nonlocal nodes
        if a_left == 0 and b_left == 0:
            return True
        nodes += 1
        if nodes > node_budget:
            raise _SearchCap()
        # branch on the uncovered vertex with the fewest options
        best_opts: list[int] | None = None
        for v in bits(avail & ~cov):
            opts = [
                i
                for i in vert_tris[v]
                if not tri_masks[i] & cov
                and (a_left if tri_type_a[i] else b_left) > 0
            ]
            if not opts:
                return False
            if best_opts is None or len(opts) < len(best_opts):
                best_opts = opts
                if len(opts) == 1:
                    break
        if best_opts is None:
            return False
        for i in best_opts:
            acc.append(tris[i])
            if dfs(
                cov | tri_masks[i],
                a_left - (1 if tri_type_a[i] else 0),
                b_left - (0 if tri_type_a[i] else 1),
                acc,
            ):
                return True
            acc.pop()
        return False

    acc: list[Triangle] = []
    try:
        if dfs(0, a, b, acc):
            return acc
    except _SearchCap:
        return None
    return None


def _ab_exact_random(
    g: Graph,
    A: int,
    B: int,
    a: int,
    b: int,
    covered: int,
    seed: int,
    restarts: int = 40,
    endgame: int = 24,
) -> tuple[list[Triangle], int, int]:
    """Exactly a A-triangles and b B-triangles consuming the masks with no
    slack. Runs a seeded random greedy and finishes the last `endgame`
    vertices by complete search; restarts on failure.

    Returns (triangles, covered, attempts-used).
    """
    for attempt in range(restarts):
        rng = random.Random((seed << 16) ^ attempt)
        cov = covered
        acc: list[Triangle] = []
        a_left, b_left = a, b
        ok = True
        while a_left or b_left:
            rem_a, rem_b = (A & ~cov).bit_count(), (B & ~cov).bit_count()
            if rem_a + rem_b <= endgame:
                fin = _typed_perfect_small(g, A & ~cov, B & ~cov, a_left, b_left)
                if fin is None:
                    ok = False
                    break
                for t in fin:
                    acc.append(t)
                    cov |= triangle_mask(t)
                a_left = b_left = 0
                break
            if a_left:
                apex_avail, pair_avail = B & ~cov, A & ~cov
            else:
                apex_avail, pair_avail = A & ~cov, B & ~cov
            apexes = [
                v for v in bits(apex_avail) if (g.adj[v] & pair_avail).bit_count() >= 2
            ]
            placed = False
            rng.shuffle(apexes)
            for x in apexes:
                nb = g.adj[x] & pair_avail
                pairs = []
                for u in bits(nb):
                    for woff in bits((g.adj[u] & nb) >> (u + 1)):
                        pairs.append((u, u + 1 + woff))
                if not pairs:
                    continue
                u, w = pairs[rng.randrange(len(pairs))]
                tri = tuple(sorted((x, u, w)))
                acc.append(tri)
                cov |= triangle_mask(tri)
                if a_left:
                    a_left -= 1
                else:
                    b_left -= 1
                placed = True
                break
            if not placed:
                ok = False
                break
        if ok and a_left == 0 and b_left == 0:
            return acc, cov, attempt + 1
    raise StarvedStep(
        "A" if a else "B", 0, f"no exact (a={a}, b={b}) tiling found in {restarts} attempts"
    )


def _cover_each(
    g: Graph,
    targets: list[int],
    pool: int,
    covered: int,
    phase: str,
    node_budget: int = 100_000,
) -> tuple[list[Triangle], int]:
    """One triangle per target vertex, with the other two vertices forming an
    edge inside pool. Backtracks across targets up to node_budget."""
    nodes = 0
    deepest = [0]

    def dfs(idx: int, cov: int, acc: list[Triangle]) -> int | None:
        nonlocal nodes
        if idx == len(targets):
            return cov
        nodes += 1
        if nodes > node_budget:
            raise _SearchCap()
        if idx > deepest[0]:
            deepest[0] = idx
        x = targets[idx]
        nb = g.adj[x] & pool & ~cov
        for u in bits(nb):
            for woff in bits((g.adj[u] & nb) >> (u + 1)):
                w = u + 1 + woff
                acc.append(tuple(sorted((x, u, w))))
                result = dfs(idx + 1, cov | mask_of((x, u, w)), acc)
                if result is not None:
                    return result
                acc.pop()
        return None

    acc: list[Triangle] = []
    try:
        final_cov = dfs(0, covered, acc)
    except _SearchCap:
        raise StarvedStep(phase, deepest[0], "search budget exhausted") from None
    if final_cov is None:
        raise StarvedStep(
            phase, deepest[0], f"vertex {targets[deepest[0]]} has no admissible triangle"
        )
    return acc, final_cov


def _cover_each(
    g: Graph,
    targets: list[int],
    pool: int,
    covered: int,
    phase: str,
    node_budget: int = 100_000,
) -> tuple[list[Triangle], int]:
    """One triangle per target vertex, with the other two vertices forming an
    edge inside pool. Backtracks across targets up to node_budget."""
    nodes = 0
    deepest = [0]

    def dfs(idx: int, cov: int, acc: list[Triangle]) -> int | None:
        nonlocal nodes
        if idx == len(targets):
            return cov
        nodes += 1
        if nodes > node_budget:
            raise _SearchCap()
        if idx > deepest[0]:
            deepest[0] = idx
        x = targets[idx]
        nb = g.adj[x] & pool & ~cov
        for u in bits(nb):
            for woff in bits((g.adj[u] & nb) >> (u + 1)):
                w = u + 1 + woff
                acc.append(tuple(sorted((x, u, w))))
                result = dfs(idx + 1, cov | mask_of((x, u, w)), acc)
                if result is not None:
                    return result
                acc.pop()
        return None

    acc: list[Triangle] = []
    try:
        final_cov = dfs(0, covered, acc)
    except _SearchCap:
        raise StarvedStep(phase, deepest[0], "search budget exhausted") from None
    if final_cov is None:
        raise StarvedStep(
            phase, deepest[0], f"vertex {targets[deepest[0]]} has no admissible triangle"
        )
    return acc, final_cov


def tile_avoiding_core(
    g: Graph, A: int, B: int, S: int, p: TilerParams, seed: int = 0
) -> tuple[TriangleTiling, ProcedureTrace]:
    """Tiling covering all of (A \\ S) and B plus exactly floor(phi*eps'*n)
    vertices of S, by the four-phase procedure.

    n is |A| + |B|. Phase T1 covers the low-S-degree part of B with
    A-triangles avoiding S; T2 runs the greedy pair tiler on the residue; T3
    finishes the leftover A-vertices into a random reservoir B2; T4 covers
    the remaining B-vertices with triangles reaching into S.
    """
    if A & B:
        raise NotAPartition("A and B must be disjoint")
    if S & ~A:
        raise NotAPartition("S must be a subset of A")
    n = (A | B).bit_count()
    z = int(p.phi * p.eps_prime * n)
    if ((A & ~S).bit_count() + B.bit_count() + z) % 3 != 0:
        raise DivisibilityViolation(
            f"|A\\S| + |B| + {z} = "
            f"{(A & ~S).bit_count() + B.bit_count() + z} is not divisible by 3"
        )
    rng = random.Random(seed)
    trace = ProcedureTrace(
        "tile_avoiding_core",
        meta={
            "seed": seed,
            "n": n,
            "A": (A).bit_count(),
            "B": (B).bit_count(),
            "S": (S).bit_count(),
            "params": {"eps": p.eps, "phi": p.phi, "eps_prime": p.eps_prime},
        },
    )
    size_a, size_b, size_s = A.bit_count(), B.bit_count(), S.bit_count()
    if size_s != int(p.phi * n):
        trace.log("hypothesis_warning", detail=f"|S|={size_s} != floor(phi*n)={int(p.phi * n)}")
    d = (
        sum((g.adj[v] & B).bit_count() for v in bits(A)) / (size_a * size_b)
        if size_a and size_b
        else 0.0
    )
    t4 = z // 2
    z_rem = z - 2 * t4  # 0 or 1
    trace.meta.update({"z": z, "t4": t4, "z_prime": z_rem, "density": d})

    # B1: vertices of B that see too little of S, padded for divisibility
    s_threshold = (d - p.eps / p.phi) * size_s
    b1 = 0
    for v in bits(B):
        if (g.adj[v] & S).bit_count() < s_threshold:
            b1 |= 1 << v
    pad = 0
    while ((B & ~b1).bit_count() - t4) % 3 != 0:
        extra = B & ~b1
        if not extra:
            raise StarvedStep("T1", pad, "cannot pad B1 for divisibility")
        b1 |= extra & -extra
        pad += 1
    trace.log("B1", members=bit_list(b1), padded=pad)

    t1_tris, covered = _cover_each(g, bit_list(b1), A & ~S, 0, "T1")
    tris: list[Triangle] = list(t1_tris)
    t1_count = len(tris)
    trace.log("T1", triangles=[list(t) for t in tris])

    # B2: random reservoir of size t4 inside B \ B1
    pool = bit_list(B & ~b1)
    if len(pool) < t4:
        raise StarvedStep("T2", 0, "reservoir smaller than t4")
    b2 = mask_of(rng.sample(pool, t4)) if t4 else 0
    trace.log("B2", members=bit_list(b2))

    s_prime = 0
    if z_rem:
        if not S:
            raise StarvedStep("T2", 0, "S empty but z odd")
        s_prime = S & -S
    a_prime = ((A & ~S) & ~covered) | s_prime
    b_prime = B & ~b1 & ~b2
    na, nb = a_prime.bit_count(), b_prime.bit_count()
    t3 = int(p.phi * p.eps_prime * d * n / 15)
    if (na + nb) % 3 != 0 or nb % 3 != 0:
        raise StarvedStep("T2", 0, f"residue sizes {na},{nb} break divisibility")
    a_req = (2 * na - nb) // 3
    b_req = (2 * nb - na) // 3 - t3
    trace.log(
        "T2-setup",
        A_prime=bit_list(a_prime),
        B_prime=bit_list(b_prime),
        S_prime=bit_list(s_prime),
        t3=t3,
        a=a_req,
        b=b_req,
    )
    if a_req < 0 or b_req < 0:
        raise StarvedStep("T2", 0, f"requested counts a={a_req}, b={b_req} negative")
    t2_tris, covered, attempts = _ab_exact_random(
        g, a_prime, b_prime, a_req, b_req, covered, seed=seed
    )
    tris.extend(t2_tris)
    trace.log("T2", triangles=[list(t) for t in t2_tris], attempts=attempts)

    a_dd = a_prime & ~covered
    b_dd = b_prime & ~covered
    if a_dd.bit_count() != t3 or b_dd.bit_count() != 2 * t3:
        raise StarvedStep("T3", 0, "residue accounting failed")
    trace.log("T3-setup", A_dd=bit_list(a_dd), B_dd=bit_list(b_dd))
    t3_tris, covered = _cover_each(g, bit_list(a_dd), b2, covered, "T3")
    tris.extend(t3_tris)
    trace.log("T3", triangles=[list(t) for t in t3_tris])

    remaining_b = B & ~covered
    if remaining_b.bit_count() != t4:
        raise StarvedStep("T4", 0, "uncovered B-count differs from t4")
    t4_tris, covered = _cover_each(g, bit_list(remaining_b), S & ~s_prime, covered, "T4")
    tris.extend(t4_tris)
    trace.log("T4", triangles=[list(t) for t in t4_tris])
    trace.meta["t1"] = t1_count

    tiling = TriangleTiling.build(g, tris)
    assert (tiling.covered & S).bit_count() == z, "postcondition |covered & S| == z"
    assert ((A & ~S) | B) & ~tiling.covered == 0, "postcondition (A\\S) u B covered"
    return tiling, trace


def balance_tripartite(
    g: Graph, V1: int, V2: int, V3: int
) -> tuple[TriangleTiling, ProcedureTrace]:
    """Remove triangles (one vertex in the middle set, an edge in the largest)
    until the three residual sets have equal sizes.

    The trace records the sorted residual sizes at each step; over every two
    steps the largest-minus-smallest gap drops by at least 3 while the
    smallest set loses at most one vertex.
    """
    if V1 & V2 or V1 & V3 or V2 & V3:
        raise NotAPartition("V1, V2, V3 must be disjoint")
    total = (V1 | V2 | V3).bit_count()
    if total % 3 != 0:
        raise DivisibilityViolation(f"|V1|+|V2|+|V3| = {total} not divisible by 3")
    sets = [V1, V2, V3]
    trace = ProcedureTrace(
        "balance_tripartite", meta={"initial_sizes": sorted(s.bit_count() for s in sets)}
    )
    tris: list[Triangle] = []
    step = 0
    while True:
        sizes = [s.bit_count() for s in sets]
        order = sorted(range(3), key=lambda i: (sizes[i], i))
        s_small, s_mid, s_large = (sets[i] for i in order)
        if sizes[order[0]] == sizes[order[2]]:
            break
        found = _find_apex_triangle(g, s_mid, s_large)
        if found is None:
            raise StarvedStep("balance", step, "no triangle from middle into largest set")
        x, u, w = found
        tri = tuple(sorted((x, u, w)))
        tris.append(tri)
        tm = triangle_mask(tri)
        sets = [s & ~tm for s in sets]
        step += 1
        trace.log(
            "remove",
            t=step,
            triangle=list(tri),
            sizes=sorted(s.bit_count() for s in sets),
        )
    trace.meta["steps"] = step
    trace.meta["final_size"] = sets[0].bit_count() if sets else 0
    return TriangleTiling.build(g, tris), trace


# ---------------------------------------------------------------------------
# link graphs and robust matchability


def build_link_graph(
    g: Graph, A: int, M: Sequence[tuple[int, int]]
) -> tuple[list[int], list[tuple[int, int]], list[int]]:
    """Auxiliary bipartite graph between A and a matching M.

    a ~ xy iff ax and ay are both edges of g, i.e. axy is a triangle.
    Returns (a_vertices, m_edges, adj) with adj[i] a bitmask over M indices.
    """
    used = 0
    edges = []
    for x, y in M:
        if not g.has_edge(x, y):
            raise NotAMatching(f"({x},{y}) is not an edge")
        em = (1 << x) | (1 << y)
        if em & used:
            raise NotAMatching(f"({x},{y}) overlaps another matching edge")
        if em & A:
            raise NotAMatching(f"({x},{y}) intersects A")
        used |= em
        edges.append((min(x, y), max(x, y)))
    a_vertices = bit_list(A)
    adj = []
    for a in a_vertices:
        row = 0
        for j, (x, y) in enumerate(edges):
            if g.has_edge(a, x) and g.has_edge(a, y):
                row |= 1 << j
        adj.append(row)
    return a_vertices, edges, adj


def verify_robust_matchable(adj: Sequence[int], n_y: int) -> bool:
    """Whether F[X', Y] has a perfect matching for every X' of size |Y|.

    adj[i] is the Y-neighborhood bitmask of the i-th X-vertex. Decided in
    polynomial time through the Hall-surplus criterion
    |N(Y')| >= |Y'| + |X| - |Y| for every nonempty Y'.
    """
    return robustly_matchable(adj, n_y)
