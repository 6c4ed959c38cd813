"""Exact-rational weighted fractional matchings on digraphs.

An (eta, xi)-weighted fractional matching puts weight w >= 0 on each directed
edge; an edge u->v loads eta*w onto u and xi*w onto v, and every vertex load
is at most 1. The matching is perfect when every load equals 1 exactly, which
is a rational linear feasibility problem: the solver runs a phase-1 simplex
with Bland's anti-cycling rule entirely over Fraction arithmetic, and on
infeasibility extracts a Farkas certificate y with eta*y_u + xi*y_v >= 0 on
every edge and sum(y) < 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import ParseError, UnknownEdge
from .graphs import Graph, bits

RationalLike = Fraction | int | str


def _frac(x: RationalLike) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Digraph:
    """Directed simple graph with out- and in-neighbor bitmasks."""

    __slots__ = ("n", "out_adj", "in_adj")

    def __init__(self, n: int, out_adj: Sequence[int]):
        if len(out_adj) != n:
            raise ValueError("out adjacency length must equal n")
        in_adj = [0] * n
        for u, mask in enumerate(out_adj):
            if mask & (1 << u):
                raise ValueError(f"self-loop at {u}")
            if mask >> n:
                raise ValueError(f"neighbor out of range at {u}")
            for v in bits(mask):
                in_adj[v] |= 1 << u
        self.n = n
        self.out_adj = tuple(out_adj)
        self.in_adj = tuple(in_adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        out = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop ({u},{v})")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            out[u] |= 1 << v
        return cls(n, out)

    @classmethod
    def doubled(cls, g: Graph) -> "Digraph":
        """Both orientations of every edge of an undirected graph."""
        return cls(g.n, list(g.adj))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.out_adj[u])]

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.out_adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out_adj[u] >> v & 1)

    def in_degree(self, v: int) -> int:
        return self.in_adj[v].bit_count()

    def min_in_degree(self) -> int:
        return min((self.in_degree(v) for v in range(self.n)), default=0)

    def underlying_adj(self) -> tuple[int, ...]:
        return tuple(self.out_adj[v] | self.in_adj[v] for v in range(self.n))

    def reversed(self) -> "Digraph":
        return Digraph(self.n, list(self.in_adj))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Digraph)
            and self.n == other.n
            and self.out_adj == other.out_adj
        )

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.edge_count()})"


def parse_directed_edge_list(text: str) -> Digraph:
    """Directed edge-list format: header "n m", then m lines "u v" (u -> v)."""
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
    out = [0] * n
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
            raise ParseError(idx, f"self-loop ({u},{v})")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(idx, f"edge ({u},{v}) out of range for n={n}")
        if out[u] >> v & 1:
            raise ParseError(idx, f"duplicate edge ({u},{v})")
        out[u] |= 1 << v
        count += 1
    if count != m:
        raise ParseError(len(lines), f"header declared m={m} edges but found {count}")
    return Digraph(n, out)


def format_directed_edge_list(d: Digraph) -> str:
    rows = [f"{d.n} {d.edge_count()}"]
    rows.extend(f"{u} {v}" for u, v in d.edges())
    return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class WeightedFractionalMatching:
    eta: Fraction
    xi: Fraction
    weights: dict[tuple[int, int], Fraction]
    loads: tuple[Fraction, ...]

    @property
    def total_weight(self) -> Fraction:
        return sum(((self.eta + self.xi) * w for w in self.weights.values()), Fraction(0))

    def is_perfect(self) -> bool:
        return all(load == 1 for load in self.loads)

    def common_denominator(self) -> int:
        return lcm(*(w.denominator for w in self.weights.values())) if self.weights else 1

    def to_json(self) -> dict:
        return {
            "eta": str(self.eta),
            "xi": str(self.xi),
            "weights": [
                [u, v, str(w)] for (u, v), w in sorted(self.weights.items())
            ],
            "loads": [str(x) for x in self.loads],
            "total_weight": str(self.total_weight),
            "perfect": self.is_perfect(),
            "common_denominator": self.common_denominator(),
        }


@dataclass(frozen=True)
class FarkasCertificate:
    y: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {"y": [str(v) for v in self.y]}


def _phase_one_simplex(
    n: int, columns: list[tuple[int, Fraction, int, Fraction]], m: int
) -> tuple[Fraction, list[Fraction], list[int], list[list[Fraction]]]:
    """Minimize the artificial sum for: sum_e w_e * A_e + a = 1, w, a >= 0.

    columns[j] = (row_u, coeff_u, row_v, coeff_v) describes structural column
    j. Returns (objective, rhs, basis, tableau) at optimality; tableau rows
    span structural columns 0..m-1 then artificial columns m..m+n-1.
    """
    zero, one = Fraction(0), Fraction(1)
    width = m + n
    rows: list[list[Fraction]] = []
    for i in range(n):
        row = [zero] * (width + 1)
        row[m + i] = one
        row[width] = one  # rhs
        rows.append(row)
    for j, (ru, cu, rv, cv) in enumerate(columns):
        rows[ru][j] = cu
        rows[rv][j] = cv
    # objective row for min sum(a): start with c, eliminate basic columns
    obj = [zero] * (width + 1)
    for j in range(m, width):
        obj[j] = one
    for i in range(n):
        r = rows[i]
        for j in range(width + 1):
            if r[j]:
                obj[j] -= r[j]
    basis = list(range(m, width))

    while True:
        enter = -1
        for j in range(width):  # Bland: lowest index with negative reduced cost
            if obj[j] < 0:
                enter = j
                break
        if enter == -1:
            break
        leave_row = -1
        best_ratio: Fraction | None = None
        for i in range(n):
            coeff = rows[i][enter]
            if coeff > 0:
                ratio = rows[i][width] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave_row])
                ):
                    best_ratio = ratio
                    leave_row = i
        if leave_row == -1:
            raise ArithmeticError("phase-1 objective is bounded; unbounded pivot is a bug")
        pivot_row = rows[leave_row]
        pv = pivot_row[enter]
        if pv != 1:
            for j in range(width + 1):
                if pivot_row[j]:
                    pivot_row[j] /= pv
        for r in rows + [obj]:
            if r is pivot_row:
                continue
            factor = r[enter]
            if factor:
                for j in range(width + 1):
                    if pivot_row[j]:
                        r[j] -= factor * pivot_row[j]
        basis[leave_row] = enter

    objective = -obj[width]
    rhs = [rows[i][width] for i in range(n)]
    return objective, rhs, basis, [obj]


def solve_perfect_wfm(
    gamma: Digraph, eta: RationalLike, xi: RationalLike
) -> WeightedFractionalMatching | FarkasCertificate:
    """Perfect (eta, xi)-weighted fractional matching, or a Farkas certificate.

    The dichotomy is total: the returned object always verifies. Feasible
    solutions are basic, so at most n weights are nonzero.
    """
    eta, xi = _frac(eta), _frac(xi)
    if eta <= 0 or xi <= 0:
        raise ValueError("eta and xi must be positive")
    n = gamma.n
    edge_list = gamma.edges()
    m = len(edge_list)
    columns = [(u, eta, v, xi) for (u, v) in edge_list]
    objective, rhs, basis, (obj_row,) = _phase_one_simplex(n, columns, m)
    if objective == 0:
        weights: dict[tuple[int, int], Fraction] = {}
        for i, b in enumerate(basis):
            if b < m and rhs[i]:
                weights[edge_list[b]] = rhs[i]
        loads = _loads(gamma, eta, xi, weights)
        return WeightedFractionalMatching(eta, xi, weights, tuple(loads))
    # multipliers: reduced cost of artificial j is 1 - y_j
    y = tuple(obj_row[m + i] - 1 for i in range(n))  # y' = -(1 - obj) = obj - 1
    return FarkasCertificate(y)


def _loads(
    gamma: Digraph,
    eta: Fraction,
    xi: Fraction,
    weights: dict[tuple[int, int], Fraction],
) -> list[Fraction]:
    loads = [Fraction(0)] * gamma.n
    for (u, v), w in weights.items():
        loads[u] += eta * w
        loads[v] += xi * w
    return loads


@dataclass(frozen=True)
class WfmReport:
    feasible: bool
    perfect: bool
    total_weight: Fraction
    common_denominator: int
    violations: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "feasible": self.feasible,
            "perfect": self.perfect,
            "total_weight": str(self.total_weight),
            "common_denominator": self.common_denominator,
            "violations": list(self.violations),
        }


def verify_wfm(gamma: Digraph, w: WeightedFractionalMatching) -> WfmReport:
    """Recompute all loads exactly and report feasibility and perfectness."""
    violations = []
    for (u, v), weight in sorted(w.weights.items()):
        if not gamma.has_edge(u, v):
            raise UnknownEdge(f"weight keyed by non-edge ({u},{v})")
        if weight < 0:
            violations.append(f"negative weight on ({u},{v})")
    loads = _loads(gamma, w.eta, w.xi, w.weights)
    for v, load in enumerate(loads):
        if load > 1:
            violations.append(f"load {load} > 1 at vertex {v}")
    feasible = not violations
    perfect = feasible and all(load == 1 for load in loads)
    total = sum(((w.eta + w.xi) * x for x in w.weights.values()), Fraction(0))
    denom = lcm(*(x.denominator for x in w.weights.values())) if w.weights else 1
    return WfmReport(feasible, perfect, total, denom, tuple(violations))


def farkas_check(
    cert: FarkasCertificate, gamma: Digraph, eta: RationalLike, xi: RationalLike
) -> bool:
    """Exact verification of both certificate conditions."""
    eta, xi = _frac(eta), _frac(xi)
    if len(cert.y) != gamma.n:
        return False
    for u, v in gamma.edges():
        if eta * cert.y[u] + xi * cert.y[v] < 0:
            return False
    return sum(cert.y, Fraction(0)) < 0


def independence_consequence_check(
    gamma: Digraph, w: WeightedFractionalMatching, S: int
) -> bool:
    """Falsifiable form of: a perfect matching with eta <= xi bounds every
    independent set by xi*n. True iff |S| <= xi*n or S is not independent in
    the underlying undirected graph."""
    if not w.is_perfect():
        raise ValueError("matching must be perfect")
    if not (w.eta <= w.xi and w.eta + w.xi == 1):
        raise ValueError("requires eta <= xi and eta + xi = 1")
    if S.bit_count() <= w.xi * gamma.n:
        return True
    und = gamma.underlying_adj()
    for v in bits(S):
        if und[v] & S:
            return True  # not independent, claim vacuous
    return False
