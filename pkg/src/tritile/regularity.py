"""Density and (super-)regularity certification.

Exhaustive checking enumerates every qualifying subset pair on one side and
reads off the other side's exact per-size density extremes from sorted degree
prefix sums (for fixed X and |Y| = s, the extreme of e(X,Y) over Y is attained
by the s smallest/largest degrees, so nothing is approximated). At scale the
codegree criterion takes over: near-completeness of the codegree graph
D_AB(eps) certifies regularity with an (16*eps)^(1/5) inflation, and its
converse refutes it. Certificates always carry their method so heuristic and
exact verdicts cannot be confused.

All densities and counts are exact rationals; only the irrational thresholds
(16 eps)^(1/5) and (33 eps)^(1/5) are floating point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import PreconditionViolated, RangeError, SizeBudget, TooLarge
from .graphs import Graph, bit_list, bits, mask_of

RationalLike = Fraction | int | str


def _frac(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return x if isinstance(x, Fraction) else Fraction(x)


EXHAUSTIVE_CAP = 16


@dataclass(frozen=True)
class BipartitePair:
    host: Graph
    A: int
    B: int

    def __post_init__(self):
        if self.A & self.B:
            raise ValueError("sides must be disjoint")
        if not self.A or not self.B:
            raise ValueError("sides must be non-empty")

    @property
    def a_size(self) -> int:
        return self.A.bit_count()

    @property
    def b_size(self) -> int:
        return self.B.bit_count()

    def biadjacency(self) -> np.ndarray:
        """0/1 matrix of shape (|A|, |B|) in ascending vertex order."""
        a_vs, b_vs = bit_list(self.A), bit_list(self.B)
        m = np.zeros((len(a_vs), len(b_vs)), dtype=np.int64)
        for i, u in enumerate(a_vs):
            nb = self.host.adj[u] & self.B
            for j, v in enumerate(b_vs):
                if nb >> v & 1:
                    m[i, j] = 1
        return m

    def edge_count(self) -> int:
        return sum((self.host.adj[u] & self.B).bit_count() for u in bits(self.A))


def density(p: BipartitePair) -> Fraction:
    return Fraction(p.edge_count(), p.a_size * p.b_size)


@dataclass(frozen=True)
class RegularityCertificate:
    d: Fraction
    eps: object  # Fraction for exact methods, float for inflated thresholds
    kind: str  # regular | geq_regular | super_regular
    method: str  # exhaustive | codegree_sufficient | codegree_necessary_failed | sampled
    holds: bool
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "d": str(self.d),
            "eps": str(self.eps),
            "kind": self.kind,
            "method": self.method,
            "holds": self.holds,
            "witness": self.witness,
            "details": {k: str(v) for k, v in self.details.items()},
        }


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


def _density_extremes(p: BipartitePair, eps: Fraction):
    """Exact min and max of d(X, Y) over qualifying subsets.

    Enumerates subsets on the smaller side; the other side's extremes per
    size come from sorted degree prefix sums. Returns
    (min_frac, min_witness, max_frac, max_witness) with witnesses as
    (enum_side_vertices, other_side_vertices) in host labels.
    """
    swap = p.a_size > p.b_size
    if swap:
        enum_vs, other_vs = bit_list(p.B), bit_list(p.A)
        m = p.biadjacency().T.copy()
        enum_min = max(1, _ceil_frac(eps * p.b_size))
        other_min = max(1, _ceil_frac(eps * p.a_size))
    else:
        enum_vs, other_vs = bit_list(p.A), bit_list(p.B)
        m = p.biadjacency()
        enum_min = max(1, _ceil_frac(eps * p.a_size))
        other_min = max(1, _ceil_frac(eps * p.b_size))
    na, nb = len(enum_vs), len(other_vs)
    count = 1 << na
    idx = np.arange(count, dtype=np.uint32)
    subset_bits = ((idx[:, None] >> np.arange(na)) & 1).astype(np.int64)
    sizes = subset_bits.sum(axis=1)
    qual = sizes >= enum_min
    deg = subset_bits @ m  # (count, nb)
    deg_sorted = np.sort(deg, axis=1)
    csum = np.concatenate(
        [np.zeros((count, 1), dtype=np.int64), np.cumsum(deg_sorted, axis=1)], axis=1
    )
    total = csum[:, nb]
    s_range = np.arange(other_min, nb + 1)
    low = csum[:, s_range]  # sum of s smallest degrees
    high = total[:, None] - csum[:, nb - s_range]  # sum of s largest
    denom = sizes[:, None] * s_range[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        low_ratio = np.where(qual[:, None], low / denom, np.inf)
        high_ratio = np.where(qual[:, None], high / denom, -np.inf)
    min_flat = int(np.argmin(low_ratio))
    max_flat = int(np.argmax(high_ratio))
    n_s = len(s_range)

    def reconstruct(flat: int, take_low: bool):
        row, col = divmod(flat, n_s)
        s = int(s_range[col])
        e_val = int(low[row, col] if take_low else high[row, col])
        size = int(sizes[row])
        val = Fraction(e_val, size * s)
        x_set = [enum_vs[i] for i in range(na) if row >> i & 1]
        order = np.argsort(deg[row], kind="stable")
        chosen = order[:s] if take_low else order[nb - s:]
        y_set = sorted(other_vs[j] for j in chosen)
        if swap:
            x_set, y_set = y_set, x_set
        return val, {"X": x_set, "Y": y_set}

    min_val, min_wit = reconstruct(min_flat, True)
    max_val, max_wit = reconstruct(max_flat, False)
    return min_val, min_wit, max_val, max_wit


def check_regular_exhaustive(
    p: BipartitePair, d: RationalLike, eps: RationalLike, kind: str = "regular"
) -> RegularityCertificate:
    """Exact (d, eps)-regularity verdict by exhaustive subset enumeration.

    kind="regular" tests d(X,Y) = d +- eps for all qualifying X, Y;
    kind="geq_regular" tests (d', eps)-regularity for some d' >= d.
    Both sides are capped at 16 vertices.
    """
    if p.a_size > EXHAUSTIVE_CAP or p.b_size > EXHAUSTIVE_CAP:
        raise TooLarge(f"sides {p.a_size}, {p.b_size} exceed the cap {EXHAUSTIVE_CAP}")
    d, eps = _frac(d), _frac(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0,1)")
    mn, mn_wit, mx, mx_wit = _density_extremes(p, eps)
    details = {"min_density": mn, "max_density": mx}
    if kind == "regular":
        if mn < d - eps:
            return RegularityCertificate(d, eps, kind, "exhaustive", False, mn_wit, details)
        if mx > d + eps:
            return RegularityCertificate(d, eps, kind, "exhaustive", False, mx_wit, details)
        return RegularityCertificate(d, eps, kind, "exhaustive", True, None, details)
    if kind == "geq_regular":
        # some d' >= d has all densities in [d' - eps, d' + eps]
        if mx - mn > 2 * eps:
            return RegularityCertificate(d, eps, kind, "exhaustive", False, mx_wit, details)
        if mn < d - eps:
            return RegularityCertificate(d, eps, kind, "exhaustive", False, mn_wit, details)
        return RegularityCertificate(d, eps, kind, "exhaustive", True, None, details)
    raise ValueError(f"unknown kind {kind!r}")


def check_regular_sampled(
    p: BipartitePair,
    d: RationalLike,
    eps: RationalLike,
    samples: int = 500,
    seed: int = 0,
) -> RegularityCertificate:
    """Refutation-oriented sampling of qualifying subset pairs.

    holds=True only means no violation was sampled; a False verdict carries
    an exact witness.
    """
    d, eps = _frac(d), _frac(eps)
    rng = random.Random(seed)
    a_vs, b_vs = bit_list(p.A), bit_list(p.B)
    min_a = max(1, _ceil_frac(eps * len(a_vs)))
    min_b = max(1, _ceil_frac(eps * len(b_vs)))
    for _ in range(samples):
        ka = rng.randint(min_a, len(a_vs))
        kb = rng.randint(min_b, len(b_vs))
        xs = rng.sample(a_vs, ka)
        ys = rng.sample(b_vs, kb)
        y_mask = mask_of(ys)
        e = sum((p.host.adj[u] & y_mask).bit_count() for u in xs)
        val = Fraction(e, ka * kb)
        if val < d - eps or val > d + eps:
            return RegularityCertificate(
                d,
                eps,
                "regular",
                "sampled",
                False,
                {"X": sorted(xs), "Y": sorted(ys)},
                {"violating_density": val},
            )
    return RegularityCertificate(d, eps, "regular", "sampled", True, None, {"samples": samples})


@dataclass(frozen=True)
class CodegreeGraph:
    """D_AB(eps): graph on A joining vertices with typical degree and small
    codegree; x ~ x' iff |N(x)|, |N(x')| > (d-eps)|B| and
    |N(x) n N(x')| < (d+eps)^2 |B| with d the measured pair density."""

    a_vertices: tuple[int, ...]
    graph: Graph
    eps: Fraction
    d: Fraction

    def edge_count(self) -> int:
        return self.graph.edge_count()


def codegree_graph(p: BipartitePair, eps: RationalLike) -> CodegreeGraph:
    eps = _frac(eps)
    d = density(p)
    a_vs = bit_list(p.A)
    m = p.biadjacency()
    degs = m.sum(axis=1)
    codeg = m @ m.T
    b = p.b_size
    # strict integer cutoffs for exact comparisons: c > t iff c >= floor(t)+1,
    # c < t iff c <= ceil(t)-1
    deg_gt = _floor_frac((d - eps) * b) + 1
    codeg_lt = _ceil_frac(((d + eps) ** 2) * b) - 1
    good = degs >= deg_gt
    adj_mat = (codeg <= codeg_lt) & good[:, None] & good[None, :]
    np.fill_diagonal(adj_mat, False)
    adj = [0] * len(a_vs)
    for i in range(len(a_vs)):
        row = 0
        for j in np.nonzero(adj_mat[i])[0]:
            row |= 1 << int(j)
        adj[i] = row
    return CodegreeGraph(tuple(a_vs), Graph(len(a_vs), adj), eps, d)


def kr_sufficient(p: BipartitePair, eps: RationalLike) -> RegularityCertificate | None:
    """Certificate from the codegree criterion: if e(D_AB(eps)) exceeds
    (1 - 5 eps)|A|^2 / 2 then the pair is (d, (16 eps)^(1/5))-regular.

    Returns None when the edge-count condition fails (no conclusion).
    """
    eps = _frac(eps)
    if Fraction(p.a_size) < 2 / eps:
        raise PreconditionViolated(f"|A| = {p.a_size} < 2/eps = {2 / eps}")
    dg = codegree_graph(p, eps)
    threshold = (1 - 5 * eps) * p.a_size**2 / 2
    e_d = dg.edge_count()
    if Fraction(e_d) > threshold:
        inflated = float(16 * eps) ** 0.2
        return RegularityCertificate(
            dg.d,
            inflated,
            "regular",
            "codegree_sufficient",
            True,
            None,
            {"codegree_edges": e_d, "threshold": threshold, "input_eps": eps},
        )
    return None


def kr_necessary_check(
    p: BipartitePair, d: RationalLike, eps: RationalLike
) -> bool:
    """Necessary codegree bound: a (d, eps)-regular pair with |B| >= 1/d has
    e(D_AB(eps)) >= (1 - 8 eps)|A|^2 / 2. The contrapositive refutes
    regularity at scale. Here d is instantiated as the measured density."""
    d, eps = _frac(d), _frac(eps)
    if d <= 0 or Fraction(p.b_size) < 1 / d:
        raise PreconditionViolated(f"|B| = {p.b_size} < 1/d")
    dg = codegree_graph(p, eps)
    return Fraction(dg.edge_count()) >= (1 - 8 * eps) * p.a_size**2 / 2


def refute_regular_codegree(
    p: BipartitePair, d: RationalLike, eps: RationalLike
) -> RegularityCertificate | None:
    """Refutation certificate when the necessary codegree bound fails."""
    d, eps = _frac(d), _frac(eps)
    if kr_necessary_check(p, d, eps):
        return None
    dg = codegree_graph(p, eps)
    return RegularityCertificate(
        d,
        eps,
        "regular",
        "codegree_necessary_failed",
        False,
        {"codegree_edges": dg.edge_count()},
        {"threshold": (1 - 8 * eps) * p.a_size**2 / 2},
    )


def min_cross_degrees(p: BipartitePair) -> tuple[int, int]:
    """(min degree from A into B, min degree from B into A)."""
    da = min((p.host.adj[u] & p.B).bit_count() for u in bits(p.A))
    db = min((p.host.adj[v] & p.A).bit_count() for v in bits(p.B))
    return da, db


def check_super_regular(
    p: BipartitePair, d: RationalLike, eps: RationalLike, method: str = "exhaustive"
) -> RegularityCertificate:
    """Super-regularity: a regularity verdict by the chosen method plus the
    exact two-sided minimum-degree floors (d - eps)|B| and (d - eps)|A|."""
    d, eps = _frac(d), _frac(eps)
    da, db = min_cross_degrees(p)
    floors = Fraction(da) >= (d - eps) * p.b_size and Fraction(db) >= (d - eps) * p.a_size
    if method == "exhaustive":
        base = check_regular_exhaustive(p, d, eps, kind="geq_regular")
        holds = base.holds and floors
        eps_out = eps
        details = dict(base.details)
    elif method == "codegree":
        cert = kr_sufficient(p, eps)
        holds = cert is not None and floors
        eps_out = cert.eps if cert is not None else eps
        details = dict(cert.details) if cert is not None else {}
        base = cert
    else:
        raise ValueError(f"unknown method {method!r}")
    details.update({"min_deg_A_to_B": da, "min_deg_B_to_A": db})
    return RegularityCertificate(
        d,
        eps_out,
        "super_regular",
        base.method if base is not None else "codegree_sufficient",
        holds,
        None if holds else {"floors_hold": floors},
        details,
    )


def make_super_regular(p: BipartitePair, d: RationalLike, eps: RationalLike) -> tuple[int, int]:
    """Trim each side to its typical-degree vertices.

    From a (>= d, eps)-regular pair this keeps at least a (1 - eps) fraction
    of each side and yields a (d, 2 eps)-super-regular sub-pair. Returns the
    kept (X, Y) masks.
    """
    d, eps = _frac(d), _frac(eps)
    x = 0
    for u in bits(p.A):
        if Fraction((p.host.adj[u] & p.B).bit_count()) >= (d - eps) * p.b_size:
            x |= 1 << u
    y = 0
    for v in bits(p.B):
        if Fraction((p.host.adj[v] & p.A).bit_count()) >= (d - eps) * p.a_size:
            y |= 1 << v
    return x, y


def chernoff_bound(mean, a) -> float:
    """Tail bound 2 exp(-a^2 mean / 3) for binomial/hypergeometric deviations
    of at least a*mean from the mean; valid for 0 < a < 3/2."""
    mean_f, a_f = float(mean), float(a)
    if not 0 < a_f < 1.5:
        raise RangeError(f"a = {a_f} outside (0, 3/2)")
    if mean_f < 0:
        raise RangeError("mean must be non-negative")
    return 2.0 * math.exp(-(a_f * a_f) * mean_f / 3.0)


def _splitmix64(x: int) -> int:
    """One step of the splitmix64 sequence; derives per-trial seeds."""
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def trial_seed(seed: int, i: int) -> int:
    return _splitmix64((seed << 32) ^ i)


@dataclass(frozen=True)
class SlicingStats:
    trials: int
    pairs_per_trial: int
    eps: Fraction
    eps_prime: float
    pair_density: Fraction
    pass_rate: float  # fraction of sliced pairs certified by the codegree criterion
    density_dev_max: float
    density_dev_q95: float
    density_within: dict  # tolerance -> fraction of sliced pairs within it
    slice_degree_dev_max: float  # stat (a)/(b): per-vertex slice degree deviation
    slice_codegree_dev_max: float  # stat (c)/(d), on sampled vertex pairs

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "pairs_per_trial": self.pairs_per_trial,
            "eps": str(self.eps),
            "eps_prime": self.eps_prime,
            "pair_density": str(self.pair_density),
            "pass_rate": self.pass_rate,
            "density_dev_max": self.density_dev_max,
            "density_dev_q95": self.density_dev_q95,
            "density_within": {str(k): v for k, v in self.density_within.items()},
            "slice_degree_dev_max": self.slice_degree_dev_max,
            "slice_codegree_dev_max": self.slice_codegree_dev_max,
        }


def random_slicing_experiment(
    p: BipartitePair,
    x_sizes: list[int],
    y_sizes: list[int],
    eps: RationalLike,
    seed: int = 0,
    trials: int = 100,
    beta: float | None = None,
    tolerances: tuple[float, ...] = (0.05,),
    codegree_sample_pairs: int = 200,
) -> SlicingStats:
    """Sample disjoint random slices and certify every cross pair.

    Each sliced pair is certified through the codegree criterion at 2*eps
    (the sliced codegree graph contains the original one at doubled eps), so
    a certificate means (d, (32 eps)^(1/5))-regular, within the reported
    eps' = (33 eps)^(1/5). Also records the slice-degree, slice-codegree and
    slice-density deviation statistics.
    """
    eps = _frac(eps)
    n = max(p.a_size, p.b_size)
    if sum(x_sizes) > p.a_size or sum(y_sizes) > p.b_size:
        raise SizeBudget("slice sizes exceed the available side")
    if beta is not None:
        for s in list(x_sizes) + list(y_sizes):
            if s < beta * n:
                raise SizeBudget(f"slice size {s} below beta*n = {beta * n}")
    m = p.biadjacency()
    a_n, b_n = m.shape
    d_pair = density(p)
    d_float = float(d_pair)
    deg_a = m.sum(axis=1) / b_n  # |N(x)|/|B|
    deg_b = m.sum(axis=0) / a_n
    certified = 0
    total_pairs = 0
    dens_devs: list[float] = []
    deg_dev_max = 0.0
    codeg_dev_max = 0.0
    kr_eps = 2 * eps
    kr_threshold_frac = 1 - 5 * kr_eps
    for t in range(trials):
        rng = random.Random(trial_seed(seed, t))
        a_perm = list(range(a_n))
        b_perm = list(range(b_n))
        rng.shuffle(a_perm)
        rng.shuffle(b_perm)
        xs, pos = [], 0
        for s in x_sizes:
            xs.append(np.array(sorted(a_perm[pos : pos + s])))
            pos += s
        ys, pos = [], 0
        for s in y_sizes:
            ys.append(np.array(sorted(b_perm[pos : pos + s])))
            pos += s
        sample_stats = t % max(1, trials // 20) == 0
        for xi in xs:
            for yj in ys:
                sub = m[np.ix_(xi, yj)]
                sx, sy = len(xi), len(yj)
                d_ij = sub.sum() / (sx * sy)
                dens_devs.append(abs(d_ij - d_float))
                # codegree certificate at 2*eps on the sliced pair
                degs = sub.sum(axis=1)
                codeg = sub @ sub.T
                d_sub = d_ij
                deg_gt = (d_sub - float(kr_eps)) * sy
                codeg_lt = ((d_sub + float(kr_eps)) ** 2) * sy
                good = degs > deg_gt
                adj_ok = (codeg < codeg_lt) & good[:, None] & good[None, :]
                np.fill_diagonal(adj_ok, False)
                e_d = int(adj_ok.sum()) // 2
                total_pairs += 1
                if e_d > float(kr_threshold_frac) * sx * sx / 2:
                    certified += 1
                # stat (a): slice degrees of every A-vertex against Y_j
                slice_deg = m[:, yj].sum(axis=1) / sy
                deg_dev_max = max(deg_dev_max, float(np.abs(slice_deg - deg_a).max()))
                # stat (b): symmetric
                slice_deg_b = m[xi, :].sum(axis=0) / sx
                deg_dev_max = max(deg_dev_max, float(np.abs(slice_deg_b - deg_b).max()))
                if sample_stats:
                    # stats (c)/(d) on sampled vertex pairs
                    for _ in range(codegree_sample_pairs):
                        u, v = rng.randrange(a_n), rng.randrange(a_n)
                        if u == v:
                            continue
                        full = float(np.dot(m[u], m[v])) / b_n
                        sliced = float(np.dot(m[u][yj], m[v][yj])) / sy
                        codeg_dev_max = max(codeg_dev_max, abs(sliced - full))
    devs = np.array(dens_devs)
    within = {tol: float((devs <= tol).mean()) for tol in tolerances}
    return SlicingStats(
        trials=trials,
        pairs_per_trial=len(x_sizes) * len(y_sizes),
        eps=eps,
        eps_prime=float(33 * eps) ** 0.2,
        pair_density=d_pair,
        pass_rate=certified / total_pairs if total_pairs else 1.0,
        density_dev_max=float(devs.max()) if len(devs) else 0.0,
        density_dev_q95=float(np.quantile(devs, 0.95)) if len(devs) else 0.0,
        density_within=within,
        slice_degree_dev_max=deg_dev_max,
        slice_codegree_dev_max=codeg_dev_max,
    )
