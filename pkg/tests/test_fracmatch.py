import random
from fractions import Fraction
from math import ceil

import pytest

from tritile.errors import ParseError, UnknownEdge
from tritile.fracmatch import (
    Digraph,
    FarkasCertificate,
    WeightedFractionalMatching,
    farkas_check,
    format_directed_edge_list,
    independence_consequence_check,
    parse_directed_edge_list,
    solve_perfect_wfm,
    verify_wfm,
)
from tritile.graphs import gnp, mask_of


def random_digraph(n: int, p: float, rng: random.Random) -> Digraph:
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return Digraph.from_edges(n, edges)


def random_digraph_min_indeg(n: int, d: int, p: float, rng: random.Random) -> Digraph:
    out = [0] * n
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                out[u] |= 1 << v
    g = Digraph(n, out)
    # raise in-degrees to d by adding random in-edges
    for v in range(n):
        missing = d - g.in_degree(v)
        if missing > 0:
            candidates = [u for u in range(n) if u != v and not out[u] >> v & 1]
            for u in rng.sample(candidates, missing):
                out[u] |= 1 << v
            g = Digraph(n, out)
    return g


def scipy_feasible(gamma: Digraph, eta: Fraction, xi: Fraction) -> bool:
    """Independent floating-point LP oracle (HiGHS via scipy)."""
    import numpy as np
    from scipy.optimize import linprog

    edges = gamma.edges()
    n, m = gamma.n, len(edges)
    if m == 0:
        return n == 0
    a_eq = np.zeros((n, m))
    for j, (u, v) in enumerate(edges):
        a_eq[u, j] = float(eta)
        a_eq[v, j] = float(xi)
    res = linprog(
        c=np.zeros(m), A_eq=a_eq, b_eq=np.ones(n), bounds=[(0, None)] * m, method="highs"
    )
    return res.status == 0


class TestSolvePerfect:
    def test_directed_3_cycle(self):
        gamma = Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
        result = solve_perfect_wfm(gamma, Fraction(1, 3), Fraction(2, 3))
        assert isinstance(result, WeightedFractionalMatching)
        assert result.weights == {(0, 1): 1, (1, 2): 1, (2, 0): 1}
        assert result.is_perfect()
        assert result.total_weight == 3
        assert result.common_denominator() == 1

    def test_single_edge_unequal_weights(self):
        gamma = Digraph.from_edges(2, [(0, 1)])
        result = solve_perfect_wfm(gamma, Fraction(1, 3), Fraction(2, 3))
        assert isinstance(result, FarkasCertificate)
        assert farkas_check(result, gamma, Fraction(1, 3), Fraction(2, 3))

    def test_single_edge_equal_weights_feasible(self):
        gamma = Digraph.from_edges(2, [(0, 1)])
        result = solve_perfect_wfm(gamma, Fraction(1, 2), Fraction(1, 2))
        assert isinstance(result, WeightedFractionalMatching)
        assert result.weights == {(0, 1): 2}

    def test_dichotomy_always_verifies(self):
        rng = random.Random(5)
        etas = [Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)]
        for i in range(300):
            n = rng.randint(1, 10)
            gamma = random_digraph(n, rng.random(), rng)
            eta = etas[i % 3]
            result = solve_perfect_wfm(gamma, eta, 1 - eta)
            if isinstance(result, WeightedFractionalMatching):
                report = verify_wfm(gamma, result)
                assert report.perfect
                assert len(result.weights) <= n
            else:
                assert farkas_check(result, gamma, eta, 1 - eta)

    def test_min_indegree_implies_feasible(self):
        # digraphs with min in-degree >= ceil(eta * n) admit perfect matchings
        rng = random.Random(9)
        for eta in (Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)):
            for n in range(2, 11):
                d = ceil(eta * n)
                if d >= n:
                    continue
                for _ in range(20):
                    gamma = random_digraph_min_indeg(n, d, rng.random() * 0.5, rng)
                    assert gamma.min_in_degree() >= d
                    result = solve_perfect_wfm(gamma, eta, 1 - eta)
                    assert isinstance(result, WeightedFractionalMatching), (n, eta)

    def test_min_indegree_exhaustive_n_le_4(self):
        # every digraph on n <= 4 vertices with min in-degree >= ceil(n/3)
        # admits a perfect (1/3, 2/3)-matching
        eta = Fraction(1, 3)
        for n in (2, 3, 4):
            pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
            d = ceil(eta * n)
            for mask in range(1 << len(pairs)):
                edges = [e for i, e in enumerate(pairs) if mask >> i & 1]
                gamma = Digraph.from_edges(n, edges)
                if gamma.min_in_degree() < d:
                    continue
                result = solve_perfect_wfm(gamma, eta, 1 - eta)
                assert isinstance(result, WeightedFractionalMatching)

    def test_agrees_with_float_oracle(self):
        rng = random.Random(31)
        etas = [Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)]
        for i in range(100):
            n = rng.randint(1, 10)
            gamma = random_digraph(n, rng.random(), rng)
            eta = etas[i % 3]
            exact = isinstance(
                solve_perfect_wfm(gamma, eta, 1 - eta), WeightedFractionalMatching
            )
            assert exact == scipy_feasible(gamma, eta, 1 - eta)

    def test_reversal_symmetry(self):
        # exchanging (eta, xi) on the reversed digraph preserves feasibility
        rng = random.Random(12)
        for _ in range(50):
            gamma = random_digraph(rng.randint(2, 8), rng.random(), rng)
            eta, xi = Fraction(1, 3), Fraction(2, 3)
            fwd = solve_perfect_wfm(gamma, eta, xi)
            rev = solve_perfect_wfm(gamma.reversed(), xi, eta)
            assert isinstance(fwd, WeightedFractionalMatching) == isinstance(
                rev, WeightedFractionalMatching
            )

    def test_denominator_within_hadamard_bound(self):
        # basis determinants bound the common denominator: with entries of
        # absolute value <= max(den(eta), den(xi)) after clearing fractions,
        # |det| <= (q * sqrt(n))^n covers every observed denominator
        rng = random.Random(77)
        eta = Fraction(1, 3)
        for _ in range(100):
            n = rng.randint(2, 8)
            gamma = random_digraph(n, 0.5, rng)
            result = solve_perfect_wfm(gamma, eta, 1 - eta)
            if isinstance(result, WeightedFractionalMatching):
                q = 3  # common denominator of eta and 1 - eta
                hadamard = int((q * q * n) ** (n / 2)) + 1
                assert result.common_denominator() <= hadamard


class TestVerify:
    def test_zero_weighting(self):
        gamma = Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
        w = WeightedFractionalMatching(
            Fraction(1, 3), Fraction(2, 3), {}, (Fraction(0),) * 3
        )
        report = verify_wfm(gamma, w)
        assert report.feasible and not report.perfect and report.total_weight == 0

    def test_unknown_edge(self):
        gamma = Digraph.from_edges(3, [(0, 1)])
        w = WeightedFractionalMatching(
            Fraction(1, 2), Fraction(1, 2), {(1, 2): Fraction(1)}, (Fraction(0),) * 3
        )
        with pytest.raises(UnknownEdge):
            verify_wfm(gamma, w)

    def test_solver_outputs_verify(self):
        rng = random.Random(15)
        checked = 0
        while checked < 100:
            gamma = random_digraph(rng.randint(2, 9), 0.6, rng)
            result = solve_perfect_wfm(gamma, Fraction(1, 3), Fraction(2, 3))
            if isinstance(result, WeightedFractionalMatching):
                checked += 1
                assert verify_wfm(gamma, result).perfect


class TestFarkas:
    def test_zero_vector_fails(self):
        gamma = Digraph.from_edges(2, [(0, 1)])
        assert not farkas_check(
            FarkasCertificate((Fraction(0), Fraction(0))), gamma, Fraction(1, 3), Fraction(2, 3)
        )

    def test_perturbed_certificate_fails(self):
        gamma = Digraph.from_edges(2, [(0, 1)])
        cert = solve_perfect_wfm(gamma, Fraction(1, 3), Fraction(2, 3))
        assert isinstance(cert, FarkasCertificate)
        assert farkas_check(cert, gamma, Fraction(1, 3), Fraction(2, 3))
        bad = FarkasCertificate(tuple(-y for y in cert.y))
        assert not farkas_check(bad, gamma, Fraction(1, 3), Fraction(2, 3))

    def test_hand_checked_certificate(self):
        # for eta < xi on a single edge u->v, y = (xi, -eta) works:
        # eta*xi - xi*eta = 0 >= 0 and xi - eta... must be negative, so
        # use y = (-xi, eta): eta*(-xi) + xi*eta = 0, sum = eta - xi < 0
        gamma = Digraph.from_edges(2, [(0, 1)])
        y = (Fraction(-2, 3), Fraction(1, 3))
        assert farkas_check(FarkasCertificate(y), gamma, Fraction(1, 3), Fraction(2, 3))


class TestIndependenceConsequence:
    def make_perfect(self, rng):
        while True:
            gamma = random_digraph(rng.randint(2, 9), 0.7, rng)
            result = solve_perfect_wfm(gamma, Fraction(1, 3), Fraction(2, 3))
            if isinstance(result, WeightedFractionalMatching):
                return gamma, result

    def test_singleton_true(self):
        rng = random.Random(3)
        gamma, w = self.make_perfect(rng)
        assert independence_consequence_check(gamma, w, 1)

    def test_3cycle_pairs_vacuous(self):
        gamma = Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
        w = solve_perfect_wfm(gamma, Fraction(1, 3), Fraction(2, 3))
        for s in (0b011, 0b101, 0b110):
            assert independence_consequence_check(gamma, w, s)

    def test_randomized_no_counterexample(self):
        rng = random.Random(8)
        for _ in range(300):
            gamma, w = self.make_perfect(rng)
            for _ in range(30):
                s = rng.getrandbits(gamma.n)
                assert independence_consequence_check(gamma, w, s)


class TestDirectedIo:
    def test_roundtrip(self):
        rng = random.Random(1)
        gamma = random_digraph(7, 0.4, rng)
        assert parse_directed_edge_list(format_directed_edge_list(gamma)) == gamma

    def test_loop_rejected(self):
        with pytest.raises(ParseError) as e:
            parse_directed_edge_list("3 1\n2 2\n")
        assert e.value.line == 2

    def test_both_directions_allowed(self):
        gamma = parse_directed_edge_list("2 2\n0 1\n1 0\n")
        assert gamma.edge_count() == 2
