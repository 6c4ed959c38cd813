import math
import random
from fractions import Fraction

import pytest

from tritile.errors import PreconditionViolated, RangeError, SizeBudget, TooLarge
from tritile.graphs import Graph, mask_of
from tritile.regularity import (
    BipartitePair,
    check_regular_exhaustive,
    check_regular_sampled,
    check_super_regular,
    chernoff_bound,
    codegree_graph,
    density,
    kr_necessary_check,
    kr_sufficient,
    make_super_regular,
    random_slicing_experiment,
    refute_regular_codegree,
    trial_seed,
)

from oracles import regularity_extremes_bruteforce


def complete_pair(na: int, nb: int) -> BipartitePair:
    g = Graph.complete_multipartite([na, nb])
    return BipartitePair(g, mask_of(range(na)), mask_of(range(na, na + nb)))


def random_pair(na: int, nb: int, p: float, rng: random.Random) -> BipartitePair:
    edges = [(u, na + v) for u in range(na) for v in range(nb) if rng.random() < p]
    g = Graph.from_edges(na + nb, edges)
    return BipartitePair(g, mask_of(range(na)), mask_of(range(na, na + nb)))


def half_half_pair(na: int, nb: int) -> BipartitePair:
    """A split in two halves, each complete to its own half of B."""
    edges = [(u, na + v) for u in range(na // 2) for v in range(nb // 2)]
    edges += [(u, na + v) for u in range(na // 2, na) for v in range(nb // 2, nb)]
    g = Graph.from_edges(na + nb, edges)
    return BipartitePair(g, mask_of(range(na)), mask_of(range(na, na + nb)))


class TestDensity:
    def test_complete(self):
        assert density(complete_pair(3, 4)) == 1

    def test_empty(self):
        g = Graph.empty(5)
        assert density(BipartitePair(g, mask_of(range(2)), mask_of(range(2, 5)))) == 0

    def test_g1_parts(self):
        g = Graph.complete_multipartite([2, 3, 4])
        assert density(BipartitePair(g, mask_of(range(2)), mask_of(range(2, 5)))) == 1

    def test_two_computations_agree(self):
        # edge count vs average degree
        rng = random.Random(1)
        p = random_pair(7, 9, 0.4, rng)
        from tritile.graphs import bits

        avg = Fraction(
            sum((p.host.adj[u] & p.B).bit_count() for u in bits(p.A)), p.a_size
        )
        assert density(p) == avg / p.b_size


class TestExhaustive:
    def test_complete_always_regular(self):
        p = complete_pair(5, 5)
        for eps in (Fraction(1, 100), Fraction(1, 2)):
            assert check_regular_exhaustive(p, 1, eps).holds

    def test_minus_matching_thresholds(self):
        # K_{5,5} minus a perfect matching: singleton pairs reach densities
        # 0 and 1, so (4/5, eps)-regularity needs eps >= 4/5
        edges = [(u, 5 + v) for u in range(5) for v in range(5) if u != v]
        g = Graph.from_edges(10, edges)
        p = BipartitePair(g, mask_of(range(5)), mask_of(range(5, 10)))
        assert not check_regular_exhaustive(p, Fraction(4, 5), Fraction(1, 5)).holds
        assert check_regular_exhaustive(p, Fraction(4, 5), Fraction(4, 5)).holds

    def test_planted_empty_block_witnessed(self):
        # 6x6 complete except an empty 2x2 block
        hole_a, hole_b = {0, 1}, {6, 7}
        edges = [
            (u, v)
            for u in range(6)
            for v in range(6, 12)
            if not (u in hole_a and v in hole_b)
        ]
        g = Graph.from_edges(12, edges)
        p = BipartitePair(g, mask_of(range(6)), mask_of(range(6, 12)))
        cert = check_regular_exhaustive(p, density(p), Fraction(1, 4))
        assert not cert.holds
        xs, ys = set(cert.witness["X"]), set(cert.witness["Y"])
        e = sum(1 for x in xs for y in ys if g.has_edge(x, y))
        val = Fraction(e, len(xs) * len(ys))
        d = density(p)
        assert val < d - Fraction(1, 4) or val > d + Fraction(1, 4)

    def test_extremes_match_bruteforce(self):
        rng = random.Random(42)
        from tritile.regularity import _density_extremes

        for _ in range(15):
            na, nb = rng.randint(2, 6), rng.randint(2, 6)
            p = random_pair(na, nb, rng.random(), rng)
            eps = Fraction(rng.randint(1, 4), 10)
            mn, _, mx, _ = _density_extremes(p, eps)
            lo, hi = regularity_extremes_bruteforce(
                p.host, list(range(na)), list(range(na, na + nb)), eps
            )
            assert (mn, mx) == (lo, hi)

    def test_too_large(self):
        with pytest.raises(TooLarge):
            check_regular_exhaustive(complete_pair(17, 4), 1, Fraction(1, 10))

    def test_sampled_agrees_on_refutations(self):
        p = half_half_pair(10, 10)
        cert = check_regular_sampled(p, density(p), Fraction(1, 10), samples=400, seed=3)
        assert not cert.holds


class TestCodegreeGraph:
    def test_complete(self):
        dg = codegree_graph(complete_pair(6, 6), Fraction(1, 10))
        assert dg.edge_count() == 15  # complete on A

    def test_isolated_vertex(self):
        edges = [(u, 5 + v) for u in range(1, 5) for v in range(5)]
        g = Graph.from_edges(10, edges)
        p = BipartitePair(g, mask_of(range(5)), mask_of(range(5, 10)))
        dg = codegree_graph(p, Fraction(1, 10))
        assert dg.graph.degree(0) == 0

    def test_random_dense_nearly_complete(self):
        # at eps = 0.1 the degree filter keeps essentially every vertex;
        # measured floor across these seeds is 0.9897
        for seed in range(5):
            rng = random.Random(seed)
            p = random_pair(200, 200, 0.5, rng)
            dg = codegree_graph(p, Fraction(1, 10))
            assert dg.edge_count() / (200 * 199 / 2) >= 0.985


class TestKrSufficient:
    def test_complete(self):
        cert = kr_sufficient(complete_pair(10, 10), Fraction(1, 4))
        assert cert is not None and cert.holds
        assert cert.method == "codegree_sufficient"

    def test_half_half_fails(self):
        # cross-half codegrees collapse to zero, so D is bipartite and misses
        # the (1 - 5 eps)|A|^2/2 edge count at small eps
        assert kr_sufficient(half_half_pair(64, 64), Fraction(1, 32)) is None

    def test_random_dense_certified(self):
        # eps = 0.05 -> inflated eps' = (0.8)^(1/5) ~ 0.956
        for seed in range(5):
            rng = random.Random(seed)
            p = random_pair(200, 200, 0.5, rng)
            cert = kr_sufficient(p, Fraction(1, 20))
            assert cert is not None
            assert math.isclose(cert.eps, 0.8 ** 0.2, rel_tol=1e-12)

    def test_precondition(self):
        with pytest.raises(PreconditionViolated):
            kr_sufficient(complete_pair(4, 4), Fraction(1, 10))  # |A| < 2/eps


class TestKrNecessary:
    def test_exhaustively_regular_pairs_pass(self):
        # joint soundness: exhaustive (d, eps)-regular with |B| >= 1/d implies
        # the codegree bound. Dense pairs are the ones that qualify at small
        # scale, where block extremes otherwise refute regularity.
        rng = random.Random(11)
        checked = 0
        for _ in range(150):
            na, nb = rng.randint(6, 12), rng.randint(6, 12)
            p = random_pair(na, nb, 0.75 + 0.2 * rng.random(), rng)
            d = density(p)
            if d == 0 or Fraction(nb) < 1 / d:
                continue
            for eps_pct in (20, 30, 40):
                eps = Fraction(eps_pct, 100)
                if check_regular_exhaustive(p, d, eps).holds:
                    checked += 1
                    assert kr_necessary_check(p, d, eps)
        assert checked > 30

    def test_planted_refuted(self):
        p = half_half_pair(64, 64)
        assert not kr_necessary_check(p, density(p), Fraction(1, 32))
        cert = refute_regular_codegree(p, density(p), Fraction(1, 32))
        assert cert is not None and not cert.holds
        assert cert.method == "codegree_necessary_failed"

    def test_complete_passes(self):
        assert kr_necessary_check(complete_pair(8, 8), 1, Fraction(1, 10))

    def test_precondition(self):
        with pytest.raises(PreconditionViolated):
            kr_necessary_check(complete_pair(4, 4), Fraction(1, 100), Fraction(1, 10))


class TestSuperRegular:
    def test_complete(self):
        cert = check_super_regular(complete_pair(6, 6), 1, Fraction(1, 10))
        assert cert.holds and cert.kind == "super_regular"

    def test_star_removed_fails_floor(self):
        # remove all edges at one A-vertex
        edges = [(u, 6 + v) for u in range(1, 6) for v in range(6)]
        g = Graph.from_edges(12, edges)
        p = BipartitePair(g, mask_of(range(6)), mask_of(range(6, 12)))
        cert = check_super_regular(p, density(p), Fraction(1, 10))
        assert not cert.holds

    def test_make_super_regular_reenactment(self):
        # trim a regular-ish random pair, keep >= (1-eps) of each side, and
        # re-certify (d, 2 eps)-super-regularity exhaustively
        rng = random.Random(5)
        eps = Fraction(3, 10)
        d = Fraction(7, 10)
        done = 0
        for _ in range(60):
            p = random_pair(12, 12, 0.85, rng)
            if not check_regular_exhaustive(p, d, eps, kind="geq_regular").holds:
                continue
            x, y = make_super_regular(p, d, eps)
            assert x.bit_count() >= (1 - eps) * p.a_size
            assert y.bit_count() >= (1 - eps) * p.b_size
            sub = BipartitePair(p.host, x, y)
            cert = check_super_regular(sub, d, 2 * eps)
            assert cert.holds
            done += 1
        assert done >= 5


class TestSlicingLemmaProperty:
    def test_subpairs_inherit_regularity(self):
        # a (d, eps)-regular pair restricted to beta-fractions is
        # (d, eps/beta)-regular
        rng = random.Random(9)
        beta = Fraction(1, 2)
        eps = Fraction(2, 5)
        tried = 0
        for _ in range(40):
            p = random_pair(8, 8, 0.9, rng)
            d = density(p)
            if not check_regular_exhaustive(p, d, eps).holds:
                continue
            tried += 1
            for _ in range(5):
                xs = rng.sample(range(8), 4)
                ys = rng.sample(range(8, 16), 4)
                sub = BipartitePair(p.host, mask_of(xs), mask_of(ys))
                assert check_regular_exhaustive(sub, d, eps / beta).holds
        assert tried >= 3


class TestChernoff:
    def test_plug_in(self):
        assert math.isclose(chernoff_bound(300, Fraction(1, 10)), 2 * math.exp(-1))

    def test_tiny_a_vacuous(self):
        assert chernoff_bound(300, 1e-9) > 1.999

    def test_range(self):
        with pytest.raises(RangeError):
            chernoff_bound(10, 0)
        with pytest.raises(RangeError):
            chernoff_bound(10, 1.5)

    def test_empirical_tails_below_bound(self):
        # hypergeometric sampling never beats the bound
        rng = random.Random(123)
        n_pop, k_good, draws = 200, 100, 60
        mean = draws * k_good / n_pop
        samples = []
        pop = [1] * k_good + [0] * (n_pop - k_good)
        for _ in range(2000):
            samples.append(sum(rng.sample(pop, draws)))
        for a in (0.1, 0.2, 0.3, 0.5):
            freq = sum(1 for s in samples if abs(s - mean) >= a * mean) / len(samples)
            assert freq <= chernoff_bound(mean, a)


class TestRandomSlicing:
    def test_complete_pair_perfect(self):
        p = complete_pair(16, 16)
        stats = random_slicing_experiment(
            p, [8, 8], [8, 8], eps=Fraction(1, 10), seed=1, trials=5
        )
        assert stats.pass_rate == 1.0
        assert stats.density_dev_max == 0.0
        assert stats.slice_degree_dev_max == 0.0

    def test_random_half_density(self):
        rng = random.Random(2)
        p = random_pair(120, 120, 0.5, rng)
        stats = random_slicing_experiment(
            p, [40, 40], [40, 40], eps=Fraction(1, 20), seed=7, trials=30
        )
        assert stats.density_within[0.05] >= 0.95
        assert stats.pass_rate >= 0.95

    def test_adversarial_pair_collapses(self):
        p = half_half_pair(64, 64)
        stats = random_slicing_experiment(
            p, [32, 32], [32, 32], eps=Fraction(1, 20), seed=3, trials=10
        )
        assert stats.pass_rate < 0.5

    def test_size_budget(self):
        with pytest.raises(SizeBudget):
            random_slicing_experiment(
                complete_pair(10, 10), [6, 6], [5], eps=Fraction(1, 10)
            )

    def test_trial_seeds_differ(self):
        assert trial_seed(1, 0) != trial_seed(1, 1) != trial_seed(2, 1)
