import random
from fractions import Fraction

import pytest

from tritile.barriers import DivisibilityBarrier, check_divisibility_barrier
from tritile.constructions import (
    equitable_sizes,
    f_rt,
    gen_be,
    gen_er,
    gen_g1,
    gen_g2,
    gen_g3,
    gen_g4,
    gen_kfree_question,
    gen_rt,
    gen_space_barrier_k5free,
)
from tritile.errors import RangeError
from tritile.graphs import enumerate_triangles, format_edge_list, has_clique, mask_of


class TestFrt:
    def test_r7(self):
        assert f_rt(7) == Fraction(2, 3)
        assert f_rt(7) / 2 == Fraction(1, 3)

    def test_r3(self):
        assert f_rt(3) == 0

    def test_r6(self):
        assert f_rt(6) == Fraction(4, 7)

    def test_r5_below_third(self):
        assert f_rt(5) / 2 < Fraction(1, 3)

    def test_range(self):
        with pytest.raises(RangeError):
            f_rt(2)


class TestDeterministicFamilies:
    def test_g1_values(self):
        for m in (1, 2, 3, 4):
            r = gen_g1(m)
            assert r.graph.n == 3 * m
            assert r.measured["min_degree"] == 2 * m - 1
            assert r.measured["tiling_deficit"] == 3
            assert r.passed

    def test_g2_values(self):
        for m in (1, 2):
            r = gen_g2(m)
            assert r.graph.n == 6 * m + 3
            assert r.measured["min_degree"] == 3 * m + 1 == r.graph.n // 2
            assert r.measured["alpha_lower"] == 2 and r.measured["alpha_exact"]
            assert r.measured["tiling_deficit"] == 3
            assert r.passed

    def test_g3_values(self):
        for m in (1, 2):
            r = gen_g3(m)
            assert r.graph.n == 6 * m + 4
            assert r.measured["min_degree"] == 3 * m + 1 == r.graph.n // 2 - 1
            assert r.measured["tiling_deficit"] == 4
            assert r.passed

    def test_deterministic_edge_lists(self):
        for gen, m in ((gen_g1, 3), (gen_g2, 1), (gen_g3, 2)):
            assert format_edge_list(gen(m).graph) == format_edge_list(gen(m).graph)


class TestEr:
    def test_triangle_free_always(self):
        for seed in range(5):
            r = gen_er(80, seed=seed)
            assert r.measured["triangle_free"]
            assert not enumerate_triangles(r.graph)

    def test_maximal(self):
        # saturation: every non-edge closes a triangle
        g = gen_er(40, seed=3).graph
        for u in range(40):
            for v in range(u + 1, 40):
                if not g.has_edge(u, v):
                    assert g.adj[u] & g.adj[v]

    def test_500_gates(self):
        # empirical gates frozen from pilot runs across 20 seeds
        for seed in range(20):
            r = gen_er(500, seed=seed, target_min_degree=10)
            assert r.passed
            assert r.measured["alpha_lower"] <= 120
            assert r.measured["alpha_upper"] <= 335

    def test_reproducible(self):
        assert format_edge_list(gen_er(60, seed=9).graph) == format_edge_list(
            gen_er(60, seed=9).graph
        )


class TestBe:
    def test_200_verified(self):
        for seed in range(20):
            r = gen_be(200, seed=seed)
            assert r.measured["parts_triangle_free"]
            assert r.measured["k4_free"] is True
            assert r.measured["cross_min_degree"] >= 0.2 * 200

    def test_parts_triangle_free_exactly(self):
        r = gen_be(120, seed=2)
        half = 60
        sub1, _ = r.graph.induced(mask_of(range(half)))
        sub2, _ = r.graph.induced(mask_of(range(half, 120)))
        assert not enumerate_triangles(sub1) and not enumerate_triangles(sub2)

    def test_odd_rejected(self):
        with pytest.raises(RangeError):
            gen_be(201)


class TestRt:
    def test_r5_n300(self):
        r = gen_rt(300, 5, 0.05, 0.05, seed=2)
        assert r.measured["kr_free"] is True
        assert r.measured["min_degree"] >= (float(f_rt(5)) - 0.05) * 300
        assert r.measured["equitable"]
        assert r.passed

    def test_r3_is_er(self):
        r = gen_rt(90, 3, 0.05, 0.05, seed=1)
        assert not enumerate_triangles(r.graph)  # K3-free

    def test_even_r6(self):
        r = gen_rt(200, 6, 0.05, 0.05, seed=3)
        assert r.measured["kr_free"] is True
        assert r.passed

    def test_equitable_sizes(self):
        for n, p in ((10, 3), (12, 4), (7, 2)):
            sizes = equitable_sizes(n, p)
            assert sum(sizes) == n and max(sizes) - min(sizes) <= 1


class TestG4:
    def test_barrier_confirmed(self):
        r = gen_g4(30, r=5, seed=4)
        assert r.measured["divisibility_barrier"]
        assert r.measured["kr_free"] is True
        assert r.passed
        # the barriers module agrees on the ordered split
        n_left = r.graph.n // 2 - 1
        barrier = check_divisibility_barrier(
            r.graph, mask_of(range(n_left, r.graph.n)), mask_of(range(n_left))
        )
        assert isinstance(barrier, DivisibilityBarrier)

    def test_not_perfect(self):
        r = gen_g4(30, r=5, seed=4)
        assert r.measured["tiling_deficit"] >= 1

    def test_divisibility_required(self):
        with pytest.raises(RangeError):
            gen_g4(32)


class TestSpaceBarrierK5Free:
    def test_n15(self):
        r = gen_space_barrier_k5free(15, seed=5)
        assert r.measured["space_barrier"]
        assert r.measured["k5_free"] is True
        assert 3 * r.measured["min_degree"] >= 15
        assert r.measured["tiling_deficit"] >= 3
        assert r.passed

    def test_n30(self):
        r = gen_space_barrier_k5free(30, seed=1)
        assert r.passed and r.measured["tiling_deficit"] >= 3

    def test_preconditions(self):
        with pytest.raises(RangeError):
            gen_space_barrier_k5free(16)


class TestKfreeQuestion:
    def test_odd_k5(self):
        r = gen_kfree_question(250, 5, seed=6)
        assert r.measured["min_degree"] >= (1 - 2 / 5) * 250 - 2
        assert r.measured["clique_free"] is True  # K7-free
        assert r.passed

    def test_even_k4(self):
        r = gen_kfree_question(240, 4, seed=2)
        assert r.measured["clique_free"] is True  # K5-free
        assert r.passed

    def test_k4free_triangle_variant(self):
        r = gen_kfree_question(300, 4, seed=7, variant="k4free_triangle")
        assert r.graph.n == 300
        assert r.measured["k4_free"] is True
        assert r.measured["space_barrier"]
        assert r.passed

    def test_clique_free_ktiling_variant(self):
        r = gen_kfree_question(250, 5, seed=8, variant="clique_free_ktiling")
        assert r.measured["clique_free"] is True  # K6-free
        assert r.passed

    def test_k4_clique_freeness_cross_check(self):
        r = gen_kfree_question(120, 4, seed=3, variant="k4free_triangle")
        assert has_clique(r.graph, 4) is False
