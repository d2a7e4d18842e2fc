import math

import numpy as np
import pytest

from gibbsgraphs.graph import SegmentGraph, h_p
from gibbsgraphs.hierarchy import (
    Critical,
    SubCritical,
    SuperCritical,
    critical_index,
    g_star,
    layer,
    layer_spacings,
    round_spacing,
    scaling_csv,
    verify_scaling,
)
from gibbsgraphs.measures import subgraph_log_prob


class TestLayer:
    def test_examples(self):
        assert layer(10, 3) == [(1, 4), (4, 7), (7, 10)]
        assert layer(7, 10) == [(1, 7)]
        assert layer(2, 1) == [(1, 2)]

    def test_spacing_one_is_path(self):
        assert layer(6, 1) == [(i, i + 1) for i in range(1, 6)]

    def test_uneven_tail(self):
        # 1 + 2*4 = 9 < 11 <= 13
        assert layer(11, 4) == [(1, 5), (5, 9), (9, 11)]

    @pytest.mark.parametrize("ell", [0, -3, 2.5, True])
    def test_invalid_spacing(self, ell):
        with pytest.raises(ValueError):
            layer(10, ell)

    def test_all_layers_valid(self):
        for n in range(2, 60):
            for ell in range(1, n + 3):
                edges = layer(n, ell)
                assert edges[0][0] == 1 and edges[-1][1] == n
                assert all(1 <= x < y <= n for x, y in edges)
                assert all(a[1] == b[0] for a, b in zip(edges, edges[1:]))


class TestRegimes:
    def test_parameter_checks(self):
        for bad in (lambda: SubCritical(1.0, 0.5), lambda: SubCritical(0.5, 1.0), lambda: SuperCritical(1.0, 0.5),
                    lambda: SuperCritical(2.0, 0.0), lambda: Critical(1), lambda: Critical(2, gamma=1.5)):
            with pytest.raises(ValueError):
                bad()

    def test_critical_index(self):
        assert critical_index(0.4) == 3
        assert critical_index(0.7) == 2
        with pytest.raises(ValueError):
            critical_index(0.5)

    def test_round_spacing(self):
        assert round_spacing(2.5, 10) == 3
        assert round_spacing(0.2, 10) == 1
        assert round_spacing(15.0, 10) == 10


class TestGStar:
    def test_supercritical_example(self):
        assert layer_spacings(16, SuperCritical(2, 0.5)) == [1, 2, 4, 8]
        want = set()
        for ell in (2, 4, 8):
            want.update(e for e in layer(16, ell) if e[1] - e[0] >= 2)
        assert g_star(16, SuperCritical(2, 0.5)).edges == want

    def test_subcritical_strict_inequality(self):
        # 16 * 2**-2 == 4 is not below 16**0.5, so the index is 3
        assert layer_spacings(16, SubCritical(0.5, 0.5)) == [1, 2, 4, 8, 16]
        g = g_star(16, SubCritical(0.5, 0.5))
        assert (1, 16) in g.edges and (1, 9) in g.edges and (1, 5) in g.edges and (1, 3) in g.edges

    def test_critical_example(self):
        assert layer_spacings(100, Critical(2)) == [1, 10]
        assert g_star(100, Critical(2)).edges == frozenset(layer(100, 10))

    def test_contains_path_and_is_valid(self):
        g = g_star(50, Critical(3))
        assert all(g.has_edge(i, i + 1) for i in range(1, 50))

    def test_fuzz_no_out_of_range_edges(self):
        rng = np.random.default_rng(7)
        for _ in range(10_000):
            n = int(rng.integers(2, 400))
            kind = rng.integers(3)
            if kind == 0:
                reg = SubCritical(float(rng.uniform(0.01, 0.99)), float(rng.uniform(1e-3, 1 - 1e-3)))
            elif kind == 1:
                reg = SuperCritical(float(rng.uniform(1.01, 5)), float(rng.uniform(1e-3, 1 - 1e-3)))
            else:
                reg = Critical(int(rng.integers(2, 8)))
            for ell in layer_spacings(n, reg):
                assert 1 <= ell <= n
            g = g_star(n, reg)
            assert all(1 <= x and y <= n and y - x >= 2 for x, y in g.edges)

    @pytest.mark.parametrize("reg", [SubCritical(0.5, 0.3), SuperCritical(2.0, 0.6), Critical(3)])
    def test_diameter_nonincreasing_in_layers(self, reg):
        n = 500
        edges = set()
        prev = h_p(SegmentGraph(n), math.inf)
        for ell in layer_spacings(n, reg):
            edges.update(e for e in layer(n, ell) if e[1] - e[0] >= 2)
            cur = h_p(SegmentGraph(n, frozenset(edges)), math.inf)
            assert cur <= prev
            prev = cur
        assert prev == h_p(g_star(n, reg), math.inf)

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            g_star(1, Critical(2))


class TestVerifyScaling:
    def test_supercritical_ratio_bounded(self):
        rows = verify_scaling([2**e for e in range(8, 15)], SuperCritical(2, 0.5), math.inf)
        ratios = [r.ratio_h for r in rows]
        assert max(ratios) / min(ratios) < 2.0
        assert all(0.3 < x < 3 for x in ratios)

    def test_critical_ratio_bounded(self):
        rows = verify_scaling([100, 10_000], Critical(2), math.inf)
        assert all(r.ratio_h <= 3 * 3 for r in rows)
        assert rows[0].alpha_or_i == 2.0

    def test_two_vertices(self):
        for reg in (SubCritical(0.5, 0.5), SuperCritical(2, 0.5), Critical(2)):
            (row,) = verify_scaling([2], reg, 2.0)
            assert row.h_p == 1.0 and row.log_prob == 0.0

    def test_log_prob_matches(self):
        (row,) = verify_scaling([64], SubCritical(0.5, 0.4), 1.0)
        g = g_star(64, SubCritical(0.5, 0.4))
        assert row.log_prob == subgraph_log_prob(g, 0.5)
        assert row.ratio_logp == pytest.approx(-row.log_prob / 64 ** (1 - 0.4 * 0.5))

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            verify_scaling([], Critical(2), 1.0)

    def test_csv(self):
        text = scaling_csv(verify_scaling([16, 32], SuperCritical(2, 0.5), 2.0))
        lines = text.strip().split("\n")
        assert lines[0] == "n,alpha_or_i,h_p,log_prob,ratio_h,ratio_logp"
        assert len(lines) == 3 and lines[1].startswith("16,0.5,")
