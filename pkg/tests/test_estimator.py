"""Six-pass estimator: parameter formulas, pass budgets, degradation
paths, and the conditional expectation identity on a forced sample."""

import math
from dataclasses import replace
from fractions import Fraction

import pytest

from triad.assignment import AssignmentTable, assign_triangle, saturated_estimates
from triad.errors import ConfigError, InputError
from triad.estimator import (
    EstimatorConfig,
    compute_ell,
    compute_r,
    estimate,
    estimate_once,
)
from triad.graph import pick_anchor, triangles_exact_cn
from triad.generators import gen_book, gen_wheel
from triad.stream import EdgeStream

from conftest import k_complete, path_graph


def stream_for(g, order_seed=None):
    return EdgeStream.from_edges(g.edge_list(), order_seed=order_seed)


class TestComputeR:
    def test_frozen_arithmetic_and_cap(self):
        # ceil(7 * log2(1001) / 0.04 * (2000 * 15) / (0.6 * 1000)) recomputed
        expected = math.ceil(7 * math.log2(1001) / 0.04 * (2000 * 15) / (0.6 * 1000))
        assert expected == 87214
        assert compute_r(1001, 2000, 0.2, 1000, 3, c_r=7, cap=False) == 87214
        assert compute_r(1001, 2000, 0.2, 1000, 3, c_r=7) == 2000  # capped at m

    def test_t_hat_scaling(self):
        base = compute_r(1001, 2000, 0.2, 1000, 3, cap=False)
        tenfold = compute_r(1001, 2000, 0.2, 10_000, 3, cap=False)
        assert abs(10 * tenfold - base) <= 10

    def test_epsilon_halving_is_roughly_eightfold(self):
        # 1/eps^3 dependence; the assigned-fraction factor drifts slightly
        base = compute_r(1001, 2000, 0.02, 1000, 3, cap=False)
        halved = compute_r(1001, 2000, 0.01, 1000, 3, cap=False)
        assert 7.5 <= halved / base <= 8.5

    def test_rejects_bad_t_hat(self):
        with pytest.raises(ConfigError):
            compute_r(10, 10, 0.2, 0, 1)


class TestComputeEll:
    def test_frozen_arithmetic(self):
        expected = math.ceil(21 * math.log2(1001) / 0.04 * (2000 * 1500) / (500 * 0.6 * 1000))
        assert expected == 52328
        assert compute_ell(1001, 2000, 0.2, 1000, r=500, d_r=1500, c_ell=21) == 52328

    def test_doubling_d_r_doubles_ell(self):
        a = compute_ell(1001, 2000, 0.2, 1000, r=500, d_r=1500)
        b = compute_ell(1001, 2000, 0.2, 1000, r=500, d_r=3000)
        assert abs(b - 2 * a) <= 2

    def test_doubling_r_halves_ell(self):
        a = compute_ell(1001, 2000, 0.2, 1000, r=500, d_r=1500)
        b = compute_ell(1001, 2000, 0.2, 1000, r=1000, d_r=1500)
        assert abs(2 * b - a) <= 2

    def test_rejects_nonpositive_d_r(self):
        with pytest.raises(InputError):
            compute_ell(10, 10, 0.2, 1, r=5, d_r=0)


class TestConfigValidation:
    def good(self):
        return EstimatorConfig(epsilon=0.2, t_hat=10, kappa_hat=2)

    def test_good_config_passes_with_flags(self):
        flags = self.good().validate()
        assert "epsilon-above-analysis" in flags  # 0.2 >= 1/6

    def test_small_epsilon_is_unflagged(self):
        cfg = replace(self.good(), epsilon=0.05)
        assert cfg.validate() == []

    @pytest.mark.parametrize("field,value", [
        ("epsilon", 0.0), ("epsilon", 0.5), ("epsilon", -0.1),
        ("t_hat", 0), ("kappa_hat", 0),
        ("c_r", 6.0), ("c_ell", 20.0), ("c_s", 60.0),
        ("repetitions", 0), ("repetitions", 2),
        ("scale", 0.0), ("scale", 1.5),
        ("seed", -1), ("abort_multiplier", 1.0),
    ])
    def test_rejected_values(self, field, value):
        with pytest.raises(ConfigError):
            replace(self.good(), **{field: value}).validate()


class TestEstimateOnce:
    def test_triangle_free_always_zero(self):
        g = path_graph(40)
        for seed in range(6):
            cfg = EstimatorConfig(epsilon=0.2, t_hat=5, kappa_hat=1,
                                  seed=seed, scale=0.05, exact_fallback=False)
            x, report = estimate_once(stream_for(g), cfg)
            assert x == 0.0
            assert report.passes == 6

    def test_six_passes_after_stats(self):
        g, truth = gen_book(400)
        s = stream_for(g)
        s.stats()
        before = s.pass_counter
        cfg = EstimatorConfig(epsilon=0.2, t_hat=truth.triangles, kappa_hat=2,
                              seed=1, scale=0.004)
        _, report = estimate_once(s, cfg)
        assert s.pass_counter - before == 6
        assert report.passes == 6

    def test_estimate_support(self):
        # X is 0 or sits in [(m/r) d_R / ell, (m/r) d_R], a rational with
        # denominator ell
        from triad.estimator import _Repetition, _drive_sequential
        g, truth = gen_book(400)
        for seed in range(8):
            cfg = EstimatorConfig(epsilon=0.2, t_hat=truth.triangles, kappa_hat=2,
                                  seed=seed, scale=0.004)
            s = stream_for(g, order_seed=seed)
            rep = _Repetition(s.stats(), cfg, rep=0, base_flags=cfg.validate())
            _drive_sequential(s, [rep])
            if "exact-fallback" in rep.flags:
                continue
            unit = (g.m / rep.r) * rep.d_r / rep.ell
            if rep.x == 0.0:
                continue
            assert unit - 1e-9 <= rep.x <= rep.ell * unit + 1e-9
            score = rep.x / unit
            assert abs(score - round(score)) < 1e-6

    def test_exact_fallback_on_tiny_graph(self):
        g = k_complete(4)
        cfg = EstimatorConfig(epsilon=0.2, t_hat=1, kappa_hat=3, seed=0)
        x, report = estimate_once(stream_for(g), cfg)
        assert "exact-fallback" in report.flags
        assert x == 4.0  # exact count, not an estimate
        assert report.passes == 1  # one collection pass

    def test_empty_stream_rejected(self):
        cfg = EstimatorConfig(epsilon=0.2, t_hat=1, kappa_hat=1)
        with pytest.raises(InputError):
            estimate_once(EdgeStream.from_edges([]), cfg)

    def test_report_json_keys_are_frozen(self):
        g, truth = gen_book(50)
        cfg = EstimatorConfig(epsilon=0.2, t_hat=truth.triangles, kappa_hat=2, seed=3)
        _, report = estimate_once(stream_for(g), cfg)
        assert list(report.to_json_dict().keys()) == [
            "estimate", "passes", "stored_edges_peak", "r", "ell", "s",
            "assignment_calls", "memo_size", "seed", "config",
        ]


class TestForcedSampleIdentity:
    """With R forced to the whole edge set and saturated (deterministic)
    assignment, E[X] equals the total number of assigned triangles."""

    def expected_assigned_total(self, g, epsilon, t_hat, kappa_hat):
        est = saturated_estimates(g, epsilon, t_hat, kappa_hat)
        table = AssignmentTable()
        assigned = 0
        from triad.graph import enumerate_triangles
        for tri in enumerate_triangles(g):
            if assign_triangle(tri, est, epsilon, kappa_hat, table) is not None:
                assigned += 1
        return assigned

    def exact_conditional_expectation(self, g, epsilon, t_hat, kappa_hat):
        """E[Y | R = E] for one draw, by Fraction enumeration."""
        est = saturated_estimates(g, epsilon, t_hat, kappa_hat)
        table = AssignmentTable()
        edges = g.edge_list()
        d_r = sum(min(g.degree(u), g.degree(v)) for u, v in edges)
        total = Fraction(0)
        for u, v in edges:
            d_u, d_v = g.degree(u), g.degree(v)
            d_e = min(d_u, d_v)
            anchor = pick_anchor(u, v, d_u, d_v)
            other = v if anchor == u else u
            for w in g.neighbors(anchor):
                if w == other or not g.has_edge(other, w):
                    continue
                tri = tuple(sorted((u, v, w)))
                if assign_triangle(tri, est, epsilon, kappa_hat, table) == (u, v):
                    total += Fraction(d_e, d_r) * Fraction(1, d_e)
        return total, d_r

    def test_k4_conditional_expectation_identity(self):
        g = k_complete(4)
        ey, d_r = self.exact_conditional_expectation(g, 0.25, 4, 3)
        assigned = self.expected_assigned_total(g, 0.25, 4, 3)
        assert assigned == 4
        assert ey == Fraction(assigned, d_r)
        # E[X] = (m/r) * d_R * E[Y] with r = m is exactly the assigned total
        assert ey * d_r == 4

    def test_k4_forced_sample_empirical_mean(self):
        g = k_complete(4)
        forced = g.edge_list()
        xs = []
        for seed in range(400):
            cfg = EstimatorConfig(epsilon=0.25, t_hat=4, kappa_hat=3, seed=seed,
                                  exact_fallback=False)
            x, report = estimate_once(stream_for(g), cfg, _forced_sample=forced)
            assert report.r == 6
            xs.append(x)
        mean = sum(xs) / len(xs)
        var = sum((x - mean) ** 2 for x in xs) / len(xs)
        se = (var / len(xs)) ** 0.5
        assert abs(mean - 4.0) <= 4 * max(se, 0.05)

    def test_book3_conditional_expectation_identity(self):
        g, truth = gen_book(3)
        ey, d_r = self.exact_conditional_expectation(g, 0.25, truth.triangles, truth.kappa)
        assigned = self.expected_assigned_total(g, 0.25, truth.triangles, truth.kappa)
        assert ey == Fraction(assigned, d_r)


class TestRepetitions:
    def test_single_repetition_is_the_estimate(self):
        g, truth = gen_book(300)
        cfg = EstimatorConfig(epsilon=0.2, t_hat=truth.triangles, kappa_hat=2,
                              repetitions=1, seed=2, scale=0.004)
        x1, _ = estimate_once(stream_for(g, order_seed=1), cfg)
        x2, _ = estimate(stream_for(g, order_seed=1), cfg)
        assert x1 == x2

    def test_median_of_identical_values(self):
        g = path_graph(30)  # every repetition returns 0
        cfg = EstimatorConfig(epsilon=0.2, t_hat=3, kappa_hat=1,
                              repetitions=5, seed=0, scale=0.05,
                              exact_fallback=False)
        x, _ = estimate(stream_for(g), cfg)
        assert x == 0.0

    def test_sequential_pass_total(self):
        g, truth = gen_book(400)
        s = stream_for(g)
        s.stats()
        before = s.pass_counter
        cfg = EstimatorConfig(epsilon=0.2, t_hat=truth.triangles, kappa_hat=2,
                              repetitions=3, seed=4, scale=0.004)
        _, report = estimate(s, cfg)
        assert s.pass_counter - before == 18
        assert report.passes == 6

    def test_share_passes_runs_six_total_and_matches_sequential(self):
        g, truth = gen_book(400)
        cfg = EstimatorConfig(epsilon=0.2, t_hat=truth.triangles, kappa_hat=2,
                              repetitions=5, seed=4, scale=0.004)
        s_seq = stream_for(g, order_seed=9)
        x_seq, _ = estimate(s_seq, cfg)
        s_sh = stream_for(g, order_seed=9)
        s_sh.stats()
        before = s_sh.pass_counter
        x_sh, report = estimate(s_sh, replace(cfg, share_passes=True))
        assert s_sh.pass_counter - before == 6
        assert x_sh == x_seq
        assert "shared-passes" in report.flags

    def test_bit_identical_reports(self):
        g, truth = gen_book(250)
        cfg = EstimatorConfig(epsilon=0.2, t_hat=truth.triangles, kappa_hat=2,
                              repetitions=3, seed=11, scale=0.005)
        _, r1 = estimate(stream_for(g, order_seed=2), cfg)
        _, r2 = estimate(stream_for(g, order_seed=2), cfg)
        assert r1.to_json_dict() == r2.to_json_dict()

    def test_tables_are_per_repetition(self):
        g, truth = gen_book(400)
        cfg = EstimatorConfig(epsilon=0.2, t_hat=truth.triangles, kappa_hat=2,
                              repetitions=3, seed=4, scale=0.004)
        _, report = estimate(stream_for(g), cfg)
        assert len(report.tables) == 3
        assert report.memo_size == sum(len(t) for t in report.tables)


class TestDegradationPaths:
    def test_space_abort_flag(self, monkeypatch):
        # shrink the budget to force the Markov-style abort deterministically
        g, truth = gen_book(400)
        cfg = EstimatorConfig(epsilon=0.2, t_hat=truth.triangles, kappa_hat=2,
                              seed=1, scale=0.004, exact_fallback=False,
                              abort_multiplier=1.000001)
        x, report = estimate_once(stream_for(g, order_seed=5), cfg)
        assert "space-abort" in report.flags
        assert x == 0.0
        assert report.passes < 6

    def test_fallback_estimate_is_exact(self):
        g, truth = gen_wheel(30)
        cfg = EstimatorConfig(epsilon=0.2, t_hat=1, kappa_hat=3, seed=0)
        x, report = estimate_once(stream_for(g), cfg)
        assert "exact-fallback" in report.flags
        assert x == triangles_exact_cn(g) == truth.triangles
