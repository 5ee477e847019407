"""Return-map machinery: composition, derivatives, intervals, roots."""

import math
from dataclasses import replace

import numpy as np
import pytest

from ricker2 import (
    NotPeriodicFactor,
    RhoOutOfRange,
    TSubsequence,
    UnboundedSubsequence,
    build_return_map,
    classify,
    comparison_fixed_point,
    f_eval,
    f_iter,
    find_periodic_points,
    for_initial,
    g_eval,
    h_eval,
    invariant_interval,
    make_cycle,
    map_derivative,
    map_derivative_log,
    orbit_decomposition_check,
    parity_step,
    parity_update_pairs,
)


class TestGEval:
    def test_zero_fixed(self):
        assert g_eval(3.7, 0.0) == 0.0

    def test_unit_point(self):
        assert abs(g_eval(math.e, 1.0) - 1.0) < 1e-15

    def test_scalar(self):
        assert g_eval(2.0, 1.0) == 2.0 * math.exp(-1.0)
        assert abs(g_eval(2.0, 1.0) - 0.735759) < 1e-6


class TestComposedMap:
    def test_first_factor_is_seed(self, cycle_odd_small):
        fs = for_initial(cycle_odd_small, (1.0, 0.8))
        cm = build_return_map(fs)
        assert cm.q == 6
        assert cm.t0 == fs.t0

    def test_pairwise_products(self, cycle_odd_small):
        cm = build_return_map(for_initial(cycle_odd_small, (1.0, 0.8)))
        for k in range(cm.q - 1):
            prod = cm.factor_cycle[k + 1] * cm.factor_cycle[k]
            want = math.exp(cycle_odd_small.value_at(k))
            assert abs(prod - want) <= 5e-16 * want

    def test_h_chain_prefixes(self, cycle_odd_small):
        cm = build_return_map(for_initial(cycle_odd_small, (1.0, 0.8)))
        x = 0.9
        acc = x
        for k in range(cm.q):
            acc = g_eval(cm.factor_cycle[k], acc)
            assert h_eval(cm, k, x) == acc
        assert f_eval(cm, x) == acc

    def test_boundary_seed_gives_short_map(self, cycle_odd_small):
        t0 = math.exp(-cycle_odd_small.sigma / 2.0)
        cm = build_return_map(classify(cycle_odd_small, t0))
        assert cm.q == 3

    def test_constant_forcing_two_map(self):
        c = make_cycle([1.5])
        cm = build_return_map(classify(c, 0.9))
        assert cm.q == 2
        assert abs(cm.factor_cycle[1] - math.exp(1.5) / 0.9) < 1e-14

    def test_balanced_even_cycle(self):
        c = make_cycle([1.0, 2.0, 1.5, 0.5])
        cm = build_return_map(classify(c, 1.0))
        assert cm.q == 4

    def test_unbounded_class_rejected(self, cycle_even_drift):
        with pytest.raises(NotPeriodicFactor):
            build_return_map(classify(cycle_even_drift, 1.0))


class TestOrbitDecomposition:
    def test_reference_orbit(self, cycle_odd_small):
        cm = build_return_map(for_initial(cycle_odd_small, (1.0, 0.8)))
        res = orbit_decomposition_check(cm, 1.0, 100)
        assert res.ok
        assert res.max_rel_gap < 1e-11

    def test_trivial_base_case(self, cycle_odd_small):
        cm = build_return_map(for_initial(cycle_odd_small, (1.0, 0.8)))
        assert orbit_decomposition_check(cm, 1.0, 0).ok

    def test_perturbed_factors_fail(self, cycle_odd_small):
        cm = build_return_map(for_initial(cycle_odd_small, (1.0, 0.8)))
        bad = cm.factor_cycle.copy()
        bad[2] *= 1.0 + 1e-6
        res = orbit_decomposition_check(replace(cm, factor_cycle=bad), 1.0, 50)
        assert not res.ok
        assert res.first_mismatch is not None

    def test_f_iter_matches_repeated_eval(self, cycle_odd_small):
        cm = build_return_map(for_initial(cycle_odd_small, (1.0, 0.8)))
        x = 0.7
        y = x
        for _ in range(5):
            y = f_eval(cm, y)
        assert abs(f_iter(cm, x, 5) - y) <= 1e-12 * (1.0 + abs(y))
        assert f_iter(cm, x, 0) == x


class TestMapDerivative:
    def test_single_map(self):
        # boundary seed with p = 1 gives a one-map composition
        c = make_cycle([1.2])
        t0 = math.exp(-c.sigma / 2.0)
        cm = build_return_map(classify(c, t0))
        assert cm.q == 1
        x0 = 0.37
        want = t0 * math.exp(-x0) * (1.0 - x0)
        got = map_derivative(cm, x0, 1)
        assert abs(got - want) <= 1e-12 * abs(want)

    def test_critical_point_gives_zero(self, cycle_odd_small):
        cm = build_return_map(for_initial(cycle_odd_small, (1.0, 0.8)))
        assert map_derivative(cm, 1.0, 1) == 0.0

    def test_finite_difference_oracle(self, cycle_odd_large, rng):
        cm = build_return_map(for_initial(cycle_odd_large, (1.0, 0.8)))
        h = 1e-6
        for _ in range(20):
            x = float(rng.uniform(0.05, cycle_odd_large.bound * 0.99))
            analytic = map_derivative(cm, x, 1)
            fd = (f_eval(cm, x + h) - f_eval(cm, x - h)) / (2.0 * h)
            assert abs(analytic - fd) <= 1e-5 * (1.0 + abs(analytic))

    def test_chain_rule_consistency(self, cycle_odd_small, rng):
        cm = build_return_map(for_initial(cycle_odd_small, (1.0, 0.8)))
        for _ in range(10):
            x = float(rng.uniform(0.2, 2.0))
            total_sign, total_log = map_derivative_log(cm, x, 4)
            acc_sign, acc_log = 1.0, 0.0
            y = x
            for _ in range(4):
                s, lm = map_derivative_log(cm, y, 1)
                acc_sign *= s
                acc_log += lm
                y = f_eval(cm, y)
            assert acc_sign == total_sign
            assert abs(acc_log - total_log) <= 1e-10 * (1.0 + abs(total_log))


class TestInvariantInterval:
    def test_comparison_root_small_gamma(self):
        assert abs(comparison_fixed_point(0.8, 1e-15) - 0.8) <= 1e-9

    def test_bracket_signs(self):
        rho, gamma = 0.8, 3.25
        h0 = rho
        h_rho = -gamma * rho * math.exp(-rho)
        assert h0 > 0.0 > h_rho

    def test_reference_interval(self, cycle_odd_small):
        fs = for_initial(cycle_odd_small, (1.0, 0.8))
        iv = invariant_interval(cycle_odd_small, fs, TSubsequence.ODD_INDEXED)
        assert iv.beta == math.exp(cycle_odd_small.sup_a - 1.0)
        assert abs(iv.beta - 2.459603) < 1e-6
        assert 0.0 < iv.alpha <= iv.x_star < iv.beta

    def test_invariance_and_attraction(self, cycle_odd_small, rng):
        fs = for_initial(cycle_odd_small, (1.0, 0.8))
        iv = invariant_interval(cycle_odd_small, fs, TSubsequence.ODD_INDEXED)
        pairs = parity_update_pairs(fs, TSubsequence.ODD_INDEXED)
        ys = rng.uniform(iv.alpha, iv.beta, size=1000)
        for a_k, t_k in pairs:
            ys = ys * np.exp(a_k - ys - t_k * ys * np.exp(-ys))
            assert np.all((ys >= iv.alpha) & (ys <= iv.beta))
        for y0 in rng.uniform(iv.alpha * 1e-5, iv.alpha * 0.99, size=50):
            y, steps = float(y0), 0
            while y < iv.alpha and steps < 100_000:
                a_k, t_k = pairs[steps % len(pairs)]
                y = parity_step(y, a_k, t_k)
                steps += 1
            assert iv.alpha <= y <= iv.beta

    def test_rho_out_of_range(self):
        c = make_cycle([2.5, 3.0])
        fs = classify(c, math.exp(-c.sigma / 2.0))  # just some seed
        with pytest.raises(RhoOutOfRange):
            invariant_interval(c, fs, TSubsequence.EVEN_INDEXED)

    def test_unbounded_side_rejected(self, cycle_even_drift):
        fs = classify(cycle_even_drift, 1.0)
        # sigma < 0: odd-indexed factors diverge, even-indexed decay
        with pytest.raises(UnboundedSubsequence):
            invariant_interval(
                cycle_even_drift, fs, TSubsequence.ODD_INDEXED
            )
        iv = invariant_interval(
            cycle_even_drift, fs, TSubsequence.EVEN_INDEXED
        )
        assert iv.alpha > 0.0


class TestPeriodicPoints:
    def test_stable_fixed_point(self, cycle_odd_large):
        cm = build_return_map(for_initial(cycle_odd_large, (1.0, 0.8)))
        pts = find_periodic_points(cm, 1)
        assert len(pts) == 1
        assert pts[0].stability == "stable"
        assert abs(f_eval(cm, pts[0].x) - pts[0].x) < 1e-9

    def test_stable_two_cycle(self, cycle_odd_large):
        cm = build_return_map(for_initial(cycle_odd_large, (1.0, 1.0)))
        fixed = find_periodic_points(cm, 1)
        two = find_periodic_points(cm, 2)
        assert len(fixed) == 1 and fixed[0].stability == "unstable"
        assert len(two) == 2 and all(p.stability == "stable" for p in two)
        # the two points map to each other
        assert abs(f_eval(cm, two[0].x) - two[1].x) < 1e-8

    def test_stable_three_cycle(self, cycle_odd_large):
        cm = build_return_map(for_initial(cycle_odd_large, (1.0, 3.8)))
        pts = find_periodic_points(cm, 3)
        assert any(p.stability == "stable" for p in pts)

    def test_period_three_implies_other_periods(self, cycle_odd_large):
        # a map with period-3 points carries points of every period
        cm = build_return_map(for_initial(cycle_odd_large, (1.0, 6.0)))
        assert find_periodic_points(cm, 3, grid_size=8192)
        for omega in (1, 2, 4, 5):
            assert find_periodic_points(cm, omega, grid_size=16384), omega

    def test_minimal_period_filtering(self, cycle_odd_large):
        cm = build_return_map(for_initial(cycle_odd_large, (1.0, 1.0)))
        fixed_x = find_periodic_points(cm, 1)[0].x
        for p in find_periodic_points(cm, 2):
            assert abs(p.x - fixed_x) > 1e-8
