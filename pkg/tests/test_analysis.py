"""Cycle detection, limit-cycle verdicts, boundary orbits, basin scans."""

import math

import numpy as np
import pytest

from ricker2 import (
    BoundaryParity,
    Classification,
    HypothesisViolationWarning,
    NoConvergence,
    NonMinimalPeriod,
    OrbitSource,
    ScanGrid,
    WindowTooShort,
    basin_scan,
    boundary_orbit,
    canonical_cycle,
    cycles_match,
    detect_cycle,
    iterate_direct,
    make_cycle,
    sacker_check,
    verify_even_limit_cycle,
)


class TestDetectCycle:
    def test_constant_orbit(self):
        c = make_cycle([2.0])
        tr = iterate_direct(c, (1.0, 1.0), 6000)
        rep = detect_cycle(tr, burn_in=5000, window=1000)
        assert rep.converged and rep.period == 1
        assert rep.cycle_values == (1.0,)

    def test_six_cycle(self, cycle_odd_small):
        tr = iterate_direct(cycle_odd_small, (1.0, 0.8), 51_000)
        rep = detect_cycle(tr)
        assert rep.period == 6
        assert rep.residual <= 1e-8

    def test_minimality(self, cycle_odd_small):
        tr = iterate_direct(cycle_odd_small, (1.0, 0.8), 51_000)
        rep = detect_cycle(tr)
        w = tr.samples[-rep.window:]
        for d in (1, 2, 3):  # proper divisors of 6
            dev = np.abs(w[d:] - w[:-d]) / (1.0 + np.abs(w[:-d]))
            assert dev.max() > rep.tol

    def test_boundary_seed_three_cycle(self, cycle_odd_small):
        x_prev = 1.0
        x_curr = x_prev * math.exp(-cycle_odd_small.sigma / 2.0 - x_prev)
        tr = iterate_direct(cycle_odd_small, (x_prev, x_curr), 51_000)
        assert detect_cycle(tr).period == 3

    def test_nonperiodic_verdict(self, cycle_odd_large):
        tr = iterate_direct(cycle_odd_large, (1.0, 6.0), 51_000)
        rep = detect_cycle(tr)
        assert rep.classification is Classification.NONPERIODIC_UP_TO_BOUND
        assert rep.period is None
        assert rep.residual > rep.tol

    def test_decayed_even_orbit_is_periodic_with_zeros(
        self, cycle_even_drift
    ):
        tr = iterate_direct(cycle_even_drift, (0.5, 0.5), 51_000)
        rep = detect_cycle(tr)
        assert rep.converged and rep.period == 4
        assert sorted(rep.cycle_values)[:2] == [0.0, 0.0]

    def test_boundary_decay_verdict(self):
        # strong positive drift kills the odd parity exactly while the
        # surviving side stays chaotic, so no global period fits
        c = make_cycle([0.2, 3.6, 0.4, 3.4])
        tr = iterate_direct(c, (0.9, 1.2), 51_000)
        rep = detect_cycle(tr)
        assert rep.classification is Classification.BOUNDARY_DECAY
        assert rep.period is None
        assert rep.residual == 0.0  # the vanished parity's window max

    def test_window_too_short(self, cycle_odd_small):
        tr = iterate_direct(cycle_odd_small, (1.0, 0.8), 2000)
        with pytest.raises(WindowTooShort):
            detect_cycle(tr, burn_in=5000, window=1000)
        with pytest.raises(WindowTooShort):
            detect_cycle(tr, burn_in=100, window=150, max_period=100)


class TestCanonicalCycles:
    def test_rotation_invariance(self):
        a = (0.3, 1.4, 0.9)
        assert canonical_cycle(a) == canonical_cycle((1.4, 0.9, 0.3))
        assert canonical_cycle(a)[0] == 1.4

    def test_matching(self):
        assert cycles_match((1.0, 2.0), (2.0, 1.0))
        assert not cycles_match((1.0, 2.0), (2.0, 1.1))
        assert not cycles_match((1.0, 2.0), (1.0, 2.0, 3.0))


class TestEvenLimitCycle:
    def test_reference_cycle(self, cycle_even_drift):
        tr = iterate_direct(cycle_even_drift, (0.5, 0.5), 31_000)
        v = verify_even_limit_cycle(cycle_even_drift, tr)
        assert v.ok and not v.advisory
        assert v.vanishing_parity == "even"
        assert v.vanishing_max < 1e-12
        assert v.surviving_period == 2
        assert abs(v.cycle_sum - 3.0) <= 1e-6
        assert v.target_sum == cycle_even_drift.values[0] + \
            cycle_even_drift.values[2]

    def test_initial_values_are_forgotten(self, cycle_even_drift, rng):
        cycles = []
        for _ in range(6):
            init = tuple(rng.uniform(0.1, 3.0, size=2))
            tr = iterate_direct(cycle_even_drift, init, 31_000)
            v = verify_even_limit_cycle(cycle_even_drift, tr)
            assert v.ok
            cycles.append(canonical_cycle(v.surviving_cycle))
        for c in cycles[1:]:
            assert cycles_match(c, cycles[0])

    def test_two_cycle_survivor_is_fixed_point(self):
        # sigma > 0: odd terms vanish, even terms settle at the odd
        # forcing value
        c = make_cycle([0.6, 1.3])
        tr = iterate_direct(c, (0.9, 1.1), 31_000)
        v = verify_even_limit_cycle(c, tr)
        assert v.ok
        assert v.vanishing_parity == "odd"
        assert v.surviving_period == 1
        assert abs(v.cycle_sum - 1.3) <= 1e-6

    def test_global_period_two(self):
        # equal odd-indexed values with dominant sum: the surviving
        # subsequence is constant, so the orbit has global period 2
        c = make_cycle([0.5, 1.2, 0.7, 1.2])
        assert c.sigma > 0
        tr = iterate_direct(c, (1.0, 0.4), 31_000)
        v = verify_even_limit_cycle(c, tr)
        assert v.ok
        assert v.surviving_period == 1
        assert abs(v.cycle_sum - 2.4) <= 1e-6

    def test_out_of_range_forcing_is_advisory(self):
        c = make_cycle([2.5, 1.0, 0.5, 0.9])  # sigma < 0, survivor sees 2.5
        tr = iterate_direct(c, (1.0, 1.0), 31_000)
        with pytest.warns(HypothesisViolationWarning):
            v = verify_even_limit_cycle(c, tr)
        assert v.advisory

    def test_odd_cycle_rejected(self, cycle_odd_small):
        tr = iterate_direct(cycle_odd_small, (1.0, 0.8), 31_000)
        with pytest.raises(ValueError):
            verify_even_limit_cycle(cycle_odd_small, tr)


class TestSackerCheck:
    def test_constant_forcing_fixed_point(self):
        res = sacker_check([1.5])
        assert abs(res.cycle_values[0] - 1.5) <= 1e-8
        assert res.sum_gap <= 1e-8

    def test_two_cycle_sum(self):
        res = sacker_check([1.8, 0.3])
        assert len(res.cycle_values) == 2
        assert abs(res.total - 2.1) <= 1e-8

    def test_four_cycle_sum(self):
        res = sacker_check([0.5, 1.5, 1.0, 1.0])
        assert abs(res.total - 4.0) <= 1e-8

    def test_start_value_independence(self, rng):
        for _ in range(10):
            q = int(rng.integers(1, 7))
            alpha = rng.uniform(0.1, 1.9, size=q)
            sums = [
                sacker_check(alpha, y0=y0).total for y0 in (0.1, 1.0, 3.0)
            ]
            assert max(sums) - min(sums) <= 1e-8

    def test_no_convergence_budget(self):
        with pytest.raises(NoConvergence):
            sacker_check([0.1], n_steps=5, y0=3.0)

    def test_range_validation(self):
        with pytest.raises(ValueError):
            sacker_check([2.5])
        with pytest.raises(ValueError):
            sacker_check([])


class TestBoundaryOrbit:
    def test_zero_even_layout(self, cycle_even_drift):
        tr = boundary_orbit(cycle_even_drift, 1.3, BoundaryParity.ZERO_EVEN,
                            101)
        assert tr.source is OrbitSource.BOUNDARY_EVEN
        idx = np.arange(1, 102)
        assert np.all(tr.samples[idx % 2 == 0] == 0.0)
        assert np.all(tr.samples[idx % 2 == 1] > 0.0)

    def test_zero_odd_forcing_subsequence(self, cycle_even_drift):
        # survivors x[2k] follow u[k+1] = u[k]*exp(a[2k+1] - u[k]),
        # i.e. forcing values 1.8, 0.3, 1.8, ...
        tr = boundary_orbit(cycle_even_drift, 0.9, BoundaryParity.ZERO_ODD,
                            200)
        u = 0.9
        for k in range(100):
            u = u * math.exp(cycle_even_drift.value_at(2 * k + 1) - u)
            assert tr.value_at(2 * (k + 1)) == u

    def test_bit_exact_against_direct(self, rng):
        for _ in range(20):
            p = int(rng.integers(1, 9))
            try:
                c = make_cycle(rng.uniform(0.1, 3.0, size=p))
            except NonMinimalPeriod:
                continue
            u0 = float(rng.uniform(0.1, 3.0))
            for parity, init in (
                (BoundaryParity.ZERO_EVEN, (u0, 0.0)),
                (BoundaryParity.ZERO_ODD, (0.0, u0)),
            ):
                tr = boundary_orbit(c, u0, parity, 1000)
                ref = iterate_direct(c, init, 1000)
                assert np.array_equal(tr.samples, ref.samples)

    def test_bad_u0(self, cycle_even_drift):
        with pytest.raises(ValueError):
            boundary_orbit(cycle_even_drift, 0.0,
                           BoundaryParity.ZERO_EVEN, 10)


class TestBasinScan:
    def test_multistable_grid(self, cycle_odd_small):
        grid = ScanGrid(
            x_prev_range=(0.2, 2.5, 12),
            x_curr_range=(0.2, 2.5, 12),
            cycle=cycle_odd_small,
            burn_in=8000,
            window=400,
        )
        res = basin_scan(grid)
        assert len(res.cells) == 144
        six_cycles = [
            e for e in res.table
            if e.classification is Classification.CONVERGED_TO_CYCLE
            and e.period == 6
        ]
        assert len(six_cycles) >= 2  # coexisting distinct attractors
        assert res.cell_grid(grid).shape == (12, 12)

    def test_global_attractor_grid(self, cycle_even_drift):
        grid = ScanGrid(
            x_prev_range=(0.3, 2.0, 6),
            x_curr_range=(0.3, 2.0, 6),
            cycle=cycle_even_drift,
            burn_in=30_000,
            window=400,
        )
        res = basin_scan(grid)
        assert len(res.table) == 1
        assert all(c.cycle_id == 0 for c in res.cells)

    def test_single_cell(self, cycle_odd_small):
        grid = ScanGrid(
            x_prev_range=(1.0, 1.0, 1),
            x_curr_range=(0.8, 0.8, 1),
            cycle=cycle_odd_small,
            burn_in=8000,
            window=400,
        )
        res = basin_scan(grid)
        assert len(res.cells) == 1 and len(res.table) == 1

    def test_row_major_cell_order(self, cycle_odd_small):
        grid = ScanGrid(
            x_prev_range=(0.5, 1.5, 2),
            x_curr_range=(0.25, 0.75, 3),
            cycle=cycle_odd_small,
            burn_in=8000,
            window=400,
        )
        res = basin_scan(grid)
        inits = [c.initial for c in res.cells]
        assert inits == [
            (0.5, 0.25), (0.5, 0.5), (0.5, 0.75),
            (1.5, 0.25), (1.5, 0.5), (1.5, 0.75),
        ]

    def test_grid_validation(self, cycle_odd_small):
        with pytest.raises(ValueError):
            ScanGrid(
                x_prev_range=(0.0, 1.0, 4),
                x_curr_range=(0.5, 1.0, 4),
                cycle=cycle_odd_small,
            )
        with pytest.raises(WindowTooShort):
            ScanGrid(
                x_prev_range=(0.5, 1.0, 2),
                x_curr_range=(0.5, 1.0, 2),
                cycle=cycle_odd_small,
                window=100,
                max_period=100,
            )


class TestDecayRates:
    def test_vanishing_side_drifts_at_sigma_rate(self, rng):
        # even periods 2 and 4: the vanishing parity decays like the
        # factor drift, about sigma per forcing period
        for _ in range(6):
            p = int(rng.choice([2, 4]))
            while True:
                try:
                    c = make_cycle(rng.uniform(0.2, 1.8, size=p))
                except NonMinimalPeriod:
                    continue
                if abs(c.sigma) > 0.3:
                    break
            tr = iterate_direct(c, (1.0, 1.0), 4000)
            full = tr.with_initial()
            vanish_parity = 1 if c.sigma > 0 else 0
            idx = np.arange(-1, len(tr.samples) + 1)
            vals = full[idx % 2 == vanish_parity]
            ks = np.arange(len(vals))
            keep = (vals > 1e-200) & (ks > 50)
            logs = np.log(vals[keep])
            kk = ks[keep]
            slope = np.polyfit(kk, logs, 1)[0]  # per subsequence step
            drift = -abs(c.sigma) * 2.0 / p
            assert slope <= drift * 0.9
            assert slope <= -abs(c.sigma) / 2.0 * 0.9  # p <= 4 form


class TestOddPeriodCoverage:
    def test_generic_and_boundary_periods(self, rng):
        # amplitudes inside (0, 2): generic seeds give cycles dividing
        # 2p, boundary seeds cycles dividing p
        for _ in range(8):
            p = int(rng.choice([1, 3, 5]))
            try:
                c = make_cycle(rng.uniform(0.1, 1.9, size=p))
            except NonMinimalPeriod:
                continue
            init = tuple(rng.uniform(0.2, 2.5, size=2))
            tr = iterate_direct(c, init, 30_600)
            rep = detect_cycle(tr, burn_in=30_000, window=600,
                               max_period=2 * p)
            assert rep.converged and (2 * p) % rep.period == 0
            x_prev = float(rng.uniform(0.2, 2.5))
            x_curr = x_prev * math.exp(-c.sigma / 2.0 - x_prev)
            tr = iterate_direct(c, (x_prev, x_curr), 30_600)
            rep = detect_cycle(tr, burn_in=30_000, window=600,
                               max_period=2 * p)
            assert rep.converged and p % rep.period == 0
