import math

import numpy as np
import pytest

from sigma_density import density, explorer
from sigma_density.errors import CapacityError, DomainError, IndeterminateError
from sigma_density.zeta import g_k, log_sigma_restricted


class TestGreedy:
    def test_zero_target(self, table):
        trace = explorer.greedy_approximate(table, 1, 1.5, 0.0, 10)
        assert trace.alphas == [0] * 10
        assert trace.achieved == 0.0
        assert trace.residual == 0.0
        assert trace.witness().entries == ()

    def test_exactly_attainable_target(self, table):
        r = 1.5
        x = math.log(1 + 2**-r)
        trace = explorer.greedy_approximate(table, 1, r, x, 50)
        assert trace.alphas[0] == 1
        assert all(a == 0 for a in trace.alphas[1:])
        assert trace.residual < 1e-15

    def test_residual_bounded_by_tail(self, table):
        k, r, steps = 1, 1.5, 10_000
        x = 0.9 * math.log(g_k(k, r, 1e-10).mid)
        trace = explorer.greedy_approximate(table, k, r, x, steps)
        assert trace.residual >= 0
        assert trace.residual < density.tail(table, k, steps, r).hi

    def test_partial_sums_invariants(self, table):
        trace = explorer.greedy_approximate(table, 2, 1.4, 0.5, 200)
        C = trace.C
        assert all(c <= trace.target for c in C)
        assert all(b >= a for a, b in zip(C, C[1:]))
        # C_l + E_l climbs toward log G
        log_g = math.log(g_k(2, 1.4, 1e-10).mid)
        combined = [c + e for c, e in zip(C, trace.E)]
        assert all(b >= a - 1e-12 for a, b in zip(combined, combined[1:]))
        assert combined[-1] < log_g
        assert log_g - combined[-1] < density.tail(table, 2, 200, 1.4).hi + 1e-12

    def test_per_step_optimality(self, table):
        # taking alpha + 1 at any step would overshoot the target
        k, r = 3, 1.6
        trace = explorer.greedy_approximate(table, k, r, 0.7, 100)
        c_before = 0.0
        for l, alpha in enumerate(trace.alphas):
            p = float(table.nth(l + 1))
            if alpha < k:
                bigger = math.log(sum(p ** (-j * r) for j in range(alpha + 2)))
                assert c_before + bigger > trace.target
            c_before = trace.C[l]

    def test_witness_reevaluates(self, table):
        trace = explorer.greedy_approximate(table, 2, 1.5, 0.6, 500)
        value = log_sigma_restricted(trace.witness(), 1.5, table)
        assert value == pytest.approx(trace.achieved, abs=1e-12)

    def test_domain_errors(self, table):
        with pytest.raises(DomainError):
            explorer.greedy_approximate(table, 1, 1.5, -0.1, 10)
        with pytest.raises(DomainError):
            explorer.greedy_approximate(table, 1, 1.5, 10.0, 10)
        from sigma_density.brackets import Bracket
        from sigma_density.zeta import log_g_iv, to_iv

        log_g = Bracket.from_iv(log_g_iv(1, to_iv(1.5)))
        with pytest.raises(IndeterminateError):
            explorer.greedy_approximate(table, 1, 1.5, log_g.lo, 10)


class TestCensus:
    def test_bound_one(self, table):
        census = explorer.range_census(table, 1, 2, 1)
        assert list(census.values) == [1.0]
        assert census.estimated_intervals == 1
        assert census.gaps == ()

    def test_not_dense_gap_avoided(self, table):
        census = explorer.range_census(table, 1, 2, 20_000)
        assert census.analytic_gaps, "the first-level gap should fire at r=2"
        for m, left, right in census.analytic_gaps:
            inside = census.values[(census.values > left) & (census.values < right)]
            assert inside.size == 0

    def test_empirical_gap_contains_analytic(self, table):
        census = explorer.range_census(table, 1, 2, 20_000)
        m, left, right = census.analytic_gaps[0]
        covering = [
            g for g in census.gaps if g[0] <= left + census.resolution and g[1] >= right - census.resolution
        ]
        assert covering
        assert covering[0][2] >= (right - left) - 2 * census.resolution

    def test_dense_regime_single_interval(self, table):
        # fixed coarse resolution: enumeration artifacts near the supremum
        # (values there need enormous smooth integers) stay sub-resolution
        census = explorer.range_census(table, 1, 1.5, 50_000, resolution=0.05)
        assert census.analytic_gaps == ()
        assert census.estimated_intervals == 1

    def test_greedy_witness_value_in_census(self, table):
        # a witness over few primes is a small integer, so its value shows up
        trace = explorer.greedy_approximate(table, 1, 2.0, 0.21, 5)
        n = 1
        for idx, a in trace.witness().entries:
            n *= table.nth(idx) ** a
        census = explorer.range_census(table, 1, 2.0, max(n, 10))
        assert np.min(np.abs(census.values - math.exp(trace.achieved))) < 1e-12

    def test_capacity_error(self, table):
        with pytest.raises(CapacityError):
            explorer.range_census(table, 1, 2, explorer.CENSUS_MAX_BOUND + 1)


class TestAnalyticScan:
    def test_fires_at_m1_above_threshold(self, table):
        entries = explorer.analytic_gap_scan(table, 1, 1.95, 10)
        positive = [e for e in entries if e.status == "positive"]
        assert positive and positive[0].m == 1

    def test_empty_below_threshold(self, table):
        entries = explorer.analytic_gap_scan(table, 1, 1.5, 10)
        assert all(e.status == "nonpositive" for e in entries)

    def test_fired_intervals_disjoint(self, table):
        entries = explorer.analytic_gap_scan(table, 1, 2.1, 8)
        fired = [e.interval for e in entries if e.interval is not None]
        assert len(fired) >= 2
        # intervals are in decreasing position as m grows
        for (lo1, hi1), (lo2, hi2) in zip(fired, fired[1:]):
            assert hi2 <= lo1 or hi1 <= lo2
