import math

import pytest
from hypothesis import given, settings, strategies as st

from sigma_density import density
from sigma_density.errors import DomainError, IndeterminateError
from sigma_density.zeta import local_factor

PI = math.pi
LOG_10_OVER_PI_SQ = math.log(10 / PI**2)


class TestF:
    def test_hand_evaluations(self, table):
        b = density.f(table, 1, 1, 2)
        assert b.contains(2 * math.log(5 / 4))
        b = density.f(table, 1, 2, 2)
        assert b.contains(math.log(10 / 9) + math.log(5 / 4) + math.log(10 / 9))

    def test_structural_identity_in_k(self, table):
        # at m = 1, changing k shifts f by the log of the local-factor ratio
        r = 1.7
        d = density.f(table, 3, 1, r).mid - density.f(table, 1, 1, r).mid
        expected = math.log(local_factor(2, 3, r)) - math.log(local_factor(2, 1, r))
        assert d == pytest.approx(expected, abs=1e-12)


class TestTail:
    def test_m_zero_is_log_g(self, table):
        b = density.tail(table, 2, 0, 1.5)
        g = density.log_g(2, 1.5)
        assert abs(b.mid - g.mid) < 1e-13

    def test_closed_form(self, table):
        b = density.tail(table, 1, 1, 2)
        assert b.contains(math.log(15 / PI**2) - math.log(5 / 4))

    def test_strictly_decreasing_in_m(self, table):
        values = [density.tail(table, 1, m, 1.5).mid for m in range(0, 8)]
        assert all(a > b for a, b in zip(values, values[1:]))


class TestT:
    def test_positive_at_two_for_all_k(self, table):
        for k in (1, 2, 3, 10, 25):
            assert density.t_func(table, k, 1, 2).lo >= LOG_10_OVER_PI_SQ - 1e-12
            assert density.t_func(table, k, 2, 2).lo >= LOG_10_OVER_PI_SQ - 1e-12

    def test_diverges_near_one(self, table):
        assert density.t_func(table, 1, 1, 1.01).hi < -1

    @settings(max_examples=20, deadline=None)
    @given(
        k=st.integers(1, 6),
        m=st.sampled_from([1, 2, 4]),
        r=st.floats(min_value=1.2, max_value=2.3),
    )
    def test_two_formulas_agree(self, table, k, m, r):
        direct = density.t_func(table, k, m, r)
        assembled = density.f(table, k, m, r) - density.log_g(k, r)
        assert max(direct.lo, assembled.lo) <= min(direct.hi, assembled.hi)

    def test_monotone_in_r(self, table):
        for k, m in ((1, 1), (2, 2), (5, 4)):
            grid = [1.1 + 0.1 * i for i in range(12)]  # up to 2.2 < 7/3
            mids = [density.t_func(table, k, m, r).mid for r in grid]
            assert all(b > a for a, b in zip(mids, mids[1:]))

    def test_reduction_beyond_small_m(self, table):
        # whenever the three-point test clears, so does every other m
        for k, r in ((1, 1.5), (2, 1.8), (4, 1.86)):
            if all(density.t_func(table, k, m, r).nonpositive() for m in (1, 2, 4)):
                for m in [3] + list(range(5, 21)):
                    assert density.t_func(table, k, m, r).nonpositive()


class TestDerivative:
    def test_positive_bracket(self, table):
        assert density.t_derivative(table, 1, 1, 2).strictly_positive()
        assert density.t_derivative(table, 3, 2, 1.5).strictly_positive()

    def test_finite_difference(self, table):
        k, m, r, h = 1, 1, 1.9, 1e-5
        fd = (
            density.t_func(table, k, m, r + h).mid - density.t_func(table, k, m, r - h).mid
        ) / (2 * h)
        bracket = density.t_derivative(table, k, m, r)
        assert bracket.lo - 1e-6 <= fd <= bracket.hi + 1e-6

    def test_seven_term_lower_bound(self, table):
        k, m, r = 1, 1, 2.0
        bracket = density.t_derivative(table, k, m, r)
        lower = sum(
            math.log(table.nth(i)) / (table.nth(i) ** r + 1) for i in range(m + 1, m + 7)
        ) - math.log(table.nth(m)) / (table.nth(m) ** r + 1)
        assert bracket.lo >= lower

    def test_domain(self, table):
        with pytest.raises(DomainError):
            density.t_derivative(table, 1, 1, 2.5)


class TestJ:
    def test_negative_at_upper_end(self, table):
        for m in (1, 2, 4):
            assert density.j_func(table, m, 7 / 3) < 0

    def test_increasing_on_grid(self, table):
        for m in (1, 2, 4):
            xs = [1.01 + 0.02 * i for i in range(66)]
            js = [density.j_func(table, m, x) for x in xs]
            assert all(b > a for a, b in zip(js, js[1:]))

    def test_domain(self, table):
        with pytest.raises(DomainError):
            density.j_func(table, 3, 2.0)
        with pytest.raises(DomainError):
            density.j_func(table, 1, 2.4)


class TestV:
    def test_root_location(self, table):
        assert abs(density.v_func(table, 1, 1, 1.864633)) < 1e-5

    def test_negative_at_one(self, table):
        assert density.v_func(table, 1, 1, 1.0) < 0
        assert density.v_func(table, 1, 1, 7 / 3) > 0

    def test_v_above_t(self, table):
        for k, m, r in ((1, 1, 1.5), (2, 2, 1.9), (3, 4, 2.2)):
            assert density.v_func(table, k, m, r) > density.t_func(table, k, m, r).hi

    def test_truncation_gap_bounded(self, table):
        # V - T equals the dropped tail beyond the 10^5-th prime
        k, m, r = 1, 1, 1.5
        gap = density.v_func(table, k, m, r) - density.t_func(table, k, m, r).mid
        p_last = float(table.nth(density.V_TRUNCATION))
        assert 0 < gap < p_last ** (1 - r) / (r - 1)


class TestGapInterval:
    def test_fires_above_threshold(self, table):
        gap = density.gap_interval(table, 1, 1, 1.95)
        assert gap is not None
        assert gap.width > 0

    def test_silent_below_threshold(self, table):
        assert density.gap_interval(table, 1, 1, 1.5) is None

    def test_width_shrinks_toward_threshold(self, table):
        w_far = density.gap_interval(table, 1, 1, 1.95).width
        w_near = density.gap_interval(table, 1, 1, 1.87).width
        assert 0 < w_near < w_far


class TestInequalities:
    def test_all_pass_with_positive_slack(self):
        report = density.check_inequalities(1e-3)
        assert report.all_passed
        for check in report.checks:
            assert check.min_slack > 0
            assert check.points > 100

    def test_spot_values(self):
        r = 1.8
        assert 1 + 2**-r < (1 + 3**-r) * (1 + 3**-r + 3 ** (-2 * r))
        r = 2.5
        from sigma_density.zeta import zeta

        assert (1 + 2**-r) ** 2 > zeta(r, 1e-10).hi

    def test_step_validation(self):
        with pytest.raises(DomainError):
            density.check_inequalities(1e-2)


class TestDensityReport:
    def test_dense_regime(self, table):
        report = density.density_report(table, 1, 1.5)
        assert report.verdict == "dense"
        for m in (1, 2, 4):
            f_b, g_b, t_b = report.per_m[m]
            assert t_b.nonpositive()
            # interval-arithmetic consistency of the stored triple
            assert t_b.lo <= f_b.mid - g_b.mid <= t_b.hi

    def test_not_dense_at_two(self, table):
        assert density.density_report(table, 1, 2.0).verdict == "not_dense"

    def test_not_dense_beyond_monotone_window(self, table):
        assert density.density_report(table, 5, 2.5).verdict == "not_dense"
        assert density.density_report(table, 2, 3.0).verdict == "not_dense"

    def test_domain(self, table):
        with pytest.raises(DomainError):
            density.density_report(table, 1, 0.9)
