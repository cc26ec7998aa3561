"""Bound checks and asymptotics against hand-verified closed forms."""

import math

import pytest

from baskakov_stancu import (
    OperatorParams,
    Window,
    abs_shift,
    bound_thm31,
    bound_thm32,
    bound_thm41,
    default_window,
    exp_decay,
    gamma_thm31,
    mihesan_remark_bound,
    polynomial,
    remark_rate_comparison,
    voronovskaya,
    voronovskaya_target,
)

ONE = polynomial([6.0])
T = polynomial([0.0, 1.0])
T2 = polynomial([0.0, 0.0, 1.0])
E = exp_decay(1.0)
STANCU = OperatorParams(10, 1.0, 1.0, 2.0)


def _gamma_transcribed(params, x):
    """Standalone transcription of the scaled-second-moment display."""
    n, a, al, be = float(params.n), params.a, params.alpha, params.beta
    w = 1.0 + x
    nb = n + be
    return (
        (n + be ** 2) / nb * x ** 2
        + (n - 2 * al * be) / nb * x
        + a ** 2 / nb * x ** 2 / w ** 2
        - 2 * a * be / nb * x ** 2 / w
        + a * (1 + 2 * al) / nb * x / w
        + al ** 2 / nb
    )


class TestFirstOrderBound:
    def test_constant_function(self):
        report = bound_thm31(STANCU, ONE, 1.0)
        assert report.lhs == 0.0
        assert report.rhs == 0.0
        assert report.holds

    def test_identity_frozen_values(self):
        report = bound_thm31(STANCU, T, 1.0)
        assert report.lhs == pytest.approx(1.0 / 24.0, rel=1e-10)
        assert report.metadata["gamma"] == pytest.approx(12.0 * 20.75 / 144.0,
                                                         rel=1e-12)
        expected_rhs = (1.0 + math.sqrt(20.75 / 12.0)) * 12.0 ** -0.5
        assert report.rhs == pytest.approx(expected_rhs, rel=1e-12)
        assert report.holds
        assert not report.metadata["advisory"]

    def test_gamma_is_scaled_second_central_moment(self):
        for params in (STANCU, OperatorParams(50, 3.0, 2.0, 2.0), OperatorParams(5)):
            for x in (0.0, 0.5, 2.0):
                gamma = gamma_thm31(params, x)
                assert gamma == pytest.approx(_gamma_transcribed(params, x),
                                              rel=1e-12, abs=1e-15)

    def test_reduces_to_unshifted_bound(self):
        """With zero shifts the bound is the unshifted one, to float dust."""
        for n in (10, 100):
            for a in (0.0, 1.0, 3.0):
                params = OperatorParams(n, a)
                window = default_window(params, 1.0)
                report = bound_thm31(params, T, 1.0, window)
                other = mihesan_remark_bound(n, a, T, 1.0, window)
                assert report.rhs == pytest.approx(other, rel=1e-10)

    def test_holds_across_parameter_grid(self):
        for n in (5, 10, 50, 200):
            for a in (0.0, 1.0, 3.0):
                for alpha, beta in ((0.0, 0.0), (1.0, 2.0), (2.0, 2.0)):
                    params = OperatorParams(n, a, alpha, beta)
                    for x in (0.0, 1.0, 5.0):
                        for f in (T, abs_shift(1.0)):
                            report = bound_thm31(params, f, x)
                            assert report.holds
                            assert report.slack >= -1e-12


class TestDerivativeBound:
    def test_constant(self):
        report = bound_thm32(STANCU, ONE, 1.0)
        assert report.lhs == 0.0
        assert report.rhs == 0.0
        assert report.holds

    def test_linear_looseness_documented(self):
        """A vanishing derivative modulus zeroes the bound while the
        error stays positive; the report records it rather than hiding it."""
        report = bound_thm32(STANCU, T, 1.0)
        assert report.rhs == 0.0
        assert report.lhs == pytest.approx(1.0 / 24.0, rel=1e-10)
        assert not report.holds
        assert report.metadata["looseness_check"]

    def test_square_classical_assembly(self):
        report = bound_thm32(OperatorParams(100), T2, 1.0)
        assert report.lhs == pytest.approx(0.02, rel=1e-10)
        omega1 = 2.0 * 1e-2  # f'' = 2, step (n + beta)**-1
        root = math.sqrt(0.02)
        assert report.rhs == pytest.approx(omega1 * root * (1.0 + 10.0 * root),
                                           rel=1e-10)

    def test_rejects_kink(self):
        with pytest.raises(ValueError):
            bound_thm32(STANCU, abs_shift(1.0), 1.0)


class TestWeightedSecondOrderBound:
    def test_square_ratio_is_exactly_half(self):
        """Classical, lambda = 0, x = 1: error x(1+x)/n over modulus 4/n."""
        points = bound_thm41(
            OperatorParams(16), T2, 1.0, 0.0,
            n_ladder=[2 ** j for j in range(4, 15)],
        )
        for point in points:
            assert point.ratio == pytest.approx(0.5, rel=1e-6)
            assert not point.degenerate

    @pytest.mark.parametrize("lam", [0.0, 0.5, 1.0])
    def test_exponential_ratios_stay_bounded(self, lam):
        points = bound_thm41(
            OperatorParams(16), E, 1.0, lam,
            n_ladder=[2 ** j for j in range(4, 13)],
        )
        ratios = [p.ratio for p in points]
        assert max(ratios) < 10.0
        last3 = ratios[-3:]
        assert (max(last3) - min(last3)) / max(last3) < 0.20
        peak_at = ratios.index(max(ratios))
        assert peak_at < len(ratios)  # attained at a finite rung

    def test_affine_classical_all_dust(self):
        [point] = bound_thm41(OperatorParams(16), T, 1.0, 0.0, n_ladder=[64])
        assert point.ratio == 0.0
        assert not point.degenerate

    def test_affine_shifted_is_degenerate(self):
        """Shifts give a real error while the second modulus stays at dust."""
        [point] = bound_thm41(
            OperatorParams(16, 1.0, 1.0, 2.0), T, 1.0, 0.0, n_ladder=[64]
        )
        assert point.degenerate
        assert math.isnan(point.ratio)

    def test_ladder_must_increase(self):
        with pytest.raises(ValueError):
            bound_thm41(STANCU, T2, 1.0, 0.0, n_ladder=[32, 16])


class TestVoronovskaya:
    def test_target_values(self):
        assert voronovskaya_target(1.0, 1.0, 2.0, T2, 1.0) == pytest.approx(1.0)
        assert voronovskaya_target(0.0, 0.0, 0.0, T, 1.0) == 0.0
        assert voronovskaya_target(0.0, 0.0, 0.0, T2, 2.0) == pytest.approx(6.0)

    def test_linear_classical_identically_zero(self):
        report = voronovskaya(0.0, 0.0, 0.0, T, 1.0, n_ladder=[16, 32, 64])
        assert report.target == 0.0
        for value in report.scaled_errors:
            assert abs(value) <= 1e-12

    def test_scaled_ladder_frozen_points(self):
        report = voronovskaya(1.0, 1.0, 2.0, T2, 1.0, n_ladder=[10, 100])
        assert report.scaled_errors[0] == pytest.approx(0.60763888888888889,
                                                        abs=1e-10)
        assert report.scaled_errors[1] == pytest.approx(0.94915417147250500,
                                                        abs=1e-10)

    def test_quadratic_ladder_matches_closed_form(self):
        """For f = t**2 every rung equals n * (m2(n) - x**2) from the
        second-raw-moment closed form, before any extrapolation."""
        from baskakov_stancu import raw_moment_closed

        x = 1.0
        ladder = [2 ** j for j in range(4, 13)]
        report = voronovskaya(1.0, 1.0, 2.0, T2, x, n_ladder=ladder)
        for n, value in zip(ladder, report.scaled_errors):
            params = OperatorParams(n, 1.0, 1.0, 2.0)
            expected = n * (raw_moment_closed(params, 2, x) - x ** 2)
            assert value == pytest.approx(expected, rel=1e-10)

    def test_doubling_ladder_converges(self):
        report = voronovskaya(1.0, 1.0, 2.0, T2, 1.0,
                              n_ladder=[2 ** j for j in range(4, 15)])
        assert report.converged
        assert report.extrapolated == pytest.approx(1.0, abs=1e-2)

    def test_error_decreases_monotonically(self):
        for f in (T2, E):
            report = voronovskaya(1.0, 1.0, 2.0, f, 1.0,
                                  n_ladder=[2 ** j for j in range(5, 15)])
            gaps = [abs(s - report.target) for s in report.scaled_errors]
            assert all(b < a for a, b in zip(gaps[1:], gaps[2:]))

    def test_classical_square_is_exact(self):
        """n * (L(t**2) - t**2) equals x(1+x) at every rung."""
        for x in (0.5, 1.0, 2.0):
            report = voronovskaya(0.0, 0.0, 0.0, T2, x,
                                  n_ladder=[2 ** j for j in range(4, 15)])
            for value in report.scaled_errors:
                assert value == pytest.approx(x * (1.0 + x), rel=1e-10)

    def test_rejects_kink(self):
        with pytest.raises(ValueError):
            voronovskaya(1.0, 1.0, 2.0, abs_shift(1.0), 1.0, n_ladder=[16, 32])


class TestRateComparison:
    def test_zero_shift_deltas_coincide(self):
        rc = remark_rate_comparison(10, 1.0, 0.0, 0.0, T, 1.0)
        assert rc.delta_stancu == rc.delta_mihesan

    def test_delta_ratio(self):
        rc = remark_rate_comparison(10, 1.0, 1.0, 2.0, T, 1.0)
        assert rc.delta_stancu / rc.delta_mihesan == pytest.approx(
            math.sqrt(10.0 / 12.0), rel=1e-12
        )

    def test_delta_never_worse(self):
        for n in (1, 5, 50):
            for beta in (0.0, 0.5, 2.0, 3.0):
                rc = remark_rate_comparison(n, 0.0, 0.0, beta, T, 1.0)
                assert rc.delta_stancu <= rc.delta_mihesan

    def test_bounds_emitted(self):
        rc = remark_rate_comparison(10, 1.0, 1.0, 2.0, T, 1.0)
        assert rc.bound_stancu > 0.0
        assert rc.bound_mihesan > 0.0


def test_default_window_covers_operator_mass():
    window = default_window(STANCU, 1.0)
    assert isinstance(window, Window)
    assert window.upper > 1.0 + 10.0 * math.sqrt(20.75 / 144.0)
