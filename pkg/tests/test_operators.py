"""Operator evaluation: frozen values, algebraic properties, truncation."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from baskakov_stancu import (
    NonConvergenceError,
    OperatorParams,
    TruncationPolicy,
    apply,
    apply_centered,
    apply_grid,
    apply_mihesan,
    polynomial,
)

ONE = polynomial([1.0])
T = polynomial([0.0, 1.0])
T2 = polynomial([0.0, 0.0, 1.0])

params_st = st.builds(
    OperatorParams,
    n=st.integers(1, 150),
    a=st.floats(0.0, 3.0),
    alpha=st.just(0.0),
    beta=st.just(0.0),
)


class TestFrozenValues:
    def test_constant_reproduction(self):
        for params in (OperatorParams(3), OperatorParams(10, 1.0, 1.0, 2.0),
                       OperatorParams(50, 3.0, 2.0, 2.0)):
            for x in (0.0, 0.7, 2.0):
                value = apply(params, ONE, x).value
                assert value == pytest.approx(1.0, abs=1e-12)
                # float summation may overshoot by at most a few ulp
                assert value <= 1.0 + 4 * math.ulp(1.0)
                assert value >= 1.0 - 1e-14 - 1e-12

    def test_identity_classical(self):
        assert apply_mihesan(9, 0.0, T, 1.0).value == pytest.approx(1.0, abs=1e-10)

    def test_identity_tilted(self):
        # x + a*x/(n*(1+x)) = 1 + 1/4
        assert apply_mihesan(2, 1.0, T, 1.0).value == pytest.approx(1.25, abs=1e-10)

    def test_shifted_first_moment(self):
        result = apply(OperatorParams(10, 1.0, 1.0, 2.0), T, 1.0)
        assert result.value == pytest.approx(23.0 / 24.0, abs=1e-10)

    def test_shifted_second_moment(self):
        result = apply(OperatorParams(10, 1.0, 1.0, 2.0), T2, 1.0)
        assert result.value == pytest.approx(152.75 / 144.0, abs=1e-10)


class TestGridEvaluation:
    def test_constants_everywhere(self):
        results = apply_grid(OperatorParams(7, 1.0, 1.0, 1.0), ONE, [0.0, 1.0, 2.0])
        for r in results:
            assert r.value == pytest.approx(1.0, abs=1e-12)

    def test_origin_hits_first_node_exactly(self):
        params = OperatorParams(6, 2.0, 1.0, 2.0)
        [result] = apply_grid(params, T, [0.0])
        assert result.value == 1.0 / 8.0  # (0 + alpha)/(n + beta), exactly

    def test_repeated_point_bit_equal(self):
        r1, r2 = apply_grid(OperatorParams(11, 0.5, 0.0, 1.0), T2, [1.0, 1.0])
        assert r1.value == r2.value
        assert r1.terms_used == r2.terms_used
        assert r1.mass_covered == r2.mass_covered

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            apply_grid(OperatorParams(3), ONE, [])


class TestAlgebraicProperties:
    @given(params=params_st, x=st.floats(0.0, 5.0),
           c=st.floats(0.0, 4.0), d=st.floats(0.0, 3.0))
    @settings(max_examples=40, deadline=None)
    def test_positivity_and_monotonicity(self, params, x, c, d):
        f = polynomial([c, d])          # nonnegative on the nodes
        g = polynomial([c + 0.5, d])    # strictly above f
        rf = apply(params, f, x).value
        rg = apply(params, g, x).value
        assert rf >= 0.0
        assert rf <= rg + 1e-12

    @given(params=params_st, x=st.floats(0.0, 4.0),
           c1=st.floats(-2.0, 2.0), c2=st.floats(-2.0, 2.0))
    @settings(max_examples=40, deadline=None)
    def test_linearity(self, params, x, c1, c2):
        f = polynomial([1.0, 0.5])
        g = polynomial([0.0, 0.0, 1.0])
        combo = polynomial([c1 * 1.0, c1 * 0.5, c2 * 1.0])
        lhs = apply(params, combo, x).value
        rhs = c1 * apply(params, f, x).value + c2 * apply(params, g, x).value
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)

    def test_shift_reduction_is_exact(self):
        """alpha = beta = 0 takes the same code path as the unshifted form."""
        for n, a, x in ((5, 0.0, 1.0), (12, 2.0, 0.5), (40, 1.0, 3.0)):
            shifted = apply(OperatorParams(n, a), T2, x)
            plain = apply_mihesan(n, a, T2, x)
            assert shifted.value == plain.value
            assert abs(shifted.value - plain.value) <= 1e-12


class TestCenteredEvaluation:
    def test_matches_plain_difference(self):
        params = OperatorParams(25, 1.0, 1.0, 2.0)
        plain = apply(params, T2, 1.5).value - float(T2(1.5))
        centered = apply_centered(params, T2, 1.5).value
        assert centered == pytest.approx(plain, abs=1e-12)

    def test_constant_is_exact_zero(self):
        assert apply_centered(OperatorParams(8, 1.0, 0.0, 3.0), ONE, 2.0).value == 0.0


class TestTruncation:
    def test_nonconvergence_raises_with_partial(self):
        policy = TruncationPolicy(k_max=50)
        with pytest.raises(NonConvergenceError) as excinfo:
            apply(OperatorParams(20, 1.0), T, 30.0, policy)
        partial = excinfo.value.result
        assert partial.truncation_flag
        assert partial.terms_used == 50
        assert partial.mass_covered < 1.0 - policy.mass_epsilon

    def test_grid_continues_past_failure(self):
        policy = TruncationPolicy(k_max=300)
        results = apply_grid(OperatorParams(20, 1.0), T, [0.5, 30.0, 1.0], policy)
        assert not results[0].truncation_flag
        assert results[1].truncation_flag
        assert not results[2].truncation_flag

    def test_result_invariants(self):
        policy = TruncationPolicy()
        result = apply(OperatorParams(30, 2.0, 1.0, 2.0), T2, 2.0, policy)
        assert 0.0 <= result.mass_covered <= 1.0
        assert result.terms_used <= policy.k_max
        assert not result.truncation_flag
