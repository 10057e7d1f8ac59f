import math

import numpy as np
import pytest

from conftest import max_state_diff, random_triples
from qwalk.errors import ParameterError
from qwalk.evolution import evolve, pmf
from qwalk.kernel import (LambdaTable, lambda_minus, lambda_plus,
                          lambda_table_recursive, lambda_value,
                          pmf_via_lambda, state_via_lambda)
from qwalk.model import CoinParameters


def test_anchor_values_from_sum():
    for theta in (0.0, 0.4, 1.0, math.pi / 2):
        assert lambda_value(theta, 0, 0, 1) == pytest.approx(1.0, abs=1e-13)
        assert lambda_value(theta, 0, 1, 2) == pytest.approx(0.0, abs=1e-13)
        assert lambda_value(theta, 1, 1, 2) == pytest.approx(0.0, abs=1e-13)


def test_confined_kernel_is_central_delta():
    for t in range(1, 12):
        for n in range(t + 1):
            value = lambda_value(math.pi / 2, n, t, t + 1)
            expected = 1.0 if 2 * n == t else 0.0
            assert value == pytest.approx(expected, abs=1e-13)


def test_endpoint_kernel_alternates():
    # theta = 0: interior entries alternate sign, boundary entries vanish
    for t in range(2, 10):
        for big_n in (t + 1, t + 2):  # odd and even transform sizes
            for n in range(1, t):
                value = lambda_value(0.0, n, t, big_n)
                assert value == pytest.approx((-1.0) ** (n - 1), abs=1e-12)
            assert lambda_value(0.0, 0, t, big_n) == pytest.approx(0.0, abs=1e-12)
            assert lambda_value(0.0, t, t, big_n) == pytest.approx(0.0, abs=1e-12)


def test_recursion_row_two():
    table = lambda_table_recursive(math.pi / 3, 2)
    # Lambda(1, 2) = cos(theta) [0 - 0] + Lambda(0, 0) = 1 for every theta
    assert table.values[2, 1] == pytest.approx(1.0, abs=1e-15)
    assert table.values[2, 0] == 0.0
    assert table.values[2, 2] == 0.0


def test_recursion_matches_sum_evaluation():
    for theta in (0.0, 0.35, 1.1, math.pi / 2):
        table = lambda_table_recursive(theta, 20)
        worst = 0.0
        for t in range(21):
            big_n = t + 1 if t % 2 == 0 else t + 2  # exercise even sizes too
            for n in range(t + 1):
                worst = max(worst, abs(
                    lambda_value(theta, n, t, big_n) - table.values[t, n]))
        assert worst < 1e-10


def test_reflection_symmetry_laws():
    table = lambda_table_recursive(0.77, 41)
    vals = table.values
    for t in range(41):
        for ell in range(t // 2 + 1):
            left = vals[t, t // 2 - ell]
            right = vals[t, (t + 1) // 2 + ell]
            assert left == pytest.approx(((-1.0) ** t) * right, abs=1e-12)
    # even rows: Lambda(k - l, 2k) = Lambda(k + l, 2k)
    for k in range(21):
        for ell in range(k + 1):
            assert vals[2 * k, k - ell] == pytest.approx(vals[2 * k, k + ell],
                                                         abs=1e-12)


def test_plus_minus_parity_laws():
    table = lambda_table_recursive(0.62, 41)
    for t in range(40):
        n = np.arange(t + 1)
        plus = lambda_plus(table, n, t)
        minus = lambda_minus(table, n, t)
        for ell in range(t // 2 + 1):
            lo = t // 2 - ell
            hi = (t + 1) // 2 + ell
            assert plus[lo] == pytest.approx(((-1.0) ** (t + 1)) * plus[hi],
                                             abs=1e-12)
            assert minus[lo] == pytest.approx(((-1.0) ** t) * minus[hi],
                                              abs=1e-12)


def test_table_validation():
    good = lambda_table_recursive(0.5, 6)
    with pytest.raises(ParameterError):
        LambdaTable(theta=0.5, t_max=6, values=good.values[:5])
    bad = np.array(good.values, copy=True)
    bad[0, 0] = 0.9
    from qwalk.errors import VerificationError
    with pytest.raises(VerificationError):
        LambdaTable(theta=0.5, t_max=6, values=bad)


def test_state_via_lambda_initial_and_showcase(sample_params):
    table = lambda_table_recursive(sample_params.theta, 31)
    initial = state_via_lambda(sample_params, 0, table)
    assert abs(initial.amp0[0] - sample_params.cos_eta) < 1e-15
    assert abs(initial.amp1[0] - sample_params.sin_eta) < 1e-15

    exact = evolve(sample_params, 30)
    rebuilt = state_via_lambda(sample_params, 30, table)
    assert max_state_diff(exact, rebuilt) < 1e-10


def test_state_via_lambda_guards():
    params = CoinParameters(theta=0.5, varphi=0.1, eta=0.2)
    table = lambda_table_recursive(0.5, 4)
    with pytest.raises(ParameterError):
        state_via_lambda(params, 4, table)  # needs coverage of t + 1
    other = lambda_table_recursive(0.6, 10)
    with pytest.raises(ParameterError):
        state_via_lambda(params, 3, other)  # theta mismatch


def test_kernel_mass_function_equals_amplitude_square():
    for params in random_triples(6):
        table = lambda_table_recursive(params.theta, 25)
        for t in (0, 1, 7, 24):
            direct = pmf(state_via_lambda(params, t, table)).values
            assembled = pmf_via_lambda(params, t, table)
            assert assembled.method == "lambda"
            np.testing.assert_allclose(assembled.values, direct, atol=1e-12)
