import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import etas, thetas, varphis
from qwalk.errors import ParameterError
from qwalk.evolution import evolve, pmf
from qwalk.model import (CoinParameters, CoinMatrix, WalkerState, coin_from_axis,
                         make_coin, make_initial_state, to_bidirectional)

SQRT3_2 = math.sqrt(3.0) / 2.0


def test_sample_coin_plus_sign():
    coin = make_coin(CoinParameters(theta=math.pi / 6, varphi=0.0, eta=0.0))
    expected = np.array([[SQRT3_2, 0.5], [0.5, -SQRT3_2]])
    np.testing.assert_allclose(coin.matrix, expected, atol=1e-15)


def test_sample_coin_minus_sign():
    coin = make_coin(CoinParameters(theta=math.pi / 6, varphi=math.pi, eta=0.0))
    expected = np.array([[SQRT3_2, -0.5], [-0.5, -SQRT3_2]])
    np.testing.assert_allclose(coin.matrix, expected, atol=1e-15)


def test_diagonal_limit_coin():
    for varphi in (0.0, 1.0, math.pi):
        coin = make_coin(CoinParameters(theta=0.0, varphi=varphi, eta=0.3))
        np.testing.assert_allclose(coin.matrix, np.diag([1.0, -1.0]), atol=1e-15)


def test_coin_unitary_and_axis_decomposition_on_grid():
    worst_unitary = 0.0
    worst_axis = 0.0
    for theta in np.linspace(0.0, math.pi / 2, 11):
        for varphi in np.linspace(0.0, math.pi, 12):
            params = CoinParameters(theta=theta, varphi=varphi, eta=0.0)
            coin = make_coin(params)
            gram = coin.matrix.conj().T @ coin.matrix
            worst_unitary = max(worst_unitary, np.abs(gram - np.eye(2)).max())
            worst_axis = max(worst_axis,
                             np.abs(coin.matrix - coin_from_axis(params)).max())
    assert worst_unitary < 1e-14
    assert worst_axis < 1e-14


def test_initial_state_examples():
    state = make_initial_state(CoinParameters(theta=0.1, varphi=0.2, eta=math.pi / 6))
    assert state.t == 0
    np.testing.assert_allclose(state.amp0, [SQRT3_2], atol=1e-15)
    np.testing.assert_allclose(state.amp1, [0.5], atol=1e-15)

    flat = make_initial_state(CoinParameters(theta=0.1, varphi=0.2, eta=0.0))
    np.testing.assert_allclose([flat.amp0[0], flat.amp1[0]], [1.0, 0.0], atol=1e-16)

    up = make_initial_state(CoinParameters(theta=0.1, varphi=0.2, eta=math.pi / 2))
    np.testing.assert_allclose([up.amp0[0], up.amp1[0]], [0.0, 1.0], atol=1e-16)


@pytest.mark.parametrize("theta,varphi,eta", [
    (-0.1, 0.0, 0.0),
    (math.pi / 2 + 0.01, 0.0, 0.0),
    (0.0, -0.5, 0.0),
    (0.0, math.pi + 0.2, 0.0),
    (0.0, 0.0, 2.0),
    (float("nan"), 0.0, 0.0),
])
def test_out_of_range_angles_rejected(theta, varphi, eta):
    with pytest.raises(ParameterError):
        CoinParameters(theta=theta, varphi=varphi, eta=eta)


def test_cached_trigonometry():
    params = CoinParameters(theta=0.7, varphi=2.1, eta=0.4)
    assert params.cos_theta == math.cos(0.7)
    assert params.sin_eta == math.sin(0.4)
    assert params.exp_plus_ivarphi == complex(math.cos(2.1), math.sin(2.1))


def test_coin_matrix_rejects_non_unitary():
    with pytest.raises(ParameterError):
        CoinMatrix(np.array([[1.0, 0.1], [0.0, 1.0]], dtype=complex))


def test_walker_state_rejects_bad_norm_and_length():
    with pytest.raises(ParameterError):
        WalkerState(t=0, amp0=np.array([1.0 + 0j]), amp1=np.array([0.5 + 0j]))
    with pytest.raises(ParameterError):
        WalkerState(t=1, amp0=np.array([1.0 + 0j]), amp1=np.array([0.0j]))
    with pytest.raises(ParameterError):
        WalkerState(t=0, amp0=np.array([np.nan + 0j]), amp1=np.array([0.0j]))


def test_walker_state_is_immutable():
    state = make_initial_state(CoinParameters(theta=0.3, varphi=0.1, eta=0.2))
    with pytest.raises(ValueError):
        state.amp0[0] = 0.0


def test_bidirectional_trivial_and_endpoints():
    params = CoinParameters(theta=0.4, varphi=0.3, eta=0.2)
    origin = to_bidirectional(make_initial_state(params))
    assert set(origin) == {0}

    mapped = to_bidirectional(evolve(params, 3))
    assert min(mapped) == -3 and max(mapped) == 3
    assert set(mapped) == {-3, -1, 1, 3}


def test_bidirectional_reindexes_pmf(sample_params):
    state = evolve(sample_params, 30)
    rho = pmf(state).values
    mapped = to_bidirectional(state)
    for n in range(31):
        a0, a1 = mapped[2 * n - 30]
        assert abs(abs(a0) ** 2 + abs(a1) ** 2 - rho[n]) < 1e-15


@given(st.integers(min_value=0, max_value=40))
def test_bidirectional_support_is_bijective(t):
    params = CoinParameters(theta=0.9, varphi=1.1, eta=0.5)
    mapped = to_bidirectional(evolve(params, t))
    assert len(mapped) == t + 1
    assert set(mapped) == set(range(-t, t + 1, 2))


@given(theta=thetas, varphi=varphis, eta=etas)
def test_every_coin_is_unitary(theta, varphi, eta):
    coin = make_coin(CoinParameters(theta=theta, varphi=varphi, eta=eta))
    gram = coin.matrix.conj().T @ coin.matrix
    assert np.abs(gram - np.eye(2)).max() < 1e-14
