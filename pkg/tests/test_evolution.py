import json
import math
import pathlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import etas, max_state_diff, random_triples, thetas, varphis
from qwalk.errors import ParameterError
from qwalk.evolution import PmfSeries, evolve, iter_states, pmf, step
from qwalk.model import CoinParameters, make_coin, make_initial_state

DATA = pathlib.Path(__file__).parent / "data"


def load_fixture(name):
    payload = json.loads((DATA / name).read_text())
    return np.array([float(v) for v in payload["pmf"]])


def test_single_step_from_flat_qubit():
    params = CoinParameters(theta=0.8, varphi=0.6, eta=0.0)
    state = step(make_initial_state(params), make_coin(params))
    assert abs(state.amp0[0] - math.cos(0.8)) < 1e-15
    assert abs(state.amp1[1] - params.exp_plus_ivarphi * math.sin(0.8)) < 1e-15
    assert state.amp0[1] == 0.0 and state.amp1[0] == 0.0


def test_single_step_general_qubit():
    params = CoinParameters(theta=0.8, varphi=0.6, eta=0.3)
    state = step(make_initial_state(params), make_coin(params))
    expected0 = (math.cos(0.3) * math.cos(0.8)
                 + params.exp_minus_ivarphi * math.sin(0.3) * math.sin(0.8))
    expected1 = (params.exp_plus_ivarphi * math.cos(0.3) * math.sin(0.8)
                 - math.sin(0.3) * math.cos(0.8))
    assert abs(state.amp0[0] - expected0) < 1e-15
    assert abs(state.amp1[1] - expected1) < 1e-15


def test_confined_walk_three_delta():
    params = CoinParameters(theta=math.pi / 2, varphi=0.0, eta=math.pi / 4)
    for t in (4, 5, 10, 49):
        rho = pmf(evolve(params, t)).values
        expected = np.zeros(t + 1)
        if t % 2 == 0:
            expected[t // 2] = 1.0
        else:
            expected[(t - 1) // 2] = 0.5
            expected[(t + 1) // 2] = 0.5
        np.testing.assert_allclose(rho, expected, atol=1e-14)


def test_endpoint_walk_theta_zero():
    params = CoinParameters(theta=0.0, varphi=1.3, eta=math.pi / 4)
    for t in (1, 2, 33):
        rho = pmf(evolve(params, t)).values
        expected = np.zeros(t + 1)
        expected[0] = 0.5
        expected[t] = 0.5
        np.testing.assert_allclose(rho, expected, atol=1e-14)


def test_evolve_zero_steps_is_initial_state():
    params = CoinParameters(theta=0.5, varphi=0.4, eta=0.9)
    state = evolve(params, 0)
    initial = make_initial_state(params)
    assert max_state_diff(state, initial) == 0.0


def test_evolve_matches_repeated_step():
    params = CoinParameters(theta=0.7, varphi=2.0, eta=0.4)
    by_steps = make_initial_state(params)
    coin = make_coin(params)
    for t in range(1, 25):
        by_steps = step(by_steps, coin)
        assert max_state_diff(by_steps, evolve(params, t)) < 1e-14


def test_evolution_is_linear_in_initial_qubit():
    theta, varphi, eta = 0.9, 0.8, 0.37
    full = evolve(CoinParameters(theta=theta, varphi=varphi, eta=eta), 16)
    flat = evolve(CoinParameters(theta=theta, varphi=varphi, eta=0.0), 16)
    up = evolve(CoinParameters(theta=theta, varphi=varphi, eta=math.pi / 2), 16)
    ce, se = math.cos(eta), math.sin(eta)
    np.testing.assert_allclose(full.amp0, ce * flat.amp0 + se * up.amp0, atol=1e-14)
    np.testing.assert_allclose(full.amp1, ce * flat.amp1 + se * up.amp1, atol=1e-14)


def test_support_structure():
    for params in random_triples(5):
        for t in (1, 2, 9):
            state = evolve(params, t)
            assert state.amp0[t] == 0.0
            assert state.amp1[0] == 0.0


def test_norm_conserved_to_ten_thousand_steps():
    params = CoinParameters(theta=0.6, varphi=1.9, eta=0.8)
    state = evolve(params, 10_000)
    assert abs(state.norm() - 1.0) < 1e-12


def test_iter_states_sequence():
    params = CoinParameters(theta=0.5, varphi=0.2, eta=0.6)
    states = list(iter_states(params, 6))
    assert [s.t for s in states] == list(range(7))
    assert max_state_diff(states[-1], evolve(params, 6)) < 1e-14


def test_pmf_examples_and_validation():
    params = CoinParameters(theta=0.3, varphi=0.1, eta=math.pi / 6)
    series = pmf(evolve(params, 0))
    assert series.values[0] == pytest.approx(1.0, abs=1e-15)
    assert series.method == "oracle"

    with pytest.raises(ParameterError):
        PmfSeries(t=1, values=np.array([0.5, 0.6]))
    with pytest.raises(ParameterError):
        PmfSeries(t=1, values=np.array([-0.1, 1.1]))
    with pytest.raises(ParameterError):
        PmfSeries(t=0, values=np.array([1.0]), method="guess")
    # asymptotic estimates are exempt from exact normalization
    PmfSeries(t=1, values=np.array([0.2, 0.3]), method="asymptotic")


def test_golden_fixture_profiles(sample_params, mirrored_params):
    for params, name in ((sample_params, "fig1a_pmf.json"),
                         (mirrored_params, "fig1b_pmf.json")):
        frozen = load_fixture(name)
        rho = pmf(evolve(params, 30)).values
        np.testing.assert_allclose(rho, frozen, atol=5e-14, rtol=0.0)


@settings(max_examples=40, deadline=None)
@given(theta=thetas, varphi=varphis, eta=etas, t=st.integers(0, 40))
def test_norm_preserved_for_random_walks(theta, varphi, eta, t):
    state = evolve(CoinParameters(theta=theta, varphi=varphi, eta=eta), t)
    assert abs(state.norm() - 1.0) < 1e-12
