import numpy as np
import pytest

from qwalk.errors import ParameterError
from qwalk.fourier import (bit_reversal_permutation, dft_direct, fft_radix2,
                           is_power_of_two, transform)


def test_bit_reversal_known_orders():
    np.testing.assert_array_equal(bit_reversal_permutation(1), [0])
    np.testing.assert_array_equal(bit_reversal_permutation(2), [0, 1])
    np.testing.assert_array_equal(bit_reversal_permutation(8),
                                  [0, 4, 2, 6, 1, 5, 3, 7])


def test_bit_reversal_rejects_non_power_of_two():
    with pytest.raises(ParameterError):
        bit_reversal_permutation(6)


def test_power_of_two_predicate():
    assert [n for n in range(1, 20) if is_power_of_two(n)] == [1, 2, 4, 8, 16]
    assert not is_power_of_two(0)


def test_radix2_matches_numpy_both_signs():
    rng = np.random.default_rng(7)
    for n in (1, 2, 4, 8, 64, 256, 1024):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        assert np.abs(fft_radix2(x, sign=-1) - np.fft.fft(x)).max() < 1e-11
        assert np.abs(fft_radix2(x, sign=1) - np.fft.ifft(x) * n).max() < 1e-11


def test_radix2_rejects_bad_inputs():
    with pytest.raises(ParameterError):
        fft_radix2(np.zeros(12), sign=-1)
    with pytest.raises(ParameterError):
        fft_radix2(np.zeros(8), sign=2)


def test_direct_sum_matches_numpy_for_odd_sizes():
    rng = np.random.default_rng(11)
    for n in (3, 31, 257, 600):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        assert np.abs(dft_direct(x, sign=-1) - np.fft.fft(x)).max() < 1e-10
        assert np.abs(dft_direct(x, sign=1) - np.fft.ifft(x) * n).max() < 1e-10


def test_direct_and_radix2_agree_on_power_of_two():
    rng = np.random.default_rng(13)
    x = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    assert np.abs(dft_direct(x, sign=-1) - fft_radix2(x, sign=-1)).max() < 1e-11


def test_round_trip_recovers_input():
    rng = np.random.default_rng(17)
    for n in (64, 63):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        back = transform(transform(x, sign=1), sign=-1) / n
        assert np.abs(back - x).max() < 1e-12


def test_transform_dispatch():
    # dispatching is size-based: both paths produce the same values
    rng = np.random.default_rng(23)
    x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    np.testing.assert_allclose(transform(x), fft_radix2(x), atol=1e-12)
    y = rng.standard_normal(15) + 1j * rng.standard_normal(15)
    np.testing.assert_allclose(transform(y), dft_direct(y), atol=1e-12)
