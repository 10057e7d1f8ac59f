"""Discrete Fourier transforms: in-repo radix-2 FFT and the direct O(N^2) sum.

Both share the kernel exp(sign * 2i pi r n / N) and neither normalizes;
callers divide by N where an inverse is wanted.  sign=+1 matches the
forward transform used by the spectral solver, sign=-1 its inverse.  The
radix-2 path is deliberately implemented here (iterative, bit-reversal
permutation) so benchmarks measure our own code, with numpy.fft reserved
for test oracles.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ParameterError

#: Rows per block in the direct-sum kernel evaluation; bounds peak memory.
_CHUNK = 512


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@lru_cache(maxsize=32)
def bit_reversal_permutation(n: int) -> np.ndarray:
    """Index permutation that orders 0..n-1 by reversed bit patterns.

    Built by doubling: the reversal for 2n is [2*rev(n), 2*rev(n)+1].
    """
    if not is_power_of_two(n):
        raise ParameterError(f"size must be a power of two, got {n}")
    idx = np.array([0], dtype=np.intp)
    while idx.size < n:
        idx = np.concatenate([2 * idx, 2 * idx + 1])
    idx.flags.writeable = False
    return idx


def fft_radix2(values: np.ndarray, sign: int = 1) -> np.ndarray:
    """Radix-2 decimation-in-time transform, power-of-two length only.

    Returns sum_n values[n] exp(sign * 2i pi r n / N), unnormalized.
    Butterflies are applied stage by stage on the bit-reversed array,
    whole-array at a time.
    """
    if sign not in (1, -1):
        raise ParameterError(f"sign must be +1 or -1, got {sign}")
    x = np.asarray(values, dtype=np.complex128)
    n = x.size
    if not is_power_of_two(n):
        raise ParameterError(f"radix-2 transform needs a power-of-two length, got {n}")
    x = x[bit_reversal_permutation(n)]
    m = 1
    while m < n:
        twiddle = np.exp(sign * 1j * np.pi * np.arange(m) / m)
        pairs = x.reshape(-1, 2 * m)
        top = pairs[:, :m].copy()
        bottom = pairs[:, m:] * twiddle
        pairs[:, :m] = top + bottom
        pairs[:, m:] = top - bottom
        m *= 2
    return x


def dft_direct(values: np.ndarray, sign: int = 1) -> np.ndarray:
    """Direct O(N^2) transform with the same convention as fft_radix2.

    The kernel matrix is evaluated in row blocks of _CHUNK to keep memory
    flat; every one of the N^2 kernel values is computed, which is the
    point when this serves as the slow baseline in benchmarks.
    """
    if sign not in (1, -1):
        raise ParameterError(f"sign must be +1 or -1, got {sign}")
    x = np.asarray(values, dtype=np.complex128)
    n = x.size
    if n == 0:
        raise ParameterError("cannot transform an empty array")
    out = np.empty(n, dtype=np.complex128)
    r = np.arange(n)
    for start in range(0, n, _CHUNK):
        rows = np.arange(start, min(start + _CHUNK, n))
        kernel = np.exp((sign * 2j * np.pi / n) * np.outer(rows, r))
        out[start: start + rows.size] = kernel @ x
    return out


def transform(values: np.ndarray, sign: int = 1) -> np.ndarray:
    """Dispatch to the radix-2 path for power-of-two sizes, else direct sum."""
    x = np.asarray(values, dtype=np.complex128)
    if is_power_of_two(x.size):
        return fft_radix2(x, sign)
    return dft_direct(x, sign)
