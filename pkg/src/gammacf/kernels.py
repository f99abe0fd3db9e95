"""Float64 recurrence kernels.

These are the quick-look paths: double-precision forward recurrences for
approximants, used for 15-digit evaluations, screening and benchmarks.
High-precision work never goes through here.

Kernels are compiled with numba when it is importable.  Setting the
environment variable ``GAMMACF_DISABLE_NUMBA=1`` forces the pure-numpy
implementations, which compute the same values.
"""
from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "NUMBA_ENABLED",
    "approximant_f64",
    "approximant_sequence_f64",
    "approximants_batch_f64",
    "log1p_ratio_sum_f64",
]

_RENORM = 2.0 ** 512
_RENORM_EXP = 512


def _numba_wanted() -> bool:
    return os.environ.get("GAMMACF_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes", "on")


try:
    if not _numba_wanted():
        raise ImportError
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


def _approximant_py(a, b, b0):
    A_prev, A, B_prev, B = 1.0, b0, 0.0, 1.0
    exp2 = 0
    for k in range(a.shape[0]):
        A_prev, A = A, b[k] * A + a[k] * A_prev
        B_prev, B = B, b[k] * B + a[k] * B_prev
        if abs(B) > _RENORM:
            A /= _RENORM
            B /= _RENORM
            A_prev /= _RENORM
            B_prev /= _RENORM
            exp2 += _RENORM_EXP
    return A, B, A_prev, B_prev, exp2


def _sequence_py(a, b, b0):
    n = a.shape[0]
    out = np.empty(n + 1)
    A_prev, A, B_prev, B = 1.0, b0, 0.0, 1.0
    out[0] = b0
    for k in range(n):
        A_prev, A = A, b[k] * A + a[k] * A_prev
        B_prev, B = B, b[k] * B + a[k] * B_prev
        if abs(B) > _RENORM:
            A /= _RENORM
            B /= _RENORM
            A_prev /= _RENORM
            B_prev /= _RENORM
        out[k + 1] = A / B if B != 0.0 else math.nan
    return out


def _batch_numpy(a, b, b0):
    # vectorized over the leading (fraction) axis, sequential over depth
    rows = a.shape[0]
    A_prev = np.ones(rows)
    A = b0.astype(np.float64).copy()
    B_prev = np.zeros(rows)
    B = np.ones(rows)
    for k in range(a.shape[1]):
        A_prev, A = A, b[:, k] * A + a[:, k] * A_prev
        B_prev, B = B, b[:, k] * B + a[:, k] * B_prev
        big = np.abs(B) > _RENORM
        if big.any():
            for arr in (A, B, A_prev, B_prev):
                arr[big] /= _RENORM
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(B != 0.0, A / B, np.nan)


@njit(cache=False)
def _approximant_jit(a, b, b0):
    A_prev, A, B_prev, B = 1.0, b0, 0.0, 1.0
    exp2 = 0
    for k in range(a.shape[0]):
        A_new = b[k] * A + a[k] * A_prev
        B_new = b[k] * B + a[k] * B_prev
        A_prev, A = A, A_new
        B_prev, B = B, B_new
        if abs(B) > 2.0 ** 512:
            A /= 2.0 ** 512
            B /= 2.0 ** 512
            A_prev /= 2.0 ** 512
            B_prev /= 2.0 ** 512
            exp2 += 512
    return A, B, A_prev, B_prev, exp2


@njit(cache=False)
def _sequence_jit(a, b, b0):
    n = a.shape[0]
    out = np.empty(n + 1)
    A_prev, A, B_prev, B = 1.0, b0, 0.0, 1.0
    out[0] = b0
    for k in range(n):
        A_new = b[k] * A + a[k] * A_prev
        B_new = b[k] * B + a[k] * B_prev
        A_prev, A = A, A_new
        B_prev, B = B, B_new
        if abs(B) > 2.0 ** 512:
            A /= 2.0 ** 512
            B /= 2.0 ** 512
            A_prev /= 2.0 ** 512
            B_prev /= 2.0 ** 512
        out[k + 1] = A / B if B != 0.0 else np.nan
    return out


@njit(cache=False)
def _batch_jit(a, b, b0):
    rows, depth = a.shape
    out = np.empty(rows)
    for i in range(rows):
        A_prev, A, B_prev, B = 1.0, b0[i], 0.0, 1.0
        for k in range(depth):
            A_new = b[i, k] * A + a[i, k] * A_prev
            B_new = b[i, k] * B + a[i, k] * B_prev
            A_prev, A = A, A_new
            B_prev, B = B, B_new
            if abs(B) > 2.0 ** 512:
                A /= 2.0 ** 512
                B /= 2.0 ** 512
                A_prev /= 2.0 ** 512
                B_prev /= 2.0 ** 512
        out[i] = A / B if B != 0.0 else np.nan
    return out


def _as_f64(arr):
    return np.ascontiguousarray(arr, dtype=np.float64)


def approximant_f64(a, b, b0: float):
    """``(A_n, B_n, A_{n-1}, B_{n-1}, exponent)`` after all given partial pairs.

    The four numbers share a scale of ``2**(-exponent)``.
    """
    a, b = _as_f64(a), _as_f64(b)
    if a.shape != b.shape:
        raise ValueError("a and b must have the same length")
    fn = _approximant_jit if NUMBA_ENABLED else _approximant_py
    A, B, A_prev, B_prev, exp2 = fn(a, b, float(b0))
    return float(A), float(B), float(A_prev), float(B_prev), int(exp2)


def approximant_sequence_f64(a, b, b0: float) -> np.ndarray:
    """All approximants ``f_0 .. f_n`` (NaN where ``B_k = 0``)."""
    a, b = _as_f64(a), _as_f64(b)
    fn = _sequence_jit if NUMBA_ENABLED else _sequence_py
    return fn(a, b, float(b0))


def approximants_batch_f64(a, b, b0) -> np.ndarray:
    """Depth-``n`` approximants of many fractions at once.

    ``a`` and ``b`` have shape ``(fractions, n)``; ``b0`` has shape ``(fractions,)``.
    """
    a, b, b0 = _as_f64(a), _as_f64(b), _as_f64(b0)
    if a.ndim != 2 or a.shape != b.shape or b0.shape != (a.shape[0],):
        raise ValueError("expected a, b of shape (k, n) and b0 of shape (k,)")
    if NUMBA_ENABLED:
        return _batch_jit(a, b, b0)
    return _batch_numpy(a, b, b0)


@njit(cache=False)
def _log1p_sum_jit(z, n):
    # pairwise-free Kahan summation keeps 1e6 terms at full double accuracy
    total = 0.0
    comp = 0.0
    for k in range(1, n + 1):
        y = np.log1p(z / k) - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def log1p_ratio_sum_f64(z: float, n: int) -> float:
    """``sum_{k=1}^{n} log(1 + z/k)`` in double precision."""
    if NUMBA_ENABLED:
        return float(_log1p_sum_jit(float(z), int(n)))
    k = np.arange(1, n + 1, dtype=np.float64)
    return math.fsum(np.log1p(z / k))
