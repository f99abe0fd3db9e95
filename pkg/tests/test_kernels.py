import json
import os
import subprocess
import sys

import numpy as np
import pytest

from gammacf import kernels
from gammacf.kernels import approximant_f64, approximant_sequence_f64, approximants_batch_f64, log1p_ratio_sum_f64

SCRIPT = r"""
import json, numpy as np
from gammacf import kernels
n = 2000
k = np.arange(1, n + 1, dtype=float)
a = (2 * k - 3) ** 2
a[0] = 4.0
b = np.full(n, 2.0)
b[0] = 1.0
seq = kernels.approximant_sequence_f64(a, b, 0.0)
batch = kernels.approximants_batch_f64(np.vstack([a, a]), np.vstack([b, 2 * b]), np.array([0.0, 1.0]))
print(json.dumps({
    "numba": kernels.NUMBA_ENABLED,
    "single": kernels.approximant_f64(a, b, 0.0),
    "seq": seq[-5:].tolist(),
    "batch": batch.tolist(),
    "log1p": kernels.log1p_ratio_sum_f64(0.5, 100000),
}))
"""


def run(disable):
    env = dict(os.environ)
    env.pop("GAMMACF_DISABLE_NUMBA", None)
    if disable:
        env["GAMMACF_DISABLE_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_numba_and_fallback_agree():
    fast, slow = run(False), run(True)
    assert slow["numba"] is False
    pytest.importorskip("numba")
    assert fast["numba"] is True
    np.testing.assert_allclose(fast["seq"], slow["seq"], rtol=1e-13)
    np.testing.assert_allclose(fast["batch"], slow["batch"], rtol=1e-13)
    assert fast["single"][4] == slow["single"][4]
    fa, fb = fast["single"][0], fast["single"][1]
    sa, sb = slow["single"][0], slow["single"][1]
    assert abs(fa / fb - sa / sb) < 1e-13
    assert abs(fast["log1p"] - slow["log1p"]) < 1e-9


def test_bauer_fraction_approaches_pi():
    n = 200000
    k = np.arange(1, n + 1, dtype=float)
    # 4/(1 + 1^2/(2 + 3^2/(2 + ...)))
    a = (2 * k - 3) ** 2
    a[0] = 4.0
    b = np.full(n, 2.0)
    b[0] = 1.0
    A, B, _, _, _ = approximant_f64(a, b, 0.0)
    assert abs(A / B - np.pi) < 1e-4


def test_renormalization_keeps_ratios():
    a = np.ones(3000)
    b = np.full(3000, 1e3)
    A, B, A1, B1, exp2 = approximant_f64(a, b, 0.0)
    assert exp2 > 0
    # fixed point of r = 1/(1000 + r)
    assert abs(A / B - 2 / (1e3 + np.sqrt(1e6 + 4))) < 1e-17


def test_sequence_marks_singular_approximants():
    seq = approximant_sequence_f64(np.array([1.0, 1.0]), np.array([0.0, 1.0]), 0.0)
    assert np.isnan(seq[1]) and seq[2] == 1.0


def test_batch_shape_validation():
    with pytest.raises(ValueError):
        approximants_batch_f64(np.ones(3), np.ones(3), np.ones(1))
    with pytest.raises(ValueError):
        approximant_f64(np.ones(3), np.ones(4), 0.0)


def test_log1p_sum():
    exact = sum(np.log1p(0.25 / k) for k in range(1, 1001))
    assert abs(log1p_ratio_sum_f64(0.25, 1000) - exact) < 1e-12
    assert isinstance(kernels.NUMBA_ENABLED, bool)
