import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from muwm import kernels
from oracles import as_complex

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")


def float_classes(A, B, m, p):
    M = as_complex(A, m) @ as_complex(B, m).conj().T
    a = np.abs(M) ** 2
    out = np.full(a.shape, kernels.OTHER, dtype=np.int8)
    out[np.abs(a - p) < 1e-9] = kernels.FLAT
    out[a < 1e-9] = kernels.ORTHOGONAL
    return out


@st.composite
def row_pairs(draw):
    m = draw(st.sampled_from([1, 2, 3, 4, 6, 8, 12]))
    n = draw(st.integers(1, 7))
    p = draw(st.integers(1, n))
    cell = st.integers(-1, m - 1)
    A = np.array(draw(st.lists(st.lists(cell, min_size=n, max_size=n), min_size=1, max_size=6)))
    B = np.array(draw(st.lists(st.lists(cell, min_size=n, max_size=n), min_size=1, max_size=6)))
    return A, B, m, p


@given(row_pairs())
def test_numpy_classes_match_float_oracle(case):
    A, B, m, p = case
    assert np.array_equal(kernels.norm_classes_numpy(A, B, m, p), float_classes(A, B, m, p))


@needs_numba
@given(row_pairs())
def test_backends_agree_on_classes(case):
    A, B, m, p = case
    assert np.array_equal(kernels.norm_classes_numba(A, B, m, p),
                          kernels.norm_classes_numpy(A, B, m, p))


@given(st.integers(1, 130), st.integers(1, 6), st.integers(1, 6), st.integers(0, 2 ** 32))
def test_pm_gram_matches_matmul(n, a, b, seed):
    rng = np.random.default_rng(seed)
    X = rng.choice([-1, 1], size=(a, n))
    Y = rng.choice([-1, 1], size=(b, n))
    want = X @ Y.T
    PX, PY = kernels.pack_pm_rows(X), kernels.pack_pm_rows(Y)
    assert np.array_equal(kernels.pm_gram_numpy(PX, PY, n), want)
    assert np.array_equal(kernels.pm_gram(PX, PY, n), want)
    if kernels.HAVE_NUMBA:
        assert np.array_equal(kernels.pm_gram_numba(PX, PY, n), want)


def test_empty_inputs():
    out = kernels.norm_classes(np.empty((0, 3), dtype=int), np.zeros((2, 3), dtype=int), 4, 2)
    assert out.shape == (0, 2)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, MUWM_NUMBA="0")
    code = ("from muwm import kernels, search;"
            "print(kernels.BACKEND, search.search_max_muw(search.SearchConfig(4, 3, 6)).size)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out == ["numpy", "9"]
