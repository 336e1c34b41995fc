"""Hot integer kernels with two interchangeable backends.

Each kernel has a numba ``@njit`` implementation and a vectorised numpy
implementation that compute identical integer results.  The numba path is
used when numba imports and ``MUWM_NUMBA`` is not set to ``0``/``false``/
``off``; otherwise every public entry point falls back to numpy.

Rows of exponent matrices use ``-1`` for a zero entry and ``k`` for zeta_m^k.
"""
from __future__ import annotations

import os

import numpy as np

from .cyclotomic import reduction_table

ORTHOGONAL = 0   # |<x, y>|^2 == 0
FLAT = 1         # |<x, y>|^2 == p
OTHER = 2

_flag = os.environ.get("MUWM_NUMBA", "1").strip().lower()
try:
    if _flag in ("0", "false", "off", "no"):
        raise ImportError("numba disabled by MUWM_NUMBA")
    import numba
    from numba import njit, prange
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the bundled TBB is too old on some hosts and numba then warns on first use
        numba.config.THREADING_LAYER = "workqueue"
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag in CI
    numba = None
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def reduction_matrix(m: int) -> np.ndarray:
    """``reduction_table`` as an int64 array of shape (m, phi(m))."""
    return np.array(reduction_table(m), dtype=np.int64).reshape(m, -1)


# ---------------------------------------------------------------- numpy paths

def norm_classes_numpy(A: np.ndarray, B: np.ndarray, m: int, p: int,
                       chunk: int = 256) -> np.ndarray:
    """Classify ``|<a, b>|^2`` for every row pair as ORTHOGONAL, FLAT or OTHER."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    table = reduction_matrix(m)
    out = np.empty((A.shape[0], B.shape[0]), dtype=np.int8)
    ks = np.arange(m)
    vb = B >= 0
    for lo in range(0, A.shape[0], chunk):
        a = A[lo:lo + chunk]
        valid = (a >= 0)[:, None, :] & vb[None, :, :]
        diff = (a[:, None, :] - B[None, :, :]) % m
        hist = ((diff[..., None] == ks) & valid[..., None]).sum(axis=2, dtype=np.int64)
        corr = np.stack([(hist * np.roll(hist, d, axis=-1)).sum(-1) for d in range(m)], axis=-1)
        coef = corr @ table
        rest_zero = ~np.any(coef[..., 1:], axis=-1)
        cls = np.full(coef.shape[:2], OTHER, dtype=np.int8)
        cls[rest_zero & (coef[..., 0] == p)] = FLAT
        cls[rest_zero & (coef[..., 0] == 0)] = ORTHOGONAL
        out[lo:lo + chunk] = cls
    return out


def pm_gram_numpy(X: np.ndarray, Y: np.ndarray, n: int) -> np.ndarray:
    """Inner products of packed +-1 rows: ``n - 2 * popcount(x ^ y)``.

    ``X`` and ``Y`` are uint64 arrays of shape (rows, words).
    """
    X = np.asarray(X, dtype=np.uint64)
    Y = np.asarray(Y, dtype=np.uint64)
    diff = np.bitwise_count(X[:, None, :] ^ Y[None, :, :]).sum(axis=-1, dtype=np.int64)
    return n - 2 * diff


# ---------------------------------------------------------------- numba paths

if HAVE_NUMBA:
    @njit(cache=True, parallel=True)
    def _norm_classes_nb(A, B, m, p, table):
        na, n = A.shape
        nb = B.shape[0]
        deg = table.shape[1]
        out = np.empty((na, nb), dtype=np.int8)
        for i in prange(na):
            hist = np.empty(m, dtype=np.int64)
            coef = np.empty(deg, dtype=np.int64)
            for j in range(nb):
                hist[:] = 0
                for k in range(n):
                    a = A[i, k]
                    b = B[j, k]
                    if a >= 0 and b >= 0:
                        hist[(a - b + m) % m] += 1
                coef[:] = 0
                for d in range(m):
                    acc = 0
                    for k in range(m):
                        acc += hist[k] * hist[(k - d + m) % m]
                    if acc != 0:
                        for t in range(deg):
                            coef[t] += acc * table[d, t]
                rest = False
                for t in range(1, deg):
                    if coef[t] != 0:
                        rest = True
                        break
                if rest:
                    out[i, j] = OTHER
                elif coef[0] == 0:
                    out[i, j] = ORTHOGONAL
                elif coef[0] == p:
                    out[i, j] = FLAT
                else:
                    out[i, j] = OTHER
        return out

    @njit(cache=True, inline="always")
    def _popcount64(x):
        x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
        x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
        x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)

    @njit(cache=True, parallel=True)
    def _pm_gram_nb(X, Y, n):
        nx, w = X.shape
        ny = Y.shape[0]
        out = np.empty((nx, ny), dtype=np.int64)
        for i in prange(nx):
            for j in range(ny):
                c = 0
                for t in range(w):
                    c += _popcount64(X[i, t] ^ Y[j, t])
                out[i, j] = n - 2 * np.int64(c)
        return out


def norm_classes_numba(A, B, m: int, p: int) -> np.ndarray:
    if not HAVE_NUMBA:
        raise RuntimeError("numba backend unavailable")
    return _norm_classes_nb(np.ascontiguousarray(A, dtype=np.int64),
                            np.ascontiguousarray(B, dtype=np.int64),
                            m, p, reduction_matrix(m))


def pm_gram_numba(X, Y, n: int) -> np.ndarray:
    if not HAVE_NUMBA:
        raise RuntimeError("numba backend unavailable")
    return _pm_gram_nb(np.ascontiguousarray(X, dtype=np.uint64),
                       np.ascontiguousarray(Y, dtype=np.uint64), n)


# ---------------------------------------------------------------- dispatch

def norm_classes(A, B, m: int, p: int) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    if A.size == 0 or B.size == 0:
        return np.empty((A.shape[0], B.shape[0]), dtype=np.int8)
    if HAVE_NUMBA:
        return norm_classes_numba(A, B, m, p)
    return norm_classes_numpy(A, B, m, p)


def pm_gram(X, Y, n: int) -> np.ndarray:
    if HAVE_NUMBA:
        return pm_gram_numba(X, Y, n)
    return pm_gram_numpy(X, Y, n)


def pack_pm_rows(rows: np.ndarray) -> np.ndarray:
    """Pack a (N, n) array of +-1 into (N, ceil(n/64)) uint64 words; -1 -> bit 1."""
    rows = np.asarray(rows)
    n = rows.shape[1]
    words = (n + 63) // 64
    bits = np.zeros((rows.shape[0], words * 64), dtype=np.uint8)
    bits[:, :n] = rows < 0
    shaped = bits.reshape(rows.shape[0], words, 64)
    weights = np.uint64(1) << np.arange(64, dtype=np.uint64)
    return (shaped.astype(np.uint64) * weights).sum(axis=-1, dtype=np.uint64)
