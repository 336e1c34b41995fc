"""Deterministic builders and bundled datasets.

Every builder verifies its output before returning it and raises
:class:`VerificationFailed` otherwise.
"""
from __future__ import annotations

import hashlib
import os
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .codes import SignMatrixFamily, decode_hex_family
from .errors import InvalidArgument, ParseError, Unsupported, VerificationFailed
from .formats import parse_matrix_records
from .wmatrix import ZERO, MUWSet, UnitWeighingMatrix, _lcm, verify_weighing

_CANONICAL = {
    # a = zeta_3, conj(a) = zeta_3^2
    "W5": ([[0, 0, 0, 0, "."],
            [0, 1, 2, ".", 0],
            [0, 2, ".", 1, 2],
            [0, ".", 1, 2, 1],
            [".", 0, 2, 1, 1]], 4, 3),
    "W7": ([[0, 0, 0, 0, ".", ".", "."],
            [0, 1, ".", ".", 0, 0, "."],
            [0, ".", 1, ".", 1, ".", 0],
            [0, ".", ".", 1, ".", 1, 1],
            [".", 0, 1, ".", ".", 0, 1],
            [".", 0, ".", 1, 0, ".", 0],
            [".", ".", 0, 1, 1, 0, "."]], 4, 2),
    "UW3_3_BLOCK": ([[0, 0, 0],
                     [0, 1, 2],
                     [0, 2, 1]], 3, 3),
    "UW4_3_BLOCK": ([[0, 0, 0, "."],
                     [0, 1, ".", 0],
                     [0, ".", 1, 1],
                     [".", 0, 1, 0]], 3, 2),
    "H2": ([[0, 0],
            [0, 1]], 2, 2),
}


def _checked(W: UnitWeighingMatrix) -> UnitWeighingMatrix:
    v = verify_weighing(W)
    if not v:
        raise VerificationFailed(v.reason)
    return W


def _checked_set(s: MUWSet) -> MUWSet:
    v = s.verify()
    if not v:
        raise VerificationFailed(v.reason)
    return s


def canonical(name: str) -> UnitWeighingMatrix:
    """Small named matrices: W5, W7, UW3_3_BLOCK, UW4_3_BLOCK and H2."""
    try:
        rows, p, m = _CANONICAL[name]
    except KeyError:
        raise InvalidArgument(f"unknown canonical matrix {name!r}; "
                              f"choose from {', '.join(_CANONICAL)}") from None
    return _checked(UnitWeighingMatrix.from_rows(rows, p, m))


def direct_sum(W: UnitWeighingMatrix, X: UnitWeighingMatrix) -> UnitWeighingMatrix:
    if W.p != X.p:
        raise InvalidArgument(f"weights differ: {W.p} vs {X.p}")
    m = _lcm((W.m, X.m))
    W, X = W.embed(m), X.embed(m)
    n = W.n + X.n
    cells = np.full((n, n), ZERO, dtype=np.int64)
    cells[:W.n, :W.n] = W.cells
    cells[W.n:, W.n:] = X.cells
    return _checked(UnitWeighingMatrix(cells, W.p, m))


def direct_sum_many(mats: Sequence[UnitWeighingMatrix]) -> UnitWeighingMatrix:
    if not mats:
        raise InvalidArgument("need at least one matrix")
    out = mats[0]
    for X in mats[1:]:
        out = direct_sum(out, X)
    return out


def direct_sum_sets(collection: Sequence[MUWSet]) -> MUWSet:
    """Pair the k-th members across the collection; size is the smallest input size."""
    collection = list(collection)
    if not collection:
        raise InvalidArgument("empty collection")
    if any(len(s) == 0 for s in collection):
        return MUWSet([])
    if len({s.p for s in collection}) != 1:
        raise InvalidArgument("all sets must share the same weight")
    k = min(len(s) for s in collection)
    members = [direct_sum_many([s[i] for s in collection]) for i in range(k)]
    return _checked_set(MUWSet(members))


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def prime_muhm(q: int) -> MUWSet:
    """q mutually unbiased Hadamard matrices of prime order q.

    For odd q, member t has entry zeta_q^(t k^2 + j k) at (j, k); the
    difference of two members is a quadratic Gauss sum of modulus sqrt(q).
    For q = 2 the pair over 4th roots is ``[[1, 1], [1, -1]]`` and
    ``[[1, i], [1, -i]]``.
    """
    if not is_prime(q):
        raise InvalidArgument(f"{q} is not prime (prime powers are not supported)")
    if q == 2:
        mats = [UnitWeighingMatrix(np.array([[0, 0], [0, 2]]), 2, 4),
                UnitWeighingMatrix(np.array([[0, 1], [0, 3]]), 2, 4)]
    else:
        j = np.arange(q)[:, None]
        k = np.arange(q)[None, :]
        mats = [UnitWeighingMatrix((t * k * k + j * k) % q, q, q) for t in range(q)]
    return _checked_set(MUWSet(mats))


def weight2_canonical(n: int) -> UnitWeighingMatrix:
    """``[[1, 1], [1, -1]]`` tensored with the identity of order n/2."""
    if n % 2:
        raise Unsupported(f"no UW({n},2) exists for odd n")
    half = n // 2
    core = np.array([[0, 0], [0, 1]])
    cells = np.full((n, n), ZERO, dtype=np.int64)
    for a in range(2):
        for b in range(2):
            for i in range(half):
                cells[a * half + i, b * half + i] = core[a, b]
    return _checked(UnitWeighingMatrix(cells, 2, 2))


def weight2_pair(n: int) -> MUWSet:
    """Two mutually unbiased UW(n, 2) for even n, over 4th roots."""
    if n % 2 or n < 2:
        raise Unsupported(f"no UW({n},2) exists for odd n")
    return direct_sum_sets([prime_muhm(2)] * (n // 2))


def weight3_decomposition(n: int) -> tuple[int, int]:
    """``(threes, fours)`` with ``3*threes + 4*fours == n`` and ``fours`` maximal."""
    for fours in range(n // 4, -1, -1):
        if (n - 4 * fours) % 3 == 0:
            return (n - 4 * fours) // 3, fours
    raise Unsupported(f"{n} is not a sum of 3s and 4s")


def weight3_tight_family(n: int) -> MUWSet:
    """The largest possible set of mutually unbiased UW(n, 3).

    Nine members from copies of the nine UW(4, 3) when 4 divides n, else
    three members built from F3 and UW(4, 3) blocks (3-blocks first).
    """
    if n < 3 or n == 5:
        raise Unsupported(f"no mutually unbiased UW({n},3) family exists")
    threes, fours = weight3_decomposition(n)
    uw43 = load_dataset("UW4_3")
    f3 = prime_muhm(3)
    return direct_sum_sets([f3] * threes + [uw43] * fours)


# --------------------------------------------------------------- datasets

DATASETS = {
    "UW4_3": "uw4_3.txt",
    "UW5_4": "uw5_4.txt",
    "UW6_4": "uw6_4.txt",
    "W7_4": "w7_4.txt",
    "W8_4": "w8_4.txt",
    "H8": "h8.hex",
    "H32": "h32.hex",
}
MANIFEST = "SHA256SUMS"


def data_dir() -> Path:
    """Bundled data directory, or ``$MUWM_DATA_DIR`` when set."""
    override = os.environ.get("MUWM_DATA_DIR")
    if override:
        return Path(override)
    return Path(str(resources.files("muwm") / "data"))


def _manifest(d: Path) -> dict[str, str]:
    f = d / MANIFEST
    if not f.exists():
        return {}
    out = {}
    for line in f.read_text().splitlines():
        if line.strip():
            digest, name = line.split()
            out[name] = digest
    return out


def dataset_path(key: str) -> Path:
    try:
        return data_dir() / DATASETS[key]
    except KeyError:
        raise InvalidArgument(f"unknown dataset {key!r}; choose from {', '.join(DATASETS)}") from None


def read_dataset_text(key: str, check: bool = True) -> str:
    """Raw dataset text; the checksum is compared when the manifest lists the file."""
    path = dataset_path(key)
    raw = path.read_bytes()
    if check:
        want = _manifest(path.parent).get(path.name)
        if want is not None and hashlib.sha256(raw).hexdigest() != want:
            raise ParseError(f"checksum mismatch for {path}")
    return raw.decode()


@lru_cache(maxsize=None)
def _load(key: str, directory: str):
    text = read_dataset_text(key)
    if DATASETS[key].endswith(".hex"):
        return decode_hex_family(text)
    return MUWSet(parse_matrix_records(text))


def load_dataset(key: str) -> MUWSet | SignMatrixFamily:
    """Parse a bundled dataset; callers verify."""
    dataset_path(key)
    return _load(key, str(data_dir()))
