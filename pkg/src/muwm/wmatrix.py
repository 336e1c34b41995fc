"""Unit weighing matrices and exact verification of weighing/unbiasedness.

A matrix is stored as an ``n x n`` integer array of root exponents: ``k``
stands for zeta_m^k and ``ZERO`` (-1) for a zero cell.  Real matrices are the
case ``m = 2`` (exponent 1 is -1) or ``m = 1``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Iterable, Iterator, Sequence

import numpy as np

from .cyclotomic import CycInt, MAX_ROOT_ORDER
from .errors import InvalidArgument, Verdict, VerificationFailed

ZERO = -1


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@dataclass(frozen=True, eq=False)
class UnitWeighingMatrix:
    """An ``n x n`` matrix with entries 0 or m-th roots of unity and weight ``p``.

    Construction only checks shape and exponent ranges; the weighing property
    is established by :func:`verify_weighing`.
    """

    cells: np.ndarray
    p: int
    m: int

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.int64)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1] or cells.shape[0] == 0:
            raise InvalidArgument(f"cells must be a non-empty square grid, got shape {cells.shape}")
        if not (1 <= self.m <= MAX_ROOT_ORDER):
            raise InvalidArgument(f"root order out of range: {self.m}")
        if not (1 <= self.p <= cells.shape[0]):
            raise InvalidArgument(f"weight {self.p} out of range for order {cells.shape[0]}")
        if cells.min() < ZERO or cells.max() >= self.m:
            raise InvalidArgument(f"exponents must lie in [0, {self.m}) or be ZERO")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], p: int | None = None, m: int = 2) -> "UnitWeighingMatrix":
        """Build from nested rows; ``None`` or ``'.'`` mark zeros.

        ``p`` defaults to the number of nonzeros in the first row.
        """
        grid = [[ZERO if (x is None or x == ".") else int(x) % m for x in r] for r in rows]
        if p is None:
            p = sum(1 for x in grid[0] if x != ZERO)
        return cls(np.array(grid, dtype=np.int64), p, m)

    @classmethod
    def from_signs(cls, signs: np.ndarray, p: int | None = None) -> "UnitWeighingMatrix":
        """Real matrix from an array over {-1, 0, +1}."""
        signs = np.asarray(signs)
        cells = np.where(signs == 0, ZERO, np.where(signs < 0, 1, 0))
        if p is None:
            p = int(np.count_nonzero(signs[0]))
        return cls(cells, p, 2)

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def support(self) -> np.ndarray:
        return self.cells != ZERO

    def key(self) -> tuple:
        return (self.n, self.p, self.m, self.cells.tobytes())

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnitWeighingMatrix):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        rows = "; ".join(" ".join("." if x == ZERO else str(x) for x in r) for r in self.cells)
        return f"UnitWeighingMatrix(n={self.n}, p={self.p}, m={self.m}, [{rows}])"

    def embed(self, m: int) -> "UnitWeighingMatrix":
        """Same matrix written over m-th roots (``self.m`` must divide ``m``)."""
        if m == self.m:
            return self
        if m % self.m:
            raise InvalidArgument(f"cannot re-embed m={self.m} into m={m}")
        step = m // self.m
        cells = np.where(self.cells == ZERO, ZERO, self.cells * step)
        return UnitWeighingMatrix(cells, self.p, m)

    def with_weight(self, p: int) -> "UnitWeighingMatrix":
        return UnitWeighingMatrix(self.cells, p, self.m)

    def is_real(self) -> bool:
        nz = self.cells[self.cells != ZERO]
        return bool(np.all((nz * 2) % self.m == 0))

    def to_complex(self) -> np.ndarray:
        """Floating-point copy; only for oracles and diagnostics."""
        z = np.exp(2j * np.pi * np.where(self.cells == ZERO, 0, self.cells) / self.m)
        return np.where(self.cells == ZERO, 0, z)

    def signs(self) -> np.ndarray:
        """Integer array over {-1, 0, 1}; the matrix must be real."""
        if not self.is_real():
            raise InvalidArgument("matrix is not real")
        half = self.m // 2 if self.m % 2 == 0 else None
        out = np.ones_like(self.cells)
        out[self.cells == ZERO] = 0
        if half is not None:
            out[self.cells == half] = -1
        return out


def entry_norm_sq(x: Sequence[int], y: Sequence[int], m: int) -> CycInt:
    """``|<x, y>|^2`` for two exponent rows, as an exact cyclotomic integer."""
    return inner(x, y, m).norm_sq()


def inner(x: Sequence[int], y: Sequence[int], m: int) -> CycInt:
    """``sum_k x_k * conj(y_k)`` for exponent rows ``x`` and ``y``."""
    return CycInt.from_exponents(((a - b) for a, b in zip(x, y) if a != ZERO and b != ZERO), m)


def product(H: UnitWeighingMatrix, K: UnitWeighingMatrix) -> list[list[CycInt]]:
    """Exact entries of ``H K^*``."""
    if H.m != K.m or H.n != K.n:
        raise InvalidArgument("product needs matching order and root order")
    hr = [tuple(int(v) for v in r) for r in H.cells]
    kr = [tuple(int(v) for v in r) for r in K.cells]
    return [[inner(a, b, H.m) for b in kr] for a in hr]


def gram(W: UnitWeighingMatrix) -> list[list[CycInt]]:
    """Exact ``W W^*``."""
    return product(W, W)


def grid_mul_conj(A: list[list[CycInt]], B: list[list[CycInt]]) -> list[list[CycInt]]:
    """``A B^*`` for grids of cyclotomic integers."""
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(len(B)):
            acc = CycInt.zero(A[i][0].m)
            for k in range(len(A[i])):
                acc = acc + A[i][k] * B[j][k].conjugate()
            row.append(acc)
        out.append(row)
    return out


def verify_weighing(W: UnitWeighingMatrix) -> Verdict:
    """Check ``W W^* = p I`` exactly, plus the row/column weight count.

    ``where`` is ``("row", i)``/``("col", j)`` for a weight violation or the
    first failing Gram position ``(i, j)``.
    """
    supp = W.support
    for i, c in enumerate(supp.sum(axis=1)):
        if c != W.p:
            return Verdict.failed(f"row {i} has {c} nonzero entries, expected {W.p}", ("row", i))
    rows = [tuple(int(v) for v in r) for r in W.cells]
    for i in range(W.n):
        for j in range(i, W.n):
            g = inner(rows[i], rows[j], W.m)
            want = W.p if i == j else 0
            if not g.is_integer(want):
                return Verdict.failed(f"gram entry ({i},{j}) is not {want}", (i, j), value=g)
    # implied by the Gram check (W/sqrt(p) is unitary), kept as a guard
    for j, c in enumerate(supp.sum(axis=0)):
        if c != W.p:
            return Verdict.failed(f"column {j} has {c} nonzero entries, expected {W.p}", ("col", j))
    return Verdict.passed()


def _check_compatible(H: UnitWeighingMatrix, K: UnitWeighingMatrix) -> None:
    if (H.n, H.p, H.m) != (K.n, K.p, K.m):
        raise InvalidArgument(
            f"mismatched parameters (n,p,m): {(H.n, H.p, H.m)} vs {(K.n, K.p, K.m)}")


def _unbiased_rows(hr, kr, p: int, m: int) -> tuple[int, int, CycInt] | None:
    for i, a in enumerate(hr):
        for j, b in enumerate(kr):
            nsq = entry_norm_sq(a, b, m)
            if not (nsq.is_integer(0) or nsq.is_integer(p)):
                return i, j, nsq
    return None


def verify_unbiased(H: UnitWeighingMatrix, K: UnitWeighingMatrix) -> Verdict:
    """Check that every entry of ``H K^*`` has squared modulus 0 or ``p``.

    For weighing matrices H and K this is the same as ``H K^* = sqrt(p) L``
    with ``L`` a UW(n, p): ``M = H K^*`` satisfies ``M M^* = p^2 I``, so each
    row of ``M/sqrt(p)`` is a unit vector whose nonzero entries are
    unimodular, which forces exactly ``p`` of them per row and column.
    ``where`` is ``(row of H, row of K)``.
    """
    _check_compatible(H, K)
    for name, W in (("H", H), ("K", K)):
        v = verify_weighing(W)
        if not v:
            return Verdict.failed(f"{name} is not a weighing matrix: {v.reason}", v.where)
    hr = [tuple(int(v) for v in r) for r in H.cells]
    kr = [tuple(int(v) for v in r) for r in K.cells]
    bad = _unbiased_rows(hr, kr, H.p, H.m)
    if bad is not None:
        i, j, nsq = bad
        return Verdict.failed(f"|(HK*)[{i},{j}]|^2 is neither 0 nor {H.p}", (i, j), value=nsq)
    return Verdict.passed()


def verify_mutually_unbiased(members: Sequence[UnitWeighingMatrix]) -> Verdict:
    """All members are weighing matrices and all distinct pairs are unbiased.

    ``where`` is ``(a, b, row, col)`` for a failing pair or ``(a,)`` for a
    member that is not a weighing matrix.
    """
    members = list(members)
    if not members:
        return Verdict.passed()
    for W in members[1:]:
        _check_compatible(members[0], W)
    for a, W in enumerate(members):
        v = verify_weighing(W)
        if not v:
            return Verdict.failed(f"member {a}: {v.reason}", (a,) + (v.where or ()))
    rows = [[tuple(int(v) for v in r) for r in W.cells] for W in members]
    p, m = members[0].p, members[0].m
    for a, b in combinations(range(len(members)), 2):
        bad = _unbiased_rows(rows[a], rows[b], p, m)
        if bad is not None:
            i, j, nsq = bad
            return Verdict.failed(f"members {a} and {b} are not unbiased at ({i},{j})",
                                  (a, b, i, j), value=nsq)
    return Verdict.passed()


def dephase(W: UnitWeighingMatrix) -> UnitWeighingMatrix:
    """Scale rows and columns so each row's and each column's first nonzero is 1.

    The edges (row, its first nonzero column) and (column, its first nonzero
    row) of the support graph always form a forest, so both conditions can
    be met at once by solving for unit scalings along each tree.
    """
    n, m = W.n, W.m
    cells = W.cells
    adj: list[list[tuple[int, int]]] = [[] for _ in range(2 * n)]

    def add(i, j):
        adj[i].append((n + j, int(cells[i, j])))
        adj[n + j].append((i, int(cells[i, j])))

    for i in range(n):
        nz = np.flatnonzero(cells[i] != ZERO)
        if nz.size:
            add(i, int(nz[0]))
    for j in range(n):
        nz = np.flatnonzero(cells[:, j] != ZERO)
        if nz.size:
            i = int(nz[0])
            if int(np.flatnonzero(cells[i] != ZERO)[0]) != j:
                add(i, j)
    # phase[v]: exponent added to row v (v < n) or column v - n
    phase = [None] * (2 * n)
    for root in range(2 * n):
        if phase[root] is not None:
            continue
        phase[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u, w in adj[v]:
                if phase[u] is None:
                    phase[u] = (-w - phase[v]) % m
                    queue.append(u)
    r = np.array(phase[:n], dtype=np.int64)
    c = np.array(phase[n:], dtype=np.int64)
    out = np.where(cells == ZERO, ZERO, (cells + r[:, None] + c[None, :]) % m)
    return UnitWeighingMatrix(out, W.p, m)


def monomial_transform(W: UnitWeighingMatrix,
                       row_perm: Sequence[int], row_phase: Sequence[int],
                       col_perm: Sequence[int], col_phase: Sequence[int]) -> UnitWeighingMatrix:
    """``P W Q`` for unimodular permutation matrices given as permutation + phases.

    Entry ``(i, j)`` of the result is ``zeta^(row_phase[i] + col_phase[j])``
    times ``W[row_perm[i], col_perm[j]]``.
    """
    cells = W.cells[np.ix_(list(row_perm), list(col_perm))]
    rp = np.asarray(row_phase, dtype=np.int64)[:, None]
    cp = np.asarray(col_phase, dtype=np.int64)[None, :]
    out = np.where(cells == ZERO, ZERO, (cells + rp + cp) % W.m)
    return UnitWeighingMatrix(out, W.p, W.m)


def random_monomial(n: int, m: int, rng: np.random.Generator) -> tuple[list[int], list[int]]:
    return list(rng.permutation(n)), list(rng.integers(0, m, size=n))


class MUWSet:
    """A list of weighing matrices sharing ``(n, p)`` and a common root order.

    Members with different root orders are re-embedded over the least common
    multiple.  With ``verify=True`` the constructor raises
    :class:`VerificationFailed` unless the members are mutually unbiased.
    """

    def __init__(self, members: Iterable[UnitWeighingMatrix], verify: bool = False):
        members = list(members)
        if members:
            n, p = members[0].n, members[0].p
            for W in members:
                if (W.n, W.p) != (n, p):
                    raise InvalidArgument("set members must share order and weight")
            m = _lcm(W.m for W in members)
            members = [W.embed(m) for W in members]
        self.members: tuple[UnitWeighingMatrix, ...] = tuple(members)
        if verify:
            v = self.verify()
            if not v:
                raise VerificationFailed(v.reason)

    @property
    def n(self) -> int:
        return self.members[0].n

    @property
    def p(self) -> int:
        return self.members[0].p

    @property
    def m(self) -> int:
        return self.members[0].m

    def verify(self) -> Verdict:
        return verify_mutually_unbiased(self.members)

    def embed(self, m: int) -> "MUWSet":
        return MUWSet(W.embed(m) for W in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[UnitWeighingMatrix]:
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, MUWSet) and self.members == other.members

    def __repr__(self) -> str:
        if not self.members:
            return "MUWSet([])"
        return f"MUWSet(size={len(self)}, n={self.n}, p={self.p}, m={self.m})"


def identity(n: int, m: int = 1) -> UnitWeighingMatrix:
    cells = np.full((n, n), ZERO, dtype=np.int64)
    np.fill_diagonal(cells, 0)
    return UnitWeighingMatrix(cells, 1, m)
