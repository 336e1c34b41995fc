"""Exact arithmetic in the ring of cyclotomic integers Z[zeta_m].

Elements are stored in the power basis ``1, zeta, ..., zeta^(phi(m)-1)``
after reduction modulo the m-th cyclotomic polynomial, so two elements are
equal exactly when their coefficient tuples are equal.  Coefficients are
Python ints (arbitrary precision).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import InvalidArgument

#: Largest root order accepted by default.  Searches never need more than 24.
MAX_ROOT_ORDER = 60


def _check_order(m: int) -> None:
    if not isinstance(m, int) or m < 1:
        raise InvalidArgument(f"root order must be a positive integer, got {m!r}")
    if m > MAX_ROOT_ORDER:
        raise InvalidArgument(f"root order {m} exceeds the cap MAX_ROOT_ORDER={MAX_ROOT_ORDER}")


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # both ascending; den monic
    num = list(num)
    dq = len(den) - 1
    q = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i]
        if c:
            q[i - dq] = c
            for j, d in enumerate(den):
                num[i - dq + j] -= c * d
    if any(num[:dq]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def _phi(m: int) -> tuple[int, ...]:
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divexact(num, list(_phi(d)))
    return tuple(num)


def cyclotomic_polynomial(m: int) -> list[int]:
    """Coefficients of Phi_m in ascending degree, e.g. ``[1, 0, 1]`` for m=4."""
    _check_order(m)
    return list(_phi(m))


def totient(m: int) -> int:
    _check_order(m)
    return len(_phi(m)) - 1


@lru_cache(maxsize=None)
def reduction_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds the canonical coefficients of zeta_m^k, for 0 <= k < m."""
    phi = _phi(m)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1) if deg > 0 else []
    for _ in range(m):
        rows.append(tuple(cur))
        # multiply by x, then eliminate x^deg using the monic Phi_m
        shifted = [0] + cur
        top = shifted.pop()
        cur = [c - top * phi[i] for i, c in enumerate(shifted)]
    return tuple(rows)


def _fold(raw: Iterable[int], m: int) -> list[int]:
    hist = [0] * m
    for k, c in enumerate(raw):
        hist[k % m] += c
    return hist


def _from_hist(hist: Sequence[int], m: int) -> tuple[int, ...]:
    table = reduction_table(m)
    deg = len(table[0])
    out = [0] * deg
    for k, c in enumerate(hist):
        if c:
            row = table[k]
            for i in range(deg):
                out[i] += c * row[i]
    return tuple(out)


@dataclass(frozen=True)
class CycInt:
    """An element of Z[zeta_m] in canonical (Phi_m-reduced) form."""

    m: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        _check_order(self.m)
        if len(self.coeffs) != totient(self.m):
            raise InvalidArgument(
                f"expected {totient(self.m)} coefficients for m={self.m}, got {len(self.coeffs)}")

    @classmethod
    def zero(cls, m: int) -> "CycInt":
        return cls(m, (0,) * totient(m))

    @classmethod
    def integer(cls, z: int, m: int) -> "CycInt":
        return cls(m, (z,) + (0,) * (totient(m) - 1))

    @classmethod
    def root(cls, k: int, m: int) -> "CycInt":
        """zeta_m^k."""
        _check_order(m)
        return cls(m, reduction_table(m)[k % m])

    @classmethod
    def from_exponents(cls, exps: Iterable[int], m: int) -> "CycInt":
        """Sum of zeta_m^k over the given exponents."""
        _check_order(m)
        hist = [0] * m
        for k in exps:
            hist[k % m] += 1
        return cls(m, _from_hist(hist, m))

    def __add__(self, other: "CycInt") -> "CycInt":
        return cyc_add(self, other)

    def __neg__(self) -> "CycInt":
        return CycInt(self.m, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "CycInt") -> "CycInt":
        return cyc_add(self, -other)

    def __mul__(self, other: "CycInt") -> "CycInt":
        return cyc_mul(self, other)

    def conjugate(self) -> "CycInt":
        return cyc_conjugate(self)

    def norm_sq(self) -> "CycInt":
        """``self * conj(self)``, i.e. the squared complex modulus."""
        return cyc_mul(self, cyc_conjugate(self))

    def is_integer(self, z: int) -> bool:
        return cyc_equals_integer(self, z)

    def as_integer(self) -> int | None:
        # zeta^0 is the first basis element, so integers have a single nonzero slot
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def to_complex(self) -> complex:
        """Floating-point value; for diagnostics and test oracles only."""
        import cmath
        zeta = cmath.exp(2j * cmath.pi / self.m)
        return sum(c * zeta ** i for i, c in enumerate(self.coeffs))


def cyc_reduce(raw: Sequence[int], m: int) -> CycInt:
    """Canonical form of ``sum(raw[k] * zeta^k)`` for a polynomial of any degree."""
    _check_order(m)
    return CycInt(m, _from_hist(_fold(raw, m), m))


def _same_order(a: CycInt, b: CycInt) -> int:
    if a.m != b.m:
        raise InvalidArgument(f"root orders differ: {a.m} vs {b.m}")
    return a.m


def cyc_add(a: CycInt, b: CycInt) -> CycInt:
    m = _same_order(a, b)
    return CycInt(m, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def cyc_mul(a: CycInt, b: CycInt) -> CycInt:
    m = _same_order(a, b)
    prod = [0] * (len(a.coeffs) + len(b.coeffs))
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                prod[i + j] += x * y
    return cyc_reduce(prod, m)


def cyc_conjugate(a: CycInt) -> CycInt:
    m = a.m
    hist = [0] * m
    for i, c in enumerate(a.coeffs):
        hist[(-i) % m] += c
    return CycInt(m, _from_hist(hist, m))


def cyc_equals_integer(a: CycInt, z: int) -> bool:
    return a.coeffs[0] == z and not any(a.coeffs[1:])


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def embed(a: CycInt, m: int) -> CycInt:
    """Re-express ``a`` in Z[zeta_m]; requires ``a.m`` to divide ``m``."""
    if m % a.m:
        raise InvalidArgument(f"cannot embed Z[zeta_{a.m}] into Z[zeta_{m}]")
    step = m // a.m
    hist = [0] * m
    for i, c in enumerate(a.coeffs):
        hist[(i * step) % m] += c
    return CycInt(m, _from_hist(hist, m))
