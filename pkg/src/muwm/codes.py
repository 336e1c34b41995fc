"""Weakly unbiased Hadamard families obtained from binary codes.

A family is a list of +-1 Hadamard matrices of order n whose pairwise
products ``H_i H_j^T`` only contain 0 and +-c.  Rows map to binary words by
``+1 -> 0`` and ``-1 -> 1``; the families bundled here are exactly the
codewords of a linear code (with an all-zero coordinate prepended), split
into Hadamard blocks.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidArgument, ParseError, Verdict
from .formats import HEX_TAG, hex_to_row, parse_header, serialize_hex_family
from .kernels import pack_pm_rows, pm_gram


@dataclass(frozen=True, eq=False)
class SignMatrixFamily:
    order: int
    matrices: tuple[np.ndarray, ...]
    c: int | None = None

    def __post_init__(self):
        mats = []
        for M in self.matrices:
            M = np.array(M, dtype=np.int8)
            if M.shape != (self.order, self.order):
                raise InvalidArgument(f"member of shape {M.shape} in a family of order {self.order}")
            if not np.all(np.abs(M) == 1):
                raise InvalidArgument("family members must have entries +1/-1 only")
            M.setflags(write=False)
            mats.append(M)
        object.__setattr__(self, "matrices", tuple(mats))

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, i) -> np.ndarray:
        return self.matrices[i]

    def rows(self) -> np.ndarray:
        """All rows of all members stacked, shape (len * order, order)."""
        if not self.matrices:
            return np.empty((0, self.order), dtype=np.int8)
        return np.concatenate(self.matrices, axis=0)

    def with_c(self, c: int) -> "SignMatrixFamily":
        return SignMatrixFamily(self.order, self.matrices, c)


def decode_hex_row(h: str) -> np.ndarray:
    """One hex string to a +-1 row, most significant bit first, bit 1 -> -1."""
    return hex_to_row(h.strip(), 4 * len(h.strip()))


def decode_hex_family(text: str, c: int | None = None) -> SignMatrixFamily:
    """Parse blocks of hex rows separated by blank lines.

    An optional ``HEXFAMILY`` header line fixes ``order``, ``count`` and
    ``c``; an explicit ``c`` argument overrides the header.
    """
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)
             if not ln.strip().startswith("#")]
    header = None
    while lines and not lines[0][1]:
        lines.pop(0)
    if lines and lines[0][1].startswith(HEX_TAG):
        header = parse_header(lines[0][1], HEX_TAG, ("order", "count"), lines[0][0])
        lines.pop(0)
    blocks: list[list[tuple[int, str]]] = [[]]
    for i, ln in lines:
        if ln:
            blocks[-1].append((i, ln))
        elif blocks[-1]:
            blocks.append([])
    blocks = [b for b in blocks if b]
    if not blocks:
        order = header["order"] if header else 0
        if header and header["count"]:
            raise ParseError(f"header announces {header['count']} blocks, found none")
        return SignMatrixFamily(order, (), c if c is not None else (header or {}).get("c"))
    digits = len(blocks[0][0][1])
    order = 4 * digits
    if header and header["order"] != order:
        raise ParseError(f"header order {header['order']} but rows have {digits} hex digits")
    mats = []
    for b in blocks:
        if len(b) != order:
            raise ParseError(f"line {b[0][0]}: block has {len(b)} rows, expected {order}")
        rows = []
        for i, h in b:
            if len(h) != digits:
                raise ParseError(f"line {i}: row {h!r} has {len(h)} hex digits, expected {digits}")
            rows.append(hex_to_row(h, order))
        mats.append(np.stack(rows))
    if header and header["count"] != len(mats):
        raise ParseError(f"header announces {header['count']} blocks, found {len(mats)}")
    if c is None and header:
        c = header.get("c")
    return SignMatrixFamily(order, tuple(mats), c)


def encode_hex_family(family: SignMatrixFamily) -> str:
    return serialize_hex_family(family.matrices, family.c if family.c is not None else 0)


def codewords_to_rows(codewords: Sequence[Sequence[int]]) -> np.ndarray:
    """Prepend a zero coordinate to each word, then map 0 -> +1 and 1 -> -1."""
    words = [list(w) for w in codewords]
    if not words:
        return np.empty((0, 0), dtype=np.int8)
    L = len(words[0])
    if any(len(w) != L for w in words):
        raise InvalidArgument("codewords must all have the same length")
    bits = np.zeros((len(words), L + 1), dtype=np.int8)
    bits[:, 1:] = np.array(words, dtype=np.int8)
    if np.any((bits != 0) & (bits != 1)):
        raise InvalidArgument("codewords must be binary")
    return (1 - 2 * bits).astype(np.int8)


def rows_to_ints(rows: np.ndarray) -> list[int]:
    """+-1 rows as integers, first entry is the most significant bit."""
    out = []
    for r in np.asarray(rows):
        v = 0
        for x in r:
            v = (v << 1) | int(x < 0)
        out.append(v)
    return out


def verify_flat_biangular_family(family: SignMatrixFamily, c: int | None = None) -> Verdict:
    """Members are Hadamard and cross products take only the values 0 and +-c.

    When the family has at least one pair, both 0 and +-c must actually
    occur.  ``where`` is ``(i, j, row, col)``; for a member that is not
    Hadamard it is ``(i, i, row, col)``.
    """
    c = family.c if c is None else c
    if c is None:
        raise InvalidArgument("no value of c given")
    n, k = family.order, len(family)
    if k == 0:
        return Verdict.passed(pairs=0)
    packed = pack_pm_rows(family.rows())
    G = pm_gram(packed, packed, n)
    eye = n * np.eye(n, dtype=np.int64)
    for i in range(k):
        blk = G[i * n:(i + 1) * n, i * n:(i + 1) * n]
        bad = np.argwhere(blk != eye)
        if bad.size:
            r, s = map(int, bad[0])
            return Verdict.failed(f"member {i} is not Hadamard", (i, i, r, s), value=int(blk[r, s]))
    seen_zero = seen_c = False
    for i in range(k):
        for j in range(i + 1, k):
            blk = G[i * n:(i + 1) * n, j * n:(j + 1) * n]
            a = np.abs(blk)
            bad = np.argwhere((a != 0) & (a != c))
            if bad.size:
                r, s = map(int, bad[0])
                return Verdict.failed(f"entry of H{i} H{j}^T is {int(blk[r, s])}, not in {{0, +-{c}}}",
                                      (i, j, r, s), value=int(blk[r, s]))
            seen_zero = seen_zero or bool(np.any(a == 0))
            seen_c = seen_c or bool(np.any(a == c))
    if k > 1 and not (seen_zero and seen_c):
        missing = "0" if not seen_zero else f"+-{c}"
        return Verdict.failed(f"cross products never take the value {missing}")
    return Verdict.passed(pairs=k * (k - 1) // 2)


def weight_distribution(family: SignMatrixFamily) -> dict[int, int]:
    """Number of rows with each count of -1 entries, over all members."""
    rows = family.rows()
    counts = Counter(int(w) for w in (rows < 0).sum(axis=1))
    return dict(sorted(counts.items()))


def _gf2_rank(words: Sequence[int]) -> int:
    basis: dict[int, int] = {}  # leading bit -> basis vector
    for w in words:
        while w:
            top = w.bit_length() - 1
            if top not in basis:
                basis[top] = w
                break
            w ^= basis[top]
    return len(basis)


def check_linearity(family: SignMatrixFamily) -> Verdict:
    """The row set, read as binary words, is closed under XOR and holds 0.

    A finite set containing 0 is closed under XOR exactly when its size is
    2^rank, so the check is a rank computation; a failing pair is located
    only on failure.
    """
    words = set(rows_to_ints(family.rows()))
    if not words:
        return Verdict.failed("empty row set")
    if 0 not in words:
        return Verdict.failed("zero word (all +1 row) missing")
    r = _gf2_rank(sorted(words))
    if len(words) == 1 << r:
        return Verdict.passed(dimension=r, size=len(words))
    ws = sorted(words)
    for a in ws:
        for b in ws:
            if a < b and (a ^ b) not in words:
                return Verdict.failed("row set not closed under XOR", (a, b), dimension=r)
    raise AssertionError("unreachable: size mismatch without a witness")


def identity_extension_check(family) -> Verdict:
    """Can the rows of the identity join the family's lines?

    Works on normalised squared inner products.  Identity rows meet a flat
    row of weight ``w`` with value ``1/w``; the family already uses ``0``
    and ``c^2/n^2`` (sign families) or ``0`` and ``1/p`` (unbiased weighing
    sets).  ``ok`` means the identity extends the line set;
    ``detail['status']`` is ``"extends"`` or ``"breaks"`` and
    ``detail['value']`` is the identity-vs-row value.
    """
    from .wmatrix import MUWSet

    if isinstance(family, MUWSet):
        if len(family) == 0:
            return Verdict.passed(status="extends", value=None, allowed=(Fraction(0),))
        p = family.p
        allowed = (Fraction(0), Fraction(1, p))
        value = Fraction(1, p)
    else:
        if len(family) == 0:
            return Verdict.passed(status="extends", value=None, allowed=(Fraction(0),))
        n = family.order
        if family.c is None:
            raise InvalidArgument("family has no value of c")
        allowed = (Fraction(0), Fraction(family.c ** 2, n * n))
        value = Fraction(1, n)
    if value in allowed:
        return Verdict.passed(status="extends", value=value, allowed=allowed)
    return Verdict(False, f"identity rows give squared inner product {value}, outside {set(map(str, allowed))}",
                   None, {"status": "breaks", "value": value, "allowed": allowed})
