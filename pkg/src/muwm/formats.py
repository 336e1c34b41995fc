"""Plain-text file formats.

Matrix file: one or more records separated by blank lines::

    UWMATRIX n=4 p=3 m=6
    0 0 0 .
    0 3 . 0
    0 . 3 3
    . 0 3 0

``.`` is a zero entry and an integer ``k`` in ``[0, m)`` is zeta_m^k.
Lines starting with ``#`` are comments.

Hex family file: a header followed by blocks separated by blank lines, each
block holding ``order`` rows of ``order/4`` hex digits (bit 1 is -1, most
significant bit first)::

    HEXFAMILY order=8 count=8 c=4
    00
    2D
    ...
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import InvalidArgument, ParseError
from .wmatrix import ZERO, UnitWeighingMatrix

MATRIX_TAG = "UWMATRIX"
HEX_TAG = "HEXFAMILY"


def parse_header(line: str, tag: str, keys: Iterable[str], lineno: int = 1) -> dict[str, int]:
    parts = line.split()
    if not parts or parts[0] != tag:
        raise ParseError(f"line {lineno}: expected header starting with {tag!r}")
    fields: dict[str, int] = {}
    for tok in parts[1:]:
        k, sep, v = tok.partition("=")
        if not sep:
            raise ParseError(f"line {lineno}: malformed header field {tok!r}")
        try:
            fields[k] = int(v)
        except ValueError:
            raise ParseError(f"line {lineno}: header field {k} is not an integer") from None
    missing = [k for k in keys if k not in fields]
    if missing:
        raise ParseError(f"line {lineno}: header is missing {', '.join(missing)}")
    return fields


def _records(text: str) -> list[list[tuple[int, str]]]:
    blocks: list[list[tuple[int, str]]] = []
    cur: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if cur:
                blocks.append(cur)
                cur = []
            continue
        cur.append((lineno, line))
    if cur:
        blocks.append(cur)
    return blocks


def _parse_record(block: list[tuple[int, str]]) -> UnitWeighingMatrix:
    lineno, head = block[0]
    h = parse_header(head, MATRIX_TAG, ("n", "p", "m"), lineno)
    n, p, m = h["n"], h["p"], h["m"]
    body = block[1:]
    if len(body) != n:
        raise ParseError(f"line {lineno}: expected {n} rows, found {len(body)}")
    grid = []
    for ln, line in body:
        toks = line.split()
        if len(toks) != n:
            raise ParseError(f"line {ln}: expected {n} entries, found {len(toks)}")
        row = []
        for t in toks:
            if t == ".":
                row.append(ZERO)
                continue
            try:
                k = int(t)
            except ValueError:
                raise ParseError(f"line {ln}: bad entry {t!r}") from None
            if not 0 <= k < m:
                raise ParseError(f"line {ln}: exponent {k} outside [0, {m})")
            row.append(k)
        grid.append(row)
    try:
        return UnitWeighingMatrix(np.array(grid, dtype=np.int64), p, m)
    except InvalidArgument as exc:
        raise ParseError(f"line {lineno}: {exc}") from None


def parse_matrix_records(text: str) -> list[UnitWeighingMatrix]:
    return [_parse_record(b) for b in _records(text)]


def parse_matrix_file(text: str) -> UnitWeighingMatrix:
    recs = parse_matrix_records(text)
    if len(recs) != 1:
        raise ParseError(f"expected exactly one matrix, found {len(recs)}")
    return recs[0]


def serialize_matrix(W: UnitWeighingMatrix) -> str:
    lines = [f"{MATRIX_TAG} n={W.n} p={W.p} m={W.m}"]
    for r in W.cells:
        lines.append(" ".join("." if x == ZERO else str(int(x)) for x in r))
    return "\n".join(lines) + "\n"


def serialize_matrices(mats: Iterable[UnitWeighingMatrix]) -> str:
    return "\n".join(serialize_matrix(W) for W in mats)


def rows_to_hex(rows: np.ndarray) -> list[str]:
    """Encode +-1 rows as hex strings, -1 -> bit 1, most significant bit first."""
    rows = np.asarray(rows)
    n = rows.shape[1]
    if n % 4:
        raise InvalidArgument("row length must be a multiple of 4 for hex encoding")
    out = []
    for r in rows:
        v = 0
        for x in r:
            v = (v << 1) | int(x < 0)
        out.append(format(v, f"0{n // 4}X"))
    return out


def hex_to_row(h: str, n: int) -> np.ndarray:
    if len(h) * 4 != n:
        raise ParseError(f"hex row {h!r} does not encode {n} entries")
    try:
        v = int(h, 16)
    except ValueError:
        raise ParseError(f"malformed hex row {h!r}") from None
    bits = (v >> np.arange(n - 1, -1, -1)) & 1
    return np.where(bits == 1, -1, 1).astype(np.int8)


def serialize_hex_family(matrices: Iterable[np.ndarray], c: int) -> str:
    mats = [np.asarray(M) for M in matrices]
    order = mats[0].shape[0] if mats else 0
    blocks = ["\n".join(rows_to_hex(M)) + "\n" for M in mats]
    return f"{HEX_TAG} order={order} count={len(mats)} c={c}\n" + "\n".join(blocks)
