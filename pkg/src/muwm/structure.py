"""Block structure of weighing matrices.

Two rows are linked when they share a column in which both are nonzero;
the connected components of this row graph, together with the columns they
touch, are the indecomposable blocks.  The graph is the support product
``|W| |W|^T`` computed with integer bitsets.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureMismatch, Verdict
from .wmatrix import UnitWeighingMatrix, verify_unbiased, verify_weighing


@dataclass(frozen=True)
class BlockStructure:
    sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(sorted(self.sizes)))

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def __iter__(self):
        return iter(self.sizes)

    def __len__(self):
        return len(self.sizes)


@dataclass(frozen=True)
class Decomposition:
    """Blocks of ``W`` plus the permutations that expose them.

    ``W.cells[np.ix_(row_perm, col_perm)]`` is block diagonal with the
    blocks in the listed order.
    """

    blocks: tuple[UnitWeighingMatrix, ...]
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    row_sets: tuple[tuple[int, ...], ...]
    col_sets: tuple[tuple[int, ...], ...]

    @property
    def structure(self) -> BlockStructure:
        return BlockStructure(tuple(b.n for b in self.blocks))


def _row_masks(support: np.ndarray) -> list[int]:
    n = support.shape[0]
    col_masks = [0] * support.shape[1]
    for i in range(n):
        for j in np.flatnonzero(support[i]):
            col_masks[j] |= 1 << i
    # neighbours of row i: OR of the row sets of its columns
    out = []
    for i in range(n):
        m = 0
        for j in np.flatnonzero(support[i]):
            m |= col_masks[j]
        out.append(m)
    return out


def _components(support: np.ndarray) -> list[list[int]]:
    nbr = _row_masks(support)
    n = len(nbr)
    seen = 0
    comps = []
    for s in range(n):
        if seen >> s & 1:
            continue
        comp = 1 << s
        frontier = comp
        while frontier:
            grow = 0
            f = frontier
            while f:
                low = f & -f
                grow |= nbr[low.bit_length() - 1]
                f ^= low
            frontier = grow & ~comp
            comp |= grow
        seen |= comp
        comps.append([i for i in range(n) if comp >> i & 1])
    return comps


def block_structure(W: UnitWeighingMatrix) -> BlockStructure:
    return BlockStructure(tuple(len(c) for c in _components(W.support)))


def decompose(W: UnitWeighingMatrix) -> Decomposition:
    """Split ``W`` into indecomposable blocks, smallest first (ties by first row)."""
    support = W.support
    comps = sorted(_components(support), key=lambda c: (len(c), c[0]))
    blocks, row_sets, col_sets = [], [], []
    for rows in comps:
        cols = sorted(set(np.flatnonzero(support[rows].any(axis=0)).tolist()))
        row_sets.append(tuple(rows))
        col_sets.append(tuple(cols))
        blocks.append(UnitWeighingMatrix(W.cells[np.ix_(rows, cols)], W.p, W.m))
    row_perm = tuple(i for r in row_sets for i in r)
    col_perm = tuple(j for c in col_sets for j in c)
    return Decomposition(tuple(blocks), row_perm, col_perm, tuple(row_sets), tuple(col_sets))


def blockwise_unbiased(H: UnitWeighingMatrix, K: UnitWeighingMatrix) -> Verdict:
    """Unbiasedness of ``H`` and ``K`` checked block by block.

    Raises :class:`StructureMismatch` when the block size lists differ.  When
    both matrices split the columns into the same sets, blocks are paired by
    column set and each pair is checked on its own; rows from blocks with
    different column sets have disjoint supports and give zero products.
    Otherwise no blockwise alignment exists and the global check is used
    (``detail['aligned']`` is then False).
    """
    for name, W in (("H", H), ("K", K)):
        v = verify_weighing(W)
        if not v:
            return Verdict.failed(f"{name} is not a weighing matrix: {v.reason}", v.where)
    dh, dk = decompose(H), decompose(K)
    if dh.structure != dk.structure:
        raise StructureMismatch(
            f"block structures differ: {list(dh.structure.sizes)} vs {list(dk.structure.sizes)}")
    k_by_cols = {cols: idx for idx, cols in enumerate(dk.col_sets)}
    if set(k_by_cols) != set(dh.col_sets):
        v = verify_unbiased(H, K)
        return Verdict(v.ok, v.reason, v.where, {**v.detail, "aligned": False})
    for a, cols in enumerate(dh.col_sets):
        b = k_by_cols[cols]
        v = verify_unbiased(dh.blocks[a], dk.blocks[b])
        if not v:
            i, j = v.where
            return Verdict.failed(f"block {a} of H vs block {b} of K: {v.reason}",
                                  (dh.row_sets[a][i], dk.row_sets[b][j]), aligned=True)
    return Verdict.passed(aligned=True)
