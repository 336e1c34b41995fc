"""Exhaustive search for large mutually unbiased sets over m-th roots.

The search works up to equivalence ``H_k -> P_k H_k Q`` (own row monomial
``P_k`` per member, one shared column monomial ``Q``):

1. every row is dephased (first nonzero entry is 1), so a member is a set
   of rows from the dephased candidate list;
2. the first member is fixed to a representative ``H1`` of its
   equivalence class, which uses up ``Q``;
3. the other members are built from rows whose inner products with every
   row of ``H1`` have squared modulus 0 or p, as sets of n mutually
   orthogonal rows;
4. the largest mutually compatible collection of those members is a
   maximum clique, found by branch and bound.

All pruning is exact: pair classes come from integer cyclotomic arithmetic
in :mod:`muwm.kernels`.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import comb
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .bounds import COMPLEX, REAL, muw_upper_bound
from .constructions import canonical
from .errors import InvalidArgument
from .wmatrix import ZERO, MUWSet, UnitWeighingMatrix, dephase

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 8
ORTHOGONAL = "orthogonal"
UNBIASED = "unbiased"
FLAT = "flat"
SYMMETRY_MODES = ("canonical", "classes", "none")


def zero_patterns(n: int, p: int) -> list[tuple[int, ...]]:
    """Supports of weight-p rows, as sorted column tuples in lexicographic order."""
    return list(combinations(range(n), p))


def dephased_rows(n: int, p: int, m: int) -> np.ndarray:
    """All rows of weight p over m-th roots whose first nonzero is 1.

    Ordered lexicographically by (support, exponent tuple), shape
    ``(C(n, p) * m^(p-1), n)``.
    """
    if not (1 <= p <= n) or m < 1:
        raise InvalidArgument(f"bad parameters n={n}, p={p}, m={m}")
    tails = list(product(range(m), repeat=p - 1))
    tails = np.array(tails, dtype=np.int64).reshape(len(tails), p - 1)
    out = np.full((comb(n, p) * len(tails), n), ZERO, dtype=np.int64)
    r = 0
    for supp in zero_patterns(n, p):
        blk = out[r:r + len(tails)]
        blk[:, supp[0]] = 0
        if p > 1:
            blk[:, list(supp[1:])] = tails
        r += len(tails)
    return out


def _allowed(relation: str, cls: np.ndarray) -> np.ndarray:
    if relation == ORTHOGONAL:
        return cls == kernels.ORTHOGONAL
    if relation == UNBIASED:
        return cls != kernels.OTHER
    if relation == FLAT:
        return cls == kernels.FLAT
    raise InvalidArgument(f"unknown relation {relation!r}")


def candidate_array(n: int, p: int, m: int,
                    partial: Sequence[tuple[Sequence[int], str]] = ()) -> np.ndarray:
    """Dephased rows meeting every ``(row, relation)`` constraint.

    ``relation`` is ``"orthogonal"`` (|<x, r>|^2 = 0), ``"flat"``
    (|<x, r>|^2 = p) or ``"unbiased"`` (either of the two).
    """
    R = dephased_rows(n, p, m)
    if not partial:
        return R
    keep = np.ones(len(R), dtype=bool)
    for row, relation in partial:
        row = np.asarray(row, dtype=np.int64).reshape(1, n)
        keep &= _allowed(relation, kernels.norm_classes(R, row, m, p)[:, 0])
    return R[keep]


def candidate_rows(n: int, p: int, m: int,
                   partial: Sequence[tuple[Sequence[int], str]] = ()) -> Iterator[tuple[int, ...]]:
    for r in candidate_array(n, p, m, partial):
        yield tuple(int(x) for x in r)


# ----------------------------------------------------------------- config

@dataclass(frozen=True)
class SearchConfig:
    n: int
    p: int
    m: int
    max_set_goal: int | None = None
    node_budget: int | None = DEFAULT_BUDGET
    symmetry: str = "canonical"
    jobs: int = 1
    seed: int | None = None

    def __post_init__(self):
        if not (1 <= self.p <= self.n):
            raise InvalidArgument(f"need 1 <= p <= n, got n={self.n}, p={self.p}")
        if self.m < 1:
            raise InvalidArgument(f"root order must be positive, got {self.m}")
        if self.symmetry not in SYMMETRY_MODES:
            raise InvalidArgument(f"symmetry must be one of {SYMMETRY_MODES}")


@dataclass
class SearchResult:
    best_set: MUWSet
    exhaustive: bool
    nodes_visited: int
    wall_time: float
    config: SearchConfig | None = None
    classes: int = 0
    bound: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.best_set)


class _Budget(Exception):
    pass


class _Goal(Exception):
    pass


class _Counter:
    def __init__(self, budget: int | None):
        self.budget = budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _Budget


# ----------------------------------------------------------------- cliques

def _masks(adj: np.ndarray) -> list[int]:
    """Boolean adjacency matrix to per-vertex Python-int bitsets."""
    out = []
    for row in adj:
        idx = np.flatnonzero(row)
        v = 0
        for j in idx.tolist():
            v |= 1 << j
        out.append(v)
    return out


def _cliques_of_size(adj: list[int], k: int, counter: _Counter) -> list[tuple[int, ...]]:
    """All k-cliques as increasing tuples, in lexicographic order."""
    found: list[tuple[int, ...]] = []
    cur: list[int] = []

    def rec(cand: int):
        counter.tick()
        if len(cur) == k:
            found.append(tuple(cur))
            return
        need = k - len(cur)
        while cand and cand.bit_count() >= need:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            cur.append(v)
            rec(cand & adj[v])
            cur.pop()

    rec((1 << len(adj)) - 1 if adj else 0)
    return found


def max_clique(adj: list[int], counter: _Counter, target: int | None = None) -> list[int]:
    """Maximum clique by branch and bound with greedy-colouring bounds.

    The first maximum clique in the search order is returned, so the answer
    is deterministic.  Stops early once a clique of size ``target`` exists.
    """
    best: list[int] = []
    cur: list[int] = []

    def colour(P: int) -> tuple[list[int], list[int]]:
        order, bounds = [], []
        k = 0
        U = P
        while U:
            k += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~adj[v] & ~low
                U &= ~low
                order.append(v)
                bounds.append(k)
        return order, bounds

    def expand(P: int):
        nonlocal best
        counter.tick()
        order, bounds = colour(P)
        for idx in range(len(order) - 1, -1, -1):
            if len(cur) + bounds[idx] <= len(best):
                return
            v = order[idx]
            cur.append(v)
            NP = P & adj[v]
            if NP:
                expand(NP)
            elif len(cur) > len(best):
                best = list(cur)
                if target is not None and len(best) >= target:
                    raise _Goal
            cur.pop()
            P &= ~(1 << v)

    if adj:
        try:
            expand((1 << len(adj)) - 1)
        except _Goal:
            pass
    return sorted(best)


# ----------------------------------------------------------------- members

def _orth_masks(rows: np.ndarray, m: int, p: int) -> list[int]:
    cls = kernels.norm_classes(rows, rows, m, p)
    return _masks(cls == kernels.ORTHOGONAL)


def _matrices_from(rows: np.ndarray, n: int, m: int, p: int, counter: _Counter,
                   normalized_only: bool = False) -> list[tuple[int, ...]]:
    """Sets of n mutually orthogonal rows (indices into ``rows``)."""
    if len(rows) < n:
        return []
    mats = _cliques_of_size(_orth_masks(rows, m, p), n, counter)
    if normalized_only:
        mats = [t for t in mats if _is_normalized(rows[list(t)], m)]
    return mats


def _sorted_rows(cells: np.ndarray) -> np.ndarray:
    return cells[np.lexsort(cells.T[::-1])]


def _redephase_rows(cells: np.ndarray, m: int) -> np.ndarray:
    out = cells.copy()
    for i in range(out.shape[0]):
        nz = np.flatnonzero(out[i] != ZERO)
        if nz.size:
            shift = out[i, nz[0]]
            out[i, nz] = (out[i, nz] - shift) % m
    return out


def normalize_columns(cells: np.ndarray, m: int) -> np.ndarray:
    """Use column phases to fix one entry per column, depending only on the row set.

    Rows must be dephased.  For each column j, left to right, look at the
    rows nonzero in j whose support is lexicographically smallest; if none
    of them has exponent 0 in column j, the column is rotated so the
    smallest such row gets 0, and rows starting at j are re-dephased (that
    only touches columns to the right).  The result is equivalent to the
    input, and inputs already meeting the condition are returned unchanged.
    """
    out = cells.copy()
    supports = [tuple(np.flatnonzero(r != ZERO).tolist()) for r in out]
    for j in range(out.shape[1]):
        rows = [i for i in range(out.shape[0]) if out[i, j] != ZERO]
        if not rows:
            continue
        smallest = min(supports[i] for i in rows)
        tied = [i for i in rows if supports[i] == smallest]
        if any(out[i, j] == 0 for i in tied):
            continue
        pick = min(tied, key=lambda i: tuple(out[i].tolist()))
        shift = out[pick, j]
        col = out[:, j]
        out[col != ZERO, j] = (col[col != ZERO] - shift) % m
        starters = [i for i in rows if supports[i][0] == j]
        out[starters] = _redephase_rows(out[starters], m)
    return out


def _is_normalized(cells: np.ndarray, m: int) -> bool:
    return bool(np.array_equal(normalize_columns(cells, m), cells))


def _as_matrix(cells: np.ndarray, p: int, m: int) -> UnitWeighingMatrix:
    # members are row sets; rows are stored in lexicographic order for stable bytes
    return UnitWeighingMatrix(_sorted_rows(cells), p, m)


def _canonical_first(n: int, p: int, m: int) -> UnitWeighingMatrix | None:
    """A representative of the unique equivalence class, when one is known."""
    known = {(5, 4): ("W5", 3), (7, 4): ("W7", 2), (4, 3): ("UW4_3_BLOCK", 2),
             (3, 3): ("UW3_3_BLOCK", 3), (2, 2): ("H2", 2)}
    if (n, p) not in known:
        return None
    name, root = known[(n, p)]
    if m % root:
        return None
    return dephase(canonical(name).embed(m))


def _class_key(cells: np.ndarray, m: int) -> bytes:
    """An equivalent matrix, minimised over column permutations.

    Equal keys imply equivalent matrices, so merging by key never loses a
    class (it may keep some duplicates).
    """
    best = None
    for perm in permutations(range(cells.shape[1])):
        c = normalize_columns(_redephase_rows(cells[:, list(perm)], m), m)
        k = _sorted_rows(c).tobytes()
        if best is None or k < best:
            best = k
    return best


def first_member_classes(n: int, p: int, m: int, counter: _Counter | None = None,
                         max_perm_order: int = 6) -> list[UnitWeighingMatrix]:
    """UW(n, p) over m-th roots covering every equivalence class at least once.

    Only column-normalised row sets are kept; for n up to
    ``max_perm_order`` column permutations are merged as well.
    """
    counter = counter or _Counter(None)
    R = dephased_rows(n, p, m)
    mats = _matrices_from(R, n, m, p, counter, normalized_only=True)
    out, seen = [], set()
    for t in mats:
        cells = R[list(t)]
        if n <= max_perm_order:
            key = _class_key(cells, m)
            if key in seen:
                continue
            seen.add(key)
        out.append(_as_matrix(cells, p, m))
    return out


# ----------------------------------------------------------------- search

def _bound_for(cfg: SearchConfig) -> int:
    rep = muw_upper_bound(cfg.n, cfg.p, COMPLEX)
    bound = rep.effective
    if cfg.m <= 2:
        bound = min(bound, muw_upper_bound(cfg.n, cfg.p, REAL).effective)
    return bound


def _extend(H1: UnitWeighingMatrix, cfg: SearchConfig, target: int, budget: int | None):
    """Largest set containing H1 (with exhausted flag and node count)."""
    n, p, m = cfg.n, cfg.p, cfg.m
    counter = _Counter(budget)
    R = dephased_rows(n, p, m)
    try:
        ok = np.ones(len(R), dtype=bool)
        cls = kernels.norm_classes(R, H1.cells, m, p)
        ok &= np.all(cls != kernels.OTHER, axis=1)
        U = R[ok]
        log.debug("rows compatible with first member: %d", len(U))
        mats = _matrices_from(U, n, m, p, counter)
        # with p = 1 the rows of H1 are compatible with themselves
        own = _sorted_rows(H1.cells).tobytes()
        mats = [t for t in mats if _sorted_rows(U[list(t)]).tobytes() != own]
        log.debug("candidate members: %d", len(mats))
        best = _best_clique(U, mats, m, p, counter, target - 1)
        members = [H1] + [_as_matrix(U[list(mats[i])], p, m) for i in best]
        return members, True, counter.nodes
    except _Budget:
        return [H1], False, counter.nodes


def _best_clique(U: np.ndarray, mats: list[tuple[int, ...]], m: int, p: int,
                 counter: _Counter, target: int | None) -> list[int]:
    if not mats:
        return []
    ok = kernels.norm_classes(U, U, m, p) != kernels.OTHER
    A = np.array(mats, dtype=np.int64)
    # compatible[a, r]: row r is unbiased with every row of member a
    compatible = np.ones((len(mats), len(U)), dtype=bool)
    for k in range(A.shape[1]):
        compatible &= ok[A[:, k]]
    adj = np.ones((len(mats), len(mats)), dtype=bool)
    for k in range(A.shape[1]):
        adj &= compatible[:, A[:, k]]
    np.fill_diagonal(adj, False)
    return max_clique(_masks(adj), counter, target)


def _search_unfixed(cfg: SearchConfig, target: int, budget: int | None):
    n, p, m = cfg.n, cfg.p, cfg.m
    counter = _Counter(budget)
    R = dephased_rows(n, p, m)
    try:
        mats = _matrices_from(R, n, m, p, counter)
        best = _best_clique(R, mats, m, p, counter, target)
        return [_as_matrix(R[list(mats[i])], p, m) for i in best], True, counter.nodes
    except _Budget:
        return [], False, counter.nodes


def _run_class(args):
    H1, cfg, target, budget = args
    return _extend(H1, cfg, target, budget)


def search_max_muw(cfg: SearchConfig) -> SearchResult:
    """Largest mutually unbiased set of UW(n, p) over m-th roots found.

    ``exhaustive`` is True when no node budget cut the search short; the
    set size is then the maximum over the chosen symmetry reduction.  The
    budget applies to each first-member class separately, so sequential
    and parallel runs return identical results.
    """
    t0 = time.perf_counter()
    bound = _bound_for(cfg)
    target = bound if cfg.max_set_goal is None else min(bound, cfg.max_set_goal)
    notes = []

    if cfg.symmetry == "none":
        members, exhaustive, nodes = _search_unfixed(cfg, target, cfg.node_budget)
        if len(members) >= target and target < bound:
            exhaustive = False
        return SearchResult(MUWSet(members), exhaustive, nodes, time.perf_counter() - t0,
                            cfg, 0, bound, notes)

    firsts = None
    nodes = 0
    if cfg.symmetry == "canonical":
        H1 = _canonical_first(cfg.n, cfg.p, cfg.m)
        if H1 is not None:
            firsts = [H1]
            notes.append("first member fixed to the known unique class")
    if firsts is None:
        counter = _Counter(cfg.node_budget)
        try:
            firsts = first_member_classes(cfg.n, cfg.p, cfg.m, counter)
        except _Budget:
            return SearchResult(MUWSet([]), False, counter.nodes, time.perf_counter() - t0,
                                cfg, 0, bound, ["budget exhausted while enumerating first members"])
        nodes += counter.nodes
    log.info("first-member classes: %d", len(firsts))

    order = list(range(len(firsts)))
    if cfg.seed is not None:
        # seed only changes the visiting order; the merge below is order-free
        np.random.default_rng(cfg.seed).shuffle(order)

    results: dict[int, tuple] = {}
    tasks = [(firsts[i], cfg, target, cfg.node_budget) for i in order]
    if cfg.jobs > 1 and len(firsts) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            for i, res in zip(order, ex.map(_run_class, tasks)):
                results[i] = res
    else:
        for i, task in zip(order, tasks):
            results[i] = _run_class(task)
            if results[i][1] and len(results[i][0]) >= target:
                break

    exhaustive = all(r[1] for r in results.values())
    nodes += sum(r[2] for r in results.values())
    target_hit = [i for i, r in results.items() if r[1] and len(r[0]) >= target]
    if target_hit:
        best_i = min(target_hit)
        # a set at the bound is optimal whatever was skipped; a lower goal proves nothing
        exhaustive = target == bound
    else:
        best_i = min(results, key=lambda i: (-len(results[i][0]), i)) if results else None
    members = results[best_i][0] if best_i is not None else []
    return SearchResult(MUWSet(members), exhaustive, nodes, time.perf_counter() - t0,
                        cfg, len(firsts), bound, notes)
