import numpy as np
import pytest

from muwm.bounds import muw_upper_bound
from muwm.constructions import canonical
from muwm.formats import serialize_matrices
from muwm.search import (FLAT, ORTHOGONAL, UNBIASED, SearchConfig, candidate_rows, first_member_classes,
                         normalize_columns, search_max_muw, zero_patterns)
from muwm.wmatrix import verify_mutually_unbiased
from oracles import as_complex, float_unbiased, float_weighing, naive_max_muw

# computed once with oracles.naive_max_muw (brute force + networkx), then frozen
NAIVE = {}
for _m in (1, 2, 3, 4):
    NAIVE[(1, 1, _m)] = NAIVE[(2, 1, _m)] = NAIVE[(3, 1, _m)] = 1
    NAIVE[(3, 2, _m)] = 0
NAIVE.update({(2, 2, 1): 0, (2, 2, 2): 1, (2, 2, 3): 0, (2, 2, 4): 2,
              (3, 3, 1): 0, (3, 3, 2): 0, (3, 3, 3): 3, (3, 3, 4): 0})


def run(n, p, m, **kw):
    return search_max_muw(SearchConfig(n, p, m, **kw))


def test_zero_patterns():
    assert len(zero_patterns(7, 4)) == 35
    assert len(zero_patterns(5, 4)) == 5


def test_candidate_rows_small():
    assert list(candidate_rows(2, 2, 4, [((0, 0), ORTHOGONAL)])) == [(0, 2)]
    rows = list(candidate_rows(2, 2, 4))
    assert len(rows) == 4 and rows == sorted(rows)


def test_candidates_against_w5_are_sixth_roots():
    W5 = canonical("W5").embed(12)
    partial = [(tuple(int(x) for x in r), UNBIASED) for r in W5.cells]
    partial[0] = (partial[0][0], ORTHOGONAL)
    rows = list(candidate_rows(5, 4, 12, partial))
    assert rows
    for r in rows:
        assert all(x == -1 or x % 2 == 0 for x in r)  # even exponents of zeta_12 are 6th roots
    # every survivor has the demanded relations, checked in floating point
    W = as_complex(W5.cells, 12)
    for r in rows:
        x = as_complex(np.array(r), 12)
        assert abs(np.vdot(W[0], x)) < 1e-9
        assert float_unbiased(np.array([r]), W5.cells[1:], 4, 12)


def test_candidate_rows_are_exact_and_duplicate_free():
    rows = list(candidate_rows(4, 3, 6, [((0, 0, 0, -1), FLAT)]))
    assert len(rows) == len(set(rows))
    base = as_complex(np.array([0, 0, 0, -1]), 6)
    for r in rows:
        assert abs(abs(np.vdot(base, as_complex(np.array(r), 6))) ** 2 - 3) < 1e-9


@pytest.mark.parametrize("n,p,m,size", [(2, 2, 4, 2), (3, 3, 3, 3), (4, 3, 6, 9), (3, 2, 3, 0), (3, 2, 6, 0)])
def test_search_examples(n, p, m, size):
    r = run(n, p, m)
    assert r.size == size and r.exhaustive
    assert verify_mutually_unbiased(list(r.best_set))
    assert r.size <= muw_upper_bound(n, p).effective


@pytest.mark.parametrize("cfg", sorted(NAIVE))
def test_matches_naive_oracle(cfg):
    want = NAIVE[cfg]
    for mode in ("canonical", "classes", "none"):
        r = run(*cfg, symmetry=mode)
        assert r.size == want, (cfg, mode)
        for W in r.best_set:
            assert float_weighing(W.cells, W.p, W.m)


def test_naive_oracle_recomputed_for_small_cases():
    for cfg in [(2, 2, 4), (2, 2, 2), (3, 3, 3), (3, 2, 2)]:
        assert naive_max_muw(*cfg) == NAIVE[cfg]


@pytest.mark.parametrize("cfg", [(2, 2, 4), (3, 3, 3)])
def test_symmetry_reduction_is_sound(cfg):
    sizes = {mode: run(*cfg, symmetry=mode).size for mode in ("canonical", "classes", "none")}
    assert len(set(sizes.values())) == 1


def test_deterministic_output():
    a, b = run(4, 3, 6), run(4, 3, 6)
    assert serialize_matrices(a.best_set) == serialize_matrices(b.best_set)


def test_parallel_matches_sequential():
    a = run(4, 4, 4, symmetry="classes")
    b = run(4, 4, 4, symmetry="classes", jobs=2)
    assert serialize_matrices(a.best_set) == serialize_matrices(b.best_set)
    assert a.size == b.size == 4


def test_seed_changes_order_not_answer():
    a = run(3, 3, 3, symmetry="classes", seed=1)
    b = run(3, 3, 3, symmetry="classes", seed=2)
    assert a.size == b.size == 3


def test_budget_cutoff_is_not_exhaustive():
    r = run(4, 3, 6, node_budget=5)
    assert not r.exhaustive
    assert verify_mutually_unbiased(list(r.best_set))


def test_goal_below_bound_is_not_exhaustive():
    r = run(4, 3, 6, max_set_goal=3)
    assert r.size >= 3 and not r.exhaustive


def test_first_member_classes_are_normalized_representatives():
    reps = first_member_classes(3, 3, 3)
    assert reps
    for W in reps:
        assert np.array_equal(normalize_columns(W.cells, W.m), W.cells)


def test_bad_config():
    from muwm.errors import InvalidArgument
    with pytest.raises(InvalidArgument):
        SearchConfig(3, 4, 2)
    with pytest.raises(InvalidArgument):
        SearchConfig(3, 3, 0)
    with pytest.raises(InvalidArgument):
        SearchConfig(3, 3, 3, symmetry="weird")


@pytest.mark.slow
def test_extended_targets():
    r = run(5, 4, 6)
    assert r.size == 5 and r.exhaustive
    r = run(7, 4, 2)
    assert r.size == 8 and r.exhaustive
