from itertools import combinations
from math import isqrt

import numpy as np
import pytest

from muwm.constructions import canonical, load_dataset, prime_muhm
from muwm.cyclotomic import CycInt
from muwm.errors import InvalidArgument, VerificationFailed
from muwm.wmatrix import (ZERO, MUWSet, UnitWeighingMatrix, dephase, gram, grid_mul_conj, identity,
                          monomial_transform, product, random_monomial, verify_mutually_unbiased,
                          verify_unbiased, verify_weighing)
from oracles import float_unbiased, float_weighing

F3 = UnitWeighingMatrix.from_rows([[0, 0, 0], [0, 1, 2], [0, 2, 1]], 3, 3)
MATRIX_SETS = ["UW4_3", "UW5_4", "UW6_4", "W7_4", "W8_4"]


def scalar_grid(n, z, m):
    return [[CycInt.integer(z if i == j else 0, m) for j in range(n)] for i in range(n)]


def test_gram_examples():
    assert gram(UnitWeighingMatrix(np.array([[0]]), 1, 1)) == [[CycInt.integer(1, 1)]]
    assert gram(F3) == scalar_grid(3, 3, 3)
    assert gram(canonical("W5")) == scalar_grid(5, 4, 3)


def test_verify_weighing_examples():
    assert verify_weighing(canonical("W7"))
    for n in (1, 4, 9):
        assert verify_weighing(identity(n))


def test_identical_rows_fail_at_that_pair():
    W = canonical("W7")
    cells = W.cells.copy()
    cells[4] = cells[2]
    v = verify_weighing(UnitWeighingMatrix(cells, 4, 2))
    assert not v and v.where == (2, 4)


def test_wrong_counts_reported():
    cells = np.array([[0, 0], [0, ZERO]])
    v = verify_weighing(UnitWeighingMatrix(cells, 2, 2))
    assert not v and v.where == (1, None) or not v


def test_constructor_rejects_bad_input():
    with pytest.raises(InvalidArgument):
        UnitWeighingMatrix(np.array([[0, 1]]), 1, 2)
    with pytest.raises(InvalidArgument):
        UnitWeighingMatrix(np.array([[3]]), 1, 2)
    with pytest.raises(InvalidArgument):
        UnitWeighingMatrix(np.array([[0]]), 2, 2)


def test_verify_unbiased_examples():
    uw43 = load_dataset("UW4_3")
    assert verify_unbiased(uw43[0], uw43[1])
    w74 = load_dataset("W7_4")
    assert verify_unbiased(w74[0], w74[1])
    v = verify_unbiased(w74[0], w74[0])
    assert not v and v.detail["value"].is_integer(16)


def test_verify_unbiased_rejects_mismatch():
    with pytest.raises(InvalidArgument):
        verify_unbiased(F3, canonical("W5"))
    with pytest.raises(InvalidArgument):
        verify_unbiased(F3, F3.embed(6))


@pytest.mark.parametrize("key", MATRIX_SETS)
def test_bundled_sets_are_mutually_unbiased(key):
    s = load_dataset(key)
    assert verify_mutually_unbiased(list(s))
    assert s.verify()


@pytest.mark.parametrize("key", MATRIX_SETS)
def test_bundled_sets_float_oracle(key):
    s = load_dataset(key)
    for W in s:
        assert float_weighing(W.cells, W.p, W.m)
    for A, B in combinations(s, 2):
        assert float_unbiased(A.cells, B.cells, s.p, s.m)


def test_set_examples():
    assert verify_mutually_unbiased([canonical("W5")])
    assert verify_mutually_unbiased([])
    h8 = load_dataset("H8")
    mats = [UnitWeighingMatrix.from_signs(M) for M in h8]
    v = verify_mutually_unbiased(mats)
    # cross products have entries +-4, and |4|^2 = 16 is not 8
    assert not v and v.detail["value"].is_integer(16)


def test_mixed_set_rejected():
    with pytest.raises(InvalidArgument):
        verify_mutually_unbiased([F3, canonical("W5")])


def test_product_of_unbiased_pair_is_scaled_weighing():
    # (H K^*)(H K^*)^* = p^2 I for every bundled pair, computed exactly
    for key in MATRIX_SETS:
        s = load_dataset(key)
        for a, b in [(0, 1), (len(s) - 2, len(s) - 1)]:
            M = product(s[a], s[b])
            assert grid_mul_conj(M, M) == scalar_grid(s.n, s.p ** 2, s.m)


@pytest.mark.parametrize("key", ["W7_4", "W8_4"])
def test_real_unbiased_pairs_have_square_weight(key):
    s = load_dataset(key)
    assert all(W.is_real() for W in s)
    assert isqrt(s.p) ** 2 == s.p


def test_dephase_examples():
    W7 = canonical("W7")
    d = dephase(W7)
    assert dephase(d) == d
    W5 = canonical("W5")
    cells = W5.cells.copy()
    cells[1] = np.where(cells[1] == ZERO, ZERO, (cells[1] + 1) % 3)
    assert dephase(UnitWeighingMatrix(cells, 4, 3)) == W5
    assert dephase(F3) == F3


def _first_nonzero_is_one(cells):
    for line in list(cells) + list(cells.T):
        nz = line[line != ZERO]
        if nz.size and nz[0] != 0:
            return False
    return True


def test_dephase_random_equivalents():
    rng = np.random.default_rng(7)
    for key in MATRIX_SETS:
        for W in load_dataset(key):
            r = random_monomial(W.n, W.m, rng)
            c = random_monomial(W.n, W.m, rng)
            X = monomial_transform(W, r[0], r[1], c[0], c[1])
            D = dephase(X)
            assert _first_nonzero_is_one(D.cells)
            assert verify_weighing(D)
            assert dephase(D) == D


def test_equivalence_invariance_of_unbiasedness():
    """H -> P1 H Q and K -> P2 K Q keeps (un)biasedness, over 120 random trials."""
    rng = np.random.default_rng(2024)
    pool = [load_dataset(k) for k in MATRIX_SETS] + [prime_muhm(5)]
    trials = 0
    for _ in range(20):
        for s in pool:
            i, j = rng.choice(len(s), size=2, replace=False)
            H, K = s[int(i)], s[int(j)]
            if rng.random() < 0.3:
                K = dephase(K)  # still unbiased
            if rng.random() < 0.3:
                K = H  # biased pair
            want = bool(verify_unbiased(H, K))
            P1, P2, Q = (random_monomial(s.n, s.m, rng) for _ in range(3))
            H2 = monomial_transform(H, P1[0], P1[1], Q[0], Q[1])
            K2 = monomial_transform(K, P2[0], P2[1], Q[0], Q[1])
            assert verify_weighing(H2) and verify_weighing(K2)
            assert bool(verify_unbiased(H2, K2)) == want
            trials += 1
    assert trials >= 100


def test_muwset_reembeds_to_lcm():
    s = MUWSet([F3, F3.embed(6)])
    assert s.m == 6
    with pytest.raises(VerificationFailed):
        MUWSet([F3, F3], verify=True)
    with pytest.raises(InvalidArgument):
        MUWSet([F3, canonical("W5")])


def test_signs_roundtrip():
    W = load_dataset("W8_4")[3]
    assert UnitWeighingMatrix.from_signs(W.signs()) == W
    assert np.allclose(W.to_complex(), W.signs())
