import numpy as np
import pytest

from muwm.constructions import (canonical, direct_sum, load_dataset, weight2_canonical,
                                weight3_tight_family)
from muwm.errors import StructureMismatch
from muwm.structure import block_structure, blockwise_unbiased, decompose
from muwm.wmatrix import monomial_transform, random_monomial, verify_unbiased, verify_weighing
from oracles import warshall_blocks

F3 = canonical("UW3_3_BLOCK")


def sizes(W):
    return list(block_structure(W).sizes)


def test_block_structure_examples():
    assert sizes(weight2_canonical(6)) == [2, 2, 2]
    assert sizes(canonical("W7")) == [7]
    W5 = canonical("W5")
    assert sizes(direct_sum(W5, W5)) == [5, 5]


def test_decompose_examples():
    first = load_dataset("UW4_3")[0]
    d = decompose(direct_sum(F3, first.embed(6)))
    assert [b.n for b in d.blocks] == [3, 4]
    W7 = canonical("W7")
    d = decompose(W7)
    assert len(d.blocks) == 1 and d.blocks[0] == W7


def test_decompose_of_permuted_direct_sum():
    W5 = canonical("W5")
    rng = np.random.default_rng(3)
    for _ in range(10):
        S = direct_sum(W5, W5)
        r, c = random_monomial(10, 3, rng), random_monomial(10, 3, rng)
        X = monomial_transform(S, r[0], r[1], c[0], c[1])
        d = decompose(X)
        assert [b.n for b in d.blocks] == [5, 5]
        assert all(b.p == 4 and verify_weighing(b) for b in d.blocks)
        # the permutations expose the direct sum
        P = X.cells[np.ix_(d.row_perm, d.col_perm)]
        assert np.array_equal(P[:5, :5], d.blocks[0].cells)
        assert np.array_equal(P[5:, 5:], d.blocks[1].cells)
        assert np.all(P[:5, 5:] < 0) and np.all(P[5:, :5] < 0)


def _bundled(max_n=8):
    for key in ["UW4_3", "UW5_4", "UW6_4", "W7_4", "W8_4"]:
        for W in load_dataset(key):
            if W.n <= max_n:
                yield W
    for W in weight3_tight_family(7):
        yield W
    for W in weight3_tight_family(8):
        yield W
    yield canonical("W7")
    yield weight2_canonical(8)


def test_matches_warshall_oracle_on_bundled_matrices():
    rng = np.random.default_rng(11)
    count = 0
    for W in _bundled():
        assert sizes(W) == warshall_blocks(W.cells)
        r, c = random_monomial(W.n, W.m, rng), random_monomial(W.n, W.m, rng)
        X = monomial_transform(W, r[0], r[1], c[0], c[1])
        assert sizes(X) == warshall_blocks(X.cells) == sizes(W)
        assert block_structure(X).n == W.n
        count += 1
    assert count > 60


def test_blockwise_examples():
    fam = weight3_tight_family(7)
    for a in range(3):
        for b in range(a + 1, 3):
            v = blockwise_unbiased(fam[a], fam[b])
            assert v and v.detail["aligned"]
            assert verify_unbiased(fam[a], fam[b])


def test_single_blocks_defer_to_global():
    s = load_dataset("W7_4")
    for H, K in [(s[0], s[1]), (s[2], s[2])]:
        assert bool(blockwise_unbiased(H, K)) == bool(verify_unbiased(H, K))


def test_structure_mismatch():
    # weight-3 blocks only come in orders 3 and 4, so the mismatch is shown at weight 4
    s = load_dataset("W8_4")
    split = [W for W in s if sizes(W) == [4, 4]]
    whole = [W for W in s if sizes(W) == [8]]
    assert split and whole
    with pytest.raises(StructureMismatch):
        blockwise_unbiased(split[0], whole[0])


def test_blockwise_agrees_with_global_on_random_pairs():
    rng = np.random.default_rng(99)
    pool = [weight3_tight_family(7), weight3_tight_family(8), load_dataset("UW4_3")]
    agreements = 0
    while agreements < 20:
        s = pool[int(rng.integers(len(pool)))]
        i, j = (int(x) for x in rng.choice(len(s), size=2, replace=rng.random() < 0.2))
        H, K = s[i], s[j]
        # same column permutation keeps alignment; random row phases keep unbiasedness
        c = random_monomial(s.n, s.m, rng)
        r1, r2 = random_monomial(s.n, s.m, rng), random_monomial(s.n, s.m, rng)
        H = monomial_transform(H, r1[0], r1[1], c[0], c[1])
        K = monomial_transform(K, r2[0], r2[1], c[0], c[1])
        if block_structure(H) != block_structure(K):
            continue
        assert bool(blockwise_unbiased(H, K)) == bool(verify_unbiased(H, K))
        agreements += 1
