import hashlib

import numpy as np
import pytest

from muwm import constructions as C
from muwm.codes import SignMatrixFamily
from muwm.errors import InvalidArgument, ParseError, Unsupported
from muwm.structure import block_structure
from muwm.wmatrix import MUWSet, UnitWeighingMatrix, verify_mutually_unbiased, verify_unbiased, verify_weighing
from oracles import float_unbiased, float_weighing


def sizes(W):
    return list(block_structure(W).sizes)


def test_canonical_matrices():
    expected = {"W5": (5, 4, 3), "W7": (7, 4, 2), "UW3_3_BLOCK": (3, 3, 3), "UW4_3_BLOCK": (4, 3, 2),
                "H2": (2, 2, 2)}
    for name, (n, p, m) in expected.items():
        W = C.canonical(name)
        assert (W.n, W.p, W.m) == (n, p, m)
        assert verify_weighing(W) and float_weighing(W.cells, p, m)
    assert C.canonical("W7").is_real() and sizes(C.canonical("W7")) == [7]
    assert C.canonical("UW4_3_BLOCK").is_real()
    with pytest.raises(InvalidArgument):
        C.canonical("W9")


def test_direct_sum_examples():
    W5, W7 = C.canonical("W5"), C.canonical("W7")
    S = C.direct_sum(W5, W5)
    assert (S.n, S.p) == (10, 4) and verify_weighing(S)
    F3 = C.canonical("UW3_3_BLOCK")
    assert sizes(C.direct_sum(F3, F3)) == [3, 3]
    T = C.direct_sum(W5, W7)
    assert (T.n, T.p, T.m) == (12, 4, 6) and verify_weighing(T)
    with pytest.raises(InvalidArgument):
        C.direct_sum(W5, F3)


def test_direct_sum_sets_examples():
    uw43, f3 = C.load_dataset("UW4_3"), C.prime_muhm(3)
    s = C.direct_sum_sets([uw43, f3])
    assert len(s) == 3 and s.n == 7 and verify_mutually_unbiased(list(s))
    s = C.direct_sum_sets([uw43, uw43])
    assert len(s) == 9 and s.n == 8 and s.verify()
    W5 = MUWSet([C.canonical("W5")])
    assert len(C.direct_sum_sets([W5, W5])) == 1
    with pytest.raises(InvalidArgument):
        C.direct_sum_sets([])
    with pytest.raises(InvalidArgument):
        C.direct_sum_sets([uw43, W5])


@pytest.mark.parametrize("q", [2, 3, 5, 7, 11])
def test_prime_muhm(q):
    s = C.prime_muhm(q)
    assert len(s) == q and s.n == q and s.p == q
    assert s.m == (4 if q == 2 else q)
    for a in range(q):
        for b in range(a + 1, q):
            assert float_unbiased(s[a].cells, s[b].cells, q, s.m)


def test_prime_muhm_rejects_composites():
    for q in (1, 4, 9, 15):
        with pytest.raises(InvalidArgument):
            C.prime_muhm(q)


def test_row_quadratic_phases_are_not_unbiased():
    # zeta^(t j^2 + j k) differs from the Fourier matrix by row phases only
    q = 5
    j = np.arange(q)[:, None]
    k = np.arange(q)[None, :]
    A = UnitWeighingMatrix((0 * j * j + j * k) % q, q, q)
    B = UnitWeighingMatrix((1 * j * j + j * k) % q, q, q)
    assert not verify_unbiased(A, B)


def test_weight3_family():
    s8 = C.weight3_tight_family(8)
    assert len(s8) == 9 and s8.verify()
    assert all(sizes(W) == [4, 4] for W in s8)
    s7 = C.weight3_tight_family(7)
    assert len(s7) == 3 and s7.verify()
    assert all(sizes(W) == [3, 4] for W in s7)
    for n in (1, 2, 5):
        with pytest.raises(Unsupported):
            C.weight3_tight_family(n)


@pytest.mark.parametrize("n", [3, 4, 6, 7, 8, 9, 10, 11, 12, 13])
def test_weight3_block_sizes(n):
    s = C.weight3_tight_family(n)
    assert len(s) == (9 if n % 4 == 0 else 3)
    for W in s:
        bs = sizes(W)
        assert set(bs) <= {3, 4} and sum(bs) == n
        if n % 4 == 0:
            assert 3 not in bs


def test_weight3_decomposition_prefers_fours():
    assert C.weight3_decomposition(7) == (1, 1)
    assert C.weight3_decomposition(12) == (0, 3)
    assert C.weight3_decomposition(10) == (2, 1)


def test_weight2():
    assert sizes(C.weight2_canonical(6)) == [2, 2, 2]
    s = C.weight2_pair(6)
    assert len(s) == 2 and s.verify()
    with pytest.raises(Unsupported):
        C.weight2_pair(5)


def test_load_dataset_examples():
    s = C.load_dataset("UW5_4")
    assert len(s) == 5 and verify_mutually_unbiased(list(s))
    s = C.load_dataset("W8_4")
    assert len(s) == 14 and all(W.is_real() for W in s)
    h = C.load_dataset("H32")
    assert isinstance(h, SignMatrixFamily) and len(h) == 32 and h.order == 32
    with pytest.raises(InvalidArgument):
        C.load_dataset("nope")


def test_dataset_sizes():
    want = {"UW4_3": 9, "UW5_4": 5, "UW6_4": 20, "W7_4": 8, "W8_4": 14, "H8": 8, "H32": 32}
    assert {k: len(C.load_dataset(k)) for k in C.DATASETS} == want


def test_checksums_match_manifest():
    d = C.data_dir()
    lines = (d / C.MANIFEST).read_text().split("\n")
    listed = dict(reversed(ln.split()) for ln in lines if ln.strip())
    assert set(listed) == set(C.DATASETS.values())
    for name, digest in listed.items():
        assert hashlib.sha256((d / name).read_bytes()).hexdigest() == digest


def test_tampered_dataset_rejected(tmp_path, monkeypatch):
    src = C.data_dir()
    for f in src.iterdir():
        (tmp_path / f.name).write_bytes(f.read_bytes())
    target = tmp_path / C.DATASETS["W7_4"]
    target.write_text(target.read_text().replace("1", "0", 1))
    monkeypatch.setenv("MUWM_DATA_DIR", str(tmp_path))
    with pytest.raises(ParseError):
        C.read_dataset_text("W7_4")
    assert C.read_dataset_text("W7_4", check=False)
