import numpy as np
import pytest

from c4lab import linalg


def random_mats(p, count=60, seed=7):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        m = rng.integers(1, 6)
        n = rng.integers(1, 6)
        yield rng.integers(0, p, size=(m, n)).astype(np.int64)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rref_is_canonical_and_idempotent(p):
    for a in random_mats(p, seed=p):
        r, piv = linalg.rref(a, p)
        r2, piv2 = linalg.rref(r, p)
        assert np.array_equal(r, r2) and piv == piv2
        # pivot entries are 1 and their columns are cleared
        for row, col in enumerate(piv):
            assert r[row, col] == 1
            assert np.count_nonzero(r[:, col]) == 1


@pytest.mark.parametrize("p", [2, 3])
def test_rref_preserves_row_space(p):
    # brute-force row spans as vector sets
    def span_set(mat):
        rows = [tuple(v) for v in mat]
        out = {tuple([0] * mat.shape[1])}
        for coeffs in np.ndindex(*([p] * len(rows))):
            v = np.zeros(mat.shape[1], dtype=np.int64)
            for c, row in zip(coeffs, mat):
                v = (v + c * row) % p
            out.add(tuple(v))
        return out

    for a in random_mats(p, count=25, seed=p + 10):
        if a.shape[0] > 4:
            continue
        b = linalg.row_space(a, p)
        assert span_set(a) == span_set(b) if b.shape[0] <= 4 else True


@pytest.mark.parametrize("p", [2, 3, 5])
def test_left_nullspace_annihilates(p):
    for a in random_mats(p, seed=p + 20):
        ns = linalg.left_nullspace(a, p)
        assert not np.any(ns @ a % p)
        assert ns.shape[0] == a.shape[0] - linalg.rank(a, p)


@pytest.mark.parametrize("p", [2, 3])
def test_solve_left_many_round_trip(p):
    rng = np.random.default_rng(p)
    for _ in range(40):
        k, n, t = rng.integers(1, 5, size=3)
        basis = rng.integers(0, p, size=(k, n)).astype(np.int64)
        x = rng.integers(0, p, size=(t, k)).astype(np.int64)
        rhs = x @ basis % p
        sol = linalg.solve_left_many(basis, rhs, p)
        assert sol is not None
        assert np.array_equal(sol @ basis % p, rhs)


def test_solve_left_many_detects_inconsistency():
    basis = np.array([[1, 0]], dtype=np.int64)
    rhs = np.array([[0, 1]], dtype=np.int64)
    assert linalg.solve_left_many(basis, rhs, 2) is None


@pytest.mark.parametrize("p", [2, 3])
def test_intersection_against_brute_force(p):
    rng = np.random.default_rng(p + 3)
    for _ in range(30):
        n = 4
        a = rng.integers(0, p, size=(2, n)).astype(np.int64)
        b = rng.integers(0, p, size=(2, n)).astype(np.int64)

        def span(mat):
            vecs = set()
            for coeffs in np.ndindex(*([p] * mat.shape[0])):
                v = np.zeros(n, dtype=np.int64)
                for c, row in zip(coeffs, mat):
                    v = (v + c * row) % p
                vecs.add(tuple(v))
            return vecs

        inter = span(a) & span(b)
        got = linalg.intersect_rows(a, b, p)
        assert span(got) == inter


def test_inverse_and_rank():
    a = np.array([[1, 1], [0, 1]], dtype=np.int64)
    inv = linalg.inv_mod(a, 2)
    assert np.array_equal(a @ inv % 2, np.eye(2, dtype=np.int64))
    assert linalg.inv_mod(np.array([[1, 1], [1, 1]]), 2) is None


def test_decode_codes_is_lexicographic():
    rows = linalg.decode_codes(np.arange(9), 2, 3)
    listed = [tuple(r) for r in rows]
    assert listed == sorted(listed)
    assert listed[0] == (0, 0) and listed[-1] == (2, 2)


def test_empty_shapes():
    assert linalg.left_nullspace(linalg.zeros(0, 3), 2).shape == (0, 0)
    assert linalg.left_nullspace(linalg.zeros(3, 0), 2).shape == (3, 3)
    assert linalg.row_space(linalg.zeros(0, 4), 2).shape == (0, 4)
