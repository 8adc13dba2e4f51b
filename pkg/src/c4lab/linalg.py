"""
Dense linear algebra over prime fields GF(p).

Everything operates on numpy int64 arrays with entries reduced into
[0, p).  Row vectors are the primary convention: subspaces are row
spaces, kernels are left kernels ({x : x @ A = 0}), and canonical bases
are reduced row echelon forms, so basis equality is a byte-level array
comparison.
"""

from __future__ import annotations

import numpy as np


def as_gf(mat, p: int) -> np.ndarray:
    """Coerce to an int64 array with entries reduced mod p."""
    a = np.asarray(mat, dtype=np.int64)
    return np.mod(a, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def inv_scalar(a: int, p: int) -> int:
    """Multiplicative inverse of a nonzero scalar mod the prime p."""
    return pow(int(a) % p, p - 2, p)


def rref(mat, p: int, n_pivot_cols: int | None = None):
    """Reduced row echelon form over GF(p).

    Args:
        mat: matrix (m x n), any integer values.
        n_pivot_cols: only search for pivots in the first *n_pivot_cols*
            columns; row operations still apply across the full width.
            Used for augmented-system solving.  Defaults to all columns.

    Returns:
        (R, pivot_cols):
            R -- reduced echelon form, same shape, entries in [0, p).
            pivot_cols -- list of pivot column indices (length = rank).
    """
    a = as_gf(mat, p).copy()
    m, n = a.shape
    if n_pivot_cols is None:
        n_pivot_cols = n

    pivots: list[int] = []
    r = 0
    for c in range(n_pivot_cols):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        if a[r, c] != 1:
            a[r] = (a[r] * inv_scalar(a[r, c], p)) % p
        col = a[:, c].copy()
        col[r] = 0
        rows_hit = np.nonzero(col)[0]
        if rows_hit.size:
            a[rows_hit] = (a[rows_hit] - np.outer(col[rows_hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat, p: int) -> int:
    a = np.asarray(mat)
    if a.size == 0:
        return 0
    _, piv = rref(a, p)
    return len(piv)


def row_space(mat, p: int) -> np.ndarray:
    """Canonical (RREF) basis of the row space; shape (rank, n)."""
    a = as_gf(mat, p)
    if a.shape[0] == 0:
        return a.copy()
    r, piv = rref(a, p)
    return r[: len(piv)].copy()


def left_nullspace(mat, p: int) -> np.ndarray:
    """Canonical basis of {x : x @ mat = 0}; shape (m - rank, m)."""
    a = as_gf(mat, p)
    m, n = a.shape
    if m == 0:
        return zeros(0, 0)
    if n == 0:
        return eye(m)
    r, piv = rref(a.T, p)
    free = [c for c in range(m) if c not in piv]
    basis = zeros(len(free), m)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for j, pc in enumerate(piv):
            basis[row, pc] = (-r[j, f]) % p
    return row_space(basis, p)


def right_kernel_cols(mat, p: int) -> np.ndarray:
    """Columns spanning {q : mat @ q = 0}; shape (n, n - rank)."""
    a = as_gf(mat, p)
    return left_nullspace(a.T, p).T.copy()


def solve_left_many(basis, rhs, p: int):
    """Solve X @ basis = rhs row-wise.

    basis is (k x n), rhs is (t x n).  Returns the (t x k) coefficient
    matrix with free variables set to zero, or None if any row of rhs
    lies outside the row space of basis.
    """
    b = as_gf(basis, p)
    r = as_gf(rhs, p)
    k, n = b.shape
    t = r.shape[0]
    if t == 0:
        return zeros(0, k)
    if k == 0:
        return None if np.any(r) else zeros(t, 0)
    aug = np.concatenate([b.T, r.T], axis=1)
    red, piv = rref(aug, p, n_pivot_cols=k)
    # Rows with zero coefficient part but nonzero right-hand side part
    # witness inconsistency.
    lead = len(piv)
    if np.any(red[lead:, k:]):
        return None
    x = zeros(t, k)
    for j, pc in enumerate(piv):
        x[:, pc] = red[j, k:]
    return x


def express_rows(rows, basis, p: int):
    """Coordinates of each row w.r.t. basis, or None if not in the span."""
    return solve_left_many(basis, rows, p)


def in_row_space(rows, basis, p: int) -> bool:
    return solve_left_many(basis, rows, p) is not None


def sum_rows(a, b, p: int) -> np.ndarray:
    """Canonical basis of rowspace(a) + rowspace(b)."""
    return row_space(np.concatenate([as_gf(a, p), as_gf(b, p)], axis=0), p)


def intersect_rows(a, b, p: int) -> np.ndarray:
    """Canonical basis of rowspace(a) ∩ rowspace(b)."""
    a = as_gf(a, p)
    b = as_gf(b, p)
    ka = a.shape[0]
    if ka == 0 or b.shape[0] == 0:
        return zeros(0, a.shape[1])
    stacked = np.concatenate([a, b], axis=0)
    w = left_nullspace(stacked, p)
    if w.shape[0] == 0:
        return zeros(0, a.shape[1])
    return row_space(w[:, :ka] @ a, p)


def inv_mod(mat, p: int):
    """Inverse of a square matrix, or None when singular."""
    a = as_gf(mat, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return a.copy()
    aug = np.concatenate([a, eye(n)], axis=1)
    red, piv = rref(aug, p, n_pivot_cols=n)
    if len(piv) < n:
        return None
    return red[:, n:].copy()


def is_invertible(mat, p: int) -> bool:
    a = np.asarray(mat)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def decode_codes(codes, width: int, p: int) -> np.ndarray:
    """Mixed-radix decode of integer codes into digit rows.

    Digit 0 is the most significant, so ascending codes enumerate the
    digit vectors in lexicographic order.
    """
    c = np.asarray(codes, dtype=np.int64).copy()
    out = np.empty((c.shape[0], width), dtype=np.int64)
    for pos in range(width - 1, -1, -1):
        out[:, pos] = c % p
        c //= p
    return out


def coeff_blocks(total: int, width: int, p: int, block: int = 4096):
    """Yield (codes, digit_rows) chunks covering codes 0..total-1 in order."""
    start = 0
    while start < total:
        stop = min(start + block, total)
        codes = np.arange(start, stop, dtype=np.int64)
        yield codes, decode_codes(codes, width, p)
        start = stop
