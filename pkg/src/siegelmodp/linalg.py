"""Dense linear algebra over a prime field F_p (int64 numpy arrays)."""
from __future__ import annotations

import numpy as np


def rref(A, p: int, pivot_cols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` mod ``p``.

    Pivots are taken at the first nonzero column, smallest row index first.
    Only the leading ``pivot_cols`` columns are eligible as pivots; the rest
    are carried along (useful for augmented systems and transform tracking).
    """
    M = np.array(A, dtype=np.int64) % p
    if M.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = M.shape
    ncols = cols if pivot_cols is None else pivot_cols
    pivots: list[int] = []
    r = 0
    for j in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, j])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        M[r] = M[r] * pow(int(M[r, j]), -1, p) % p
        col = M[:, j].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            M[hit] = (M[hit] - np.outer(col[hit], M[r])) % p
        pivots.append(j)
        r += 1
    return M, pivots


def rank(A, p: int) -> int:
    return len(rref(A, p)[1])


def nullspace(A, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : A x = 0}`` over F_p, one row per free column."""
    A = np.atleast_2d(np.asarray(A, dtype=np.int64))
    n = A.shape[1]
    R, piv = rref(A, p)
    free = [j for j in range(n) if j not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, j in enumerate(piv):
            basis[t, j] = -R[i, f] % p
    return basis


class RankDeficiency(ArithmeticError):
    """The coefficient matrix does not have full column rank."""


class Inconsistent(ValueError):
    """The right-hand side is not in the column space."""


def solve(A, Y, p: int) -> np.ndarray:
    """Unique solution ``X`` of ``A X = Y`` for a full-column-rank ``A``."""
    A = np.asarray(A, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    vec = Y.ndim == 1
    if vec:
        Y = Y[:, None]
    n = A.shape[1]
    R, piv = rref(np.hstack([A, Y]), p, pivot_cols=n)
    if len(piv) < n:
        raise RankDeficiency(f"rank {len(piv)} < {n} columns")
    if np.any(R[n:, n:] % p):
        raise Inconsistent("system has no solution")
    X = R[:n, n:]
    return X[:, 0] if vec else X
