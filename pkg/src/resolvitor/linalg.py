"""Exact dense linear algebra over prime fields and the rationals.

The prime-field routines run blocked Gaussian elimination in float64 via
numpy.  All intermediate values stay below 2**53 because every product is a
sum of at most PANEL terms, each bounded by (p-1)**2; callers must keep
p**2 * PANEL < 2**53, which holds comfortably for the default p = 32003.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import UsageError

PANEL = 128


def _check_prime(p: int) -> None:
    if p < 2 or PANEL * p * p >= 2 ** 53:
        raise UsageError(f"prime {p} out of supported range")


def echelon_gf(A: np.ndarray, p: int) -> tuple[int, list[int]]:
    """In-place row echelon form mod p; returns (rank, pivot columns).

    Panels of PANEL columns are eliminated with scalar row operations while
    the multipliers are recorded; the trailing block is then updated with two
    BLAS matrix products per panel.
    """
    _check_prime(p)
    m, n = A.shape
    np.mod(A, p, out=A)
    r = 0
    pivots: list[int] = []
    c0 = 0
    while r < m and c0 < n:
        c1 = min(n, c0 + PANEL)
        L = np.zeros((m, c1 - c0))
        r0 = r
        for j in range(c0, c1):
            if r >= m:
                break
            col = A[r:, j]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                A[[r, k]] = A[[k, r]]
                L[[r, k]] = L[[k, r]]
            inv = pow(int(A[r, j]), p - 2, p)
            f = (A[r + 1:, j] * inv) % p
            nzf = np.nonzero(f)[0]
            if nzf.size:
                ridx = r + 1 + nzf
                A[ridx, j:c1] = (A[ridx, j:c1] - np.outer(f[nzf], A[r, j:c1])) % p
                L[ridx, r - r0] = f[nzf]
            pivots.append(j)
            r += 1
        npiv = r - r0
        if npiv and c1 < n:
            T = A[:, c1:]
            for i in range(r0 + 1, r):
                li = L[i, : i - r0]
                if li.any():
                    T[i] = (T[i] - li @ T[r0:i]) % p
            Lb = L[r:, :npiv]
            if Lb.size and Lb.any():
                T[r:] = (T[r:] - Lb @ T[r0:r]) % p
        c0 = c1
    return r, pivots


def rank_gf(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return echelon_gf(np.array(A, dtype=np.float64), p)[0]


def rref_gf(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p (fresh array) and its pivot columns."""
    if A.size == 0:
        return np.zeros(A.shape), []
    W = np.array(A, dtype=np.float64)
    r, pivots = echelon_gf(W, p)
    for i in reversed(range(r)):
        j = pivots[i]
        inv = pow(int(W[i, j]), p - 2, p)
        if inv != 1:
            W[i, j:] = (W[i, j:] * inv) % p
        if i:
            col = W[:i, j].copy()
            nz = np.nonzero(col)[0]
            # eliminate above the pivot in chunks so products stay exact
            for k in nz:
                W[k, j:] = (W[k, j:] - col[k] * W[i, j:]) % p
    W[r:] = 0
    return W, pivots


def kernel_dim_gf(A: np.ndarray, p: int) -> int:
    """Dimension of {v : v A = 0 (mod p)} for row vectors v."""
    if A.size == 0:
        return A.shape[0]
    return A.shape[0] - rank_gf(A, p)


def rank_qq(rows: list[dict[int, Fraction]], ncols: int) -> int:
    """Exact rank over the rationals of sparse rows {col: value}.

    Fraction-based forward elimination; intended for modest sizes where a
    characteristic-zero certificate is wanted.
    """
    rows = [dict(r) for r in rows if r]
    rank = 0
    for col in range(ncols):
        piv = None
        for idx, row in enumerate(rows):
            if row.get(col):
                piv = idx
                break
        if piv is None:
            continue
        pivot_row = rows.pop(piv)
        inv = Fraction(1, 1) / pivot_row[col]
        pivot_row = {c: v * inv for c, v in pivot_row.items()}
        nxt = []
        for row in rows:
            f = row.get(col)
            if f:
                row = {c: v - f * pivot_row.get(c, 0) for c, v in
                       {**{c: Fraction(0) for c in pivot_row}, **row}.items()}
                row = {c: v for c, v in row.items() if v}
            if row:
                nxt.append(row)
        rows = nxt
        rank += 1
        if not rows:
            break
    return rank
