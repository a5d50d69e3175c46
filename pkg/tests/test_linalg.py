"""Exact rank/echelon routines over prime fields and the rationals."""

import random
from fractions import Fraction

import numpy as np
import pytest

from resolvitor.errors import UsageError
from resolvitor.linalg import echelon_gf, kernel_dim_gf, rank_gf, rank_qq, rref_gf

P = 32003


def _fraction_rank(M):
    rows = [{j: Fraction(int(v)) for j, v in enumerate(r) if v} for r in M]
    return rank_qq(rows, M.shape[1])


def test_rank_matches_exact_rational_rank():
    rng = np.random.default_rng(7)
    for _ in range(25):
        m, n = rng.integers(1, 30, size=2)
        M = rng.integers(-5, 6, size=(m, n)).astype(np.float64)
        assert rank_gf(M % P, P) == _fraction_rank(M)


def test_rank_of_structured_matrices():
    assert rank_gf(np.eye(5), P) == 5
    assert rank_gf(np.zeros((4, 7)), P) == 0
    M = np.outer(np.arange(1, 6), np.arange(1, 8)).astype(np.float64)
    assert rank_gf(M, P) == 1
    assert kernel_dim_gf(M, P) == 4


def test_rank_wide_matrix_panel_boundaries():
    # widths around the elimination panel size
    rng = np.random.default_rng(3)
    for n in (127, 128, 129, 257):
        M = rng.integers(0, P, size=(40, n)).astype(np.float64)
        M[20:] = M[:20]  # force rank deficiency
        assert rank_gf(M, P) == 20


def test_echelon_pivots():
    M = np.array([[0, 1, 2], [0, 2, 4], [1, 0, 0]], dtype=np.float64)
    r, pivots = echelon_gf(M.copy(), P)
    assert r == 2 and len(pivots) == 2


def test_rref_reproduces_row_space():
    rng = np.random.default_rng(11)
    M = rng.integers(0, 7, size=(8, 12)).astype(np.float64)
    R, pivots = rref_gf(M, P)
    assert rank_gf(np.vstack([M, R]) % P, P) == rank_gf(M % P, P) == len(pivots)
    for i, j in enumerate(pivots):
        col = np.zeros(8)
        col[i] = 1
        assert np.array_equal(R[:, j], col)


def test_small_prime_supported_large_rejected():
    assert rank_gf(np.eye(3), 2) == 3
    with pytest.raises(UsageError):
        rank_gf(np.eye(2), 2 ** 31)


def test_rank_qq_fractions():
    rows = [{0: Fraction(1, 2), 1: Fraction(1, 3)},
            {0: Fraction(3, 2), 1: Fraction(1, 1)},   # 3 * first row
            {0: Fraction(1), 1: Fraction(1)}]
    assert rank_qq(rows, 2) == 2
    assert rank_qq([], 5) == 0
