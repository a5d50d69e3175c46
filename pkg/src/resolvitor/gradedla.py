"""Degreewise linear algebra for graded modules: expanding graded matrices
into scalar matrices in a fixed degree, homology dimensions, Hilbert
functions of cokernels, minors and their spans, regular-sequence tests and a
saturation oracle."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Sequence

import numpy as np

from .constructions import GradedMatrix
from .errors import UsageError
from .linalg import rank_gf, rank_qq, rref_gf
from .polyring import QQ, Domain, Polynomial, VarSet, mon_mul, monomials_of_degree

DEFAULT_PRIME = 32003


@lru_cache(maxsize=None)
def monomial_index(vs: VarSet, d: int) -> dict:
    """Exponent tuple -> position within the degree-d monomial basis."""
    return {m: i for i, m in enumerate(monomials_of_degree(vs, d))}


def space_dim(vs: VarSet, d: int) -> int:
    """Dimension of the degree-d piece of the polynomial ring."""
    n = len(vs)
    return comb(d + n - 1, n - 1) if d >= 0 else 0


def degree_range(fn: Callable[[int], object], degrees: Sequence[int]) -> list:
    """Apply fn to each degree, optionally in a thread pool sized by the
    RESOLVITOR_THREADS environment variable (default: sequential)."""
    threads = int(os.environ.get("RESOLVITOR_THREADS", "1"))
    degrees = list(degrees)
    if threads <= 1 or len(degrees) <= 1:
        return [fn(t) for t in degrees]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, degrees))


# ---------------------------------------------------------------------------
# quotient rings presented by homogeneous generators

class QuotientPresentation:
    """Polynomial ring modulo homogeneous generators; supplies per-degree
    monomial coset bases and a linear reduction map onto them."""

    def __init__(self, gens: Sequence[Polynomial]):
        if not gens:
            raise UsageError("quotient presentation needs at least one generator")
        self.gens = tuple(gens)
        self.varset = gens[0].varset
        for g in gens:
            if g.varset != self.varset:
                raise UsageError("quotient generators must share one variable set")
            if g.homogeneous_degree() is None:
                raise UsageError("quotient generators must be homogeneous and nonzero")
        self._cache: dict[tuple[int, int], tuple[list[int], np.ndarray]] = {}

    def reduction(self, t: int, p: int) -> tuple[list[int], np.ndarray]:
        """(coset basis positions, U) in degree t mod p, where U maps full
        monomial coordinates (as a row vector) onto coset coordinates."""
        key = (t, p)
        if key in self._cache:
            return self._cache[key]
        n = space_dim(self.varset, t)
        rows = []
        for g in self.gens:
            d = g.homogeneous_degree()
            if d > t:
                continue
            idx = monomial_index(self.varset, t)
            for mu in monomials_of_degree(self.varset, t - d):
                row = np.zeros(n)
                for m, c in g.terms.items():
                    row[idx[mon_mul(mu, m)]] = int(c) % p
                rows.append(row)
        if rows:
            R, pivots = rref_gf(np.array(rows), p)
        else:
            R, pivots = np.zeros((0, n)), []
        pivot_set = set(pivots)
        nonpiv = [c for c in range(n) if c not in pivot_set]
        U = np.zeros((n, len(nonpiv)))
        for k, c in enumerate(nonpiv):
            U[c, k] = 1
        for r, c in enumerate(pivots):
            U[c] = (-R[r, nonpiv]) % p
        self._cache[key] = (nonpiv, U)
        return nonpiv, U

    def dim(self, t: int, p: int = DEFAULT_PRIME) -> int:
        if t < 0:
            return 0
        return len(self.reduction(t, p)[0])


# ---------------------------------------------------------------------------
# expanding a graded matrix in one degree

class PieceMatrix:
    """Scalar matrix for the degree-t piece of a graded map, over GF(p)
    (dense numpy) or the rationals (sparse Fraction rows)."""

    def __init__(self, nrows: int, ncols: int, data, domain: Domain):
        self.nrows = nrows
        self.ncols = ncols
        self.data = data
        self.domain = domain
        self._rank: int | None = None

    def rank(self) -> int:
        if self._rank is None:
            if self.nrows == 0 or self.ncols == 0:
                self._rank = 0
            elif self.domain.kind == "GF":
                self._rank = rank_gf(self.data, self.domain.p)
            else:
                self._rank = rank_qq(self.data, self.ncols)
        return self._rank

    def kernel_dim(self) -> int:
        """Dimension of the left kernel {v : v M = 0}."""
        return self.nrows - self.rank()


def expand_graded_piece(M: GradedMatrix, t: int, domain: Domain,
                        quotient: QuotientPresentation | None = None) -> PieceMatrix:
    """Degree-t piece of the map of free modules given by M, as a scalar
    matrix acting on row vectors.  Row basis: (source generator i, monomial
    of degree t - srcDeg[i]); column basis likewise over target generators.
    With a quotient, monomial bases are replaced by coset bases."""
    if M.src_degrees is None or M.tgt_degrees is None:
        raise UsageError("expansion requires generator degrees")
    if domain.kind == "GF":
        p = domain.p
    elif domain == QQ:
        p = None
        if quotient is not None:
            raise UsageError("quotient pieces are supported over prime fields only")
    else:
        raise UsageError("expansion requires a field (GF(p) or QQ)")
    vs = M.varset

    def block_dim(d: int) -> int:
        if d < 0:
            return 0
        return quotient.dim(d, p) if quotient is not None else space_dim(vs, d)

    row_offsets, nrows = [], 0
    for dg in M.src_degrees:
        row_offsets.append(nrows)
        nrows += block_dim(t - dg)
    col_offsets, ncols = [], 0
    for dg in M.tgt_degrees:
        col_offsets.append(ncols)
        ncols += block_dim(t - dg)

    if p is not None:
        A = np.zeros((nrows, ncols))
    else:
        A = [dict() for _ in range(nrows)]

    for i, sd in enumerate(M.src_degrees):
        sdeg = t - sd
        if sdeg < 0:
            continue
        src_basis = monomials_of_degree(vs, sdeg)
        if quotient is not None:
            src_basis = tuple(src_basis[k] for k in quotient.reduction(sdeg, p)[0])
        for j, td in enumerate(M.tgt_degrees):
            poly = M.entries[i][j]
            if poly.is_zero:
                continue
            tdeg = t - td
            idx = monomial_index(vs, tdeg)
            if quotient is not None:
                _, U = quotient.reduction(tdeg, p)
            for r, mu in enumerate(src_basis):
                row = row_offsets[i] + r
                if quotient is not None:
                    v = np.zeros(space_dim(vs, tdeg))
                    for m, c in poly.terms.items():
                        v[idx[mon_mul(mu, m)]] += int(c)
                    red = (v @ U) % p
                    nz = np.nonzero(red)[0]
                    if nz.size:
                        A[row, col_offsets[j] + nz] = (A[row, col_offsets[j] + nz] + red[nz]) % p
                elif p is not None:
                    for m, c in poly.terms.items():
                        col = col_offsets[j] + idx[mon_mul(mu, m)]
                        A[row, col] = (A[row, col] + int(c)) % p
                else:
                    rowd = A[row]
                    for m, c in poly.terms.items():
                        col = col_offsets[j] + idx[mon_mul(mu, m)]
                        val = rowd.get(col, Fraction(0)) + Fraction(c)
                        if val:
                            rowd[col] = val
                        else:
                            rowd.pop(col, None)
    return PieceMatrix(nrows, ncols, A, domain)


# ---------------------------------------------------------------------------
# homology and Hilbert functions

@dataclass
class HomologyReport:
    """Homology dimensions per degree: dims[t] lists one value for each
    module of the complex, left to right (left end: kernel dimension; right
    end: cokernel dimension; interior: kernel minus incoming rank)."""
    degrees: tuple[int, ...]
    dims: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def interior_exact(self) -> bool:
        return all(all(v == 0 for v in row[1:-1]) for row in self.dims.values())

    def left_kernel_zero(self) -> bool:
        return all(row[0] == 0 for row in self.dims.values())


def homology_dims(maps: Sequence[GradedMatrix], degrees: Sequence[int], domain: Domain,
                  quotient: QuotientPresentation | None = None) -> HomologyReport:
    """Degreewise homology of a chain of composable graded matrices."""
    report = HomologyReport(tuple(degrees))

    def one_degree(t: int) -> tuple[int, ...]:
        pieces = [expand_graded_piece(M, t, domain, quotient) for M in maps]
        dims = [pieces[0].kernel_dim()]
        for k in range(1, len(pieces)):
            dims.append(pieces[k].kernel_dim() - pieces[k - 1].rank())
        dims.append(pieces[-1].ncols - pieces[-1].rank())
        return tuple(dims)

    for t, row in zip(degrees, degree_range(one_degree, degrees)):
        report.dims[t] = row
    return report


@dataclass(frozen=True)
class HilbertFunction:
    values: dict[int, int]

    def __call__(self, t: int) -> int:
        return self.values.get(t, 0)

    def total(self) -> int:
        return sum(self.values.values())

    def support(self) -> list[int]:
        return sorted(t for t, v in self.values.items() if v)


def coker_hilbert(M: GradedMatrix, degrees: Sequence[int], domain: Domain,
                  quotient: QuotientPresentation | None = None) -> HilbertFunction:
    """Hilbert function of the cokernel of M over the chosen field."""
    def one_degree(t: int) -> int:
        piece = expand_graded_piece(M, t, domain, quotient)
        return piece.ncols - piece.rank()
    vals = degree_range(one_degree, degrees)
    return HilbertFunction({t: v for t, v in zip(degrees, vals)})


def ideal_piece_dim(gens: Sequence[Polynomial], t: int, p: int = DEFAULT_PRIME) -> int:
    """Dimension of the degree-t piece of the ideal generated by gens."""
    vs = gens[0].varset
    idx = monomial_index(vs, t)
    rows = []
    for g in gens:
        d = g.homogeneous_degree()
        if d is None:
            raise UsageError("ideal generators must be homogeneous and nonzero")
        if d > t:
            continue
        for mu in monomials_of_degree(vs, t - d):
            row = np.zeros(len(idx))
            for m, c in g.terms.items():
                row[idx[mon_mul(mu, m)]] = int(c) % p
            rows.append(row)
    if not rows:
        return 0
    return rank_gf(np.array(rows), p)


# ---------------------------------------------------------------------------
# regular sequences

@dataclass(frozen=True)
class RegSeqResult:
    regular: bool
    reason: str
    actual: tuple[int, ...]
    predicted: tuple[int, ...]
    degrees_checked: tuple[int, ...]


def regular_sequence_test(fs: Sequence[Polynomial], ring_gens: Sequence[Polynomial] = (),
                          p: int = DEFAULT_PRIME, deg_max: int = 40) -> RegSeqResult:
    """Decide whether fs is a regular sequence on R (or R/(ring_gens)) by
    comparing the Hilbert function of the quotient by fs with the value
    predicted by clearing one factor per element of the sequence.

    The comparison runs degree by degree until both sides vanish (then one
    degree beyond) or until deg_max.  A negative predicted value means the
    sequence is too long to be regular."""
    vs = fs[0].varset
    fdegs = []
    for f in fs:
        d = f.homogeneous_degree()
        if d is None:
            raise UsageError("sequence entries must be homogeneous and nonzero")
        fdegs.append(d)

    # HF of the ambient ring, degree by degree
    if ring_gens:
        ambient = lambda t: space_dim(vs, t) - ideal_piece_dim(ring_gens, t, p)
    else:
        ambient = lambda t: space_dim(vs, t)

    # numerator product prod (1 - z^d)
    num = [1]
    for d in fdegs:
        new = num + [0] * d
        for i, c in enumerate(num):
            new[i + d] -= c
        num = new

    all_gens = list(ring_gens) + list(fs)
    actual, predicted, degs = [], [], []
    t = 0
    while t <= deg_max:
        pred = sum(c * ambient(t - i) for i, c in enumerate(num) if 0 <= t - i)
        act = space_dim(vs, t) - ideal_piece_dim(all_gens, t, p)
        degs.append(t)
        predicted.append(pred)
        actual.append(act)
        if pred < 0:
            return RegSeqResult(False, "predicted Hilbert function goes negative: "
                                       "not a system of parameters",
                                tuple(actual), tuple(predicted), tuple(degs))
        if act != pred:
            return RegSeqResult(False, f"Hilbert function mismatch in degree {t}: "
                                       f"got {act}, expected {pred}",
                                tuple(actual), tuple(predicted), tuple(degs))
        if t > 0 and act == 0 and pred == 0 and predicted[-2] == 0:
            return RegSeqResult(True, "Hilbert function matches prediction through vanishing",
                                tuple(actual), tuple(predicted), tuple(degs))
        t += 1
    return RegSeqResult(True, f"Hilbert function matches prediction up to degree {deg_max}",
                        tuple(actual), tuple(predicted), tuple(degs))


# ---------------------------------------------------------------------------
# minors

def minors(M: GradedMatrix, size: int, cap: int = 200_000) -> list[Polynomial]:
    """All size x size minors of M, via cofactor expansion memoized on
    (row subset, column subset)."""
    from itertools import combinations

    if size < 1 or size > min(M.rows, M.cols):
        raise UsageError(f"minor size {size} out of range for {M.rows}x{M.cols}")
    count = comb(M.rows, size) * comb(M.cols, size)
    if count > cap:
        raise UsageError(f"{count} minors requested; cap is {cap}")

    zero = Polynomial.zero(M.varset, M.domain)
    memo: dict[tuple[tuple[int, ...], tuple[int, ...]], Polynomial] = {}

    def det(rows: tuple[int, ...], cols: tuple[int, ...]) -> Polynomial:
        if len(rows) == 1:
            return M.entries[rows[0]][cols[0]]
        key = (rows, cols)
        got = memo.get(key)
        if got is not None:
            return got
        acc = zero
        r0 = rows[0]
        for k, c in enumerate(cols):
            e = M.entries[r0][c]
            if e.is_zero:
                continue
            sub = det(rows[1:], cols[:k] + cols[k + 1:])
            term = e * sub
            acc = acc + term if k % 2 == 0 else acc - term
        memo[key] = acc
        return acc

    out = []
    for rows in combinations(range(M.rows), size):
        for cols in combinations(range(M.cols), size):
            out.append(det(rows, cols))
    return out


def poly_span_dim(polys: Sequence[Polynomial], degree: int) -> int:
    """Dimension over the rationals of the linear span of homogeneous
    polynomials of the given degree."""
    if not polys:
        return 0
    vs = polys[0].varset
    idx = monomial_index(vs, degree)
    rows = []
    for f in polys:
        if f.is_zero:
            continue
        if f.homogeneous_degree() != degree:
            raise UsageError("span members must share one degree")
        rows.append({idx[m]: Fraction(c) for m, c in f.terms.items()})
    return rank_qq(rows, len(idx))


def spans_equal(polys: Sequence[Polynomial], others: Sequence[Polynomial], degree: int) -> bool:
    """True iff two sets of homogeneous polynomials span the same space."""
    d1 = poly_span_dim(polys, degree)
    d2 = poly_span_dim(others, degree)
    return d1 == d2 == poly_span_dim(list(polys) + list(others), degree)


# ---------------------------------------------------------------------------
# saturation

def saturation_piece_dim(gens: Sequence[Polynomial], t: int, N: int,
                         p: int = DEFAULT_PRIME) -> int:
    """Dimension of the degree-t piece of the ideal quotient
    (I : (all monomials of degree N)), a finite stand-in for saturating I at
    the irrelevant maximal ideal."""
    vs = gens[0].varset
    big = t + N
    n_big = space_dim(vs, big)
    idx_big = monomial_index(vs, big)
    rows = []
    for g in gens:
        d = g.homogeneous_degree()
        if d is None:
            raise UsageError("ideal generators must be homogeneous and nonzero")
        if d > big:
            continue
        for mu in monomials_of_degree(vs, big - d):
            row = np.zeros(n_big)
            for m, c in g.terms.items():
                row[idx_big[mon_mul(mu, m)]] = int(c) % p
            rows.append(row)
    if rows:
        R, pivots = rref_gf(np.array(rows), p)
    else:
        R, pivots = np.zeros((0, n_big)), []
    pivot_set = set(pivots)
    nonpiv = [c for c in range(n_big) if c not in pivot_set]
    U = np.zeros((n_big, len(nonpiv)))
    for k, c in enumerate(nonpiv):
        U[c, k] = 1
    for r, c in enumerate(pivots):
        U[c] = (-R[r, nonpiv]) % p

    n_t = space_dim(vs, t)
    mons_t = monomials_of_degree(vs, t)
    blocks = []
    for mu in monomials_of_degree(vs, N):
        # map h |-> normal form of mu*h, as a matrix on monomial coordinates
        B = np.empty((n_t, len(nonpiv)))
        for r, nu in enumerate(mons_t):
            B[r] = U[idx_big[mon_mul(mu, nu)]]
        blocks.append(B)
    if not blocks or not nonpiv:
        return n_t
    T = np.hstack(blocks) if len(blocks) > 1 else blocks[0]
    return n_t - rank_gf(T, p)


def local_h1_piece_dim(gens: Sequence[Polynomial], t: int, N: int,
                       p: int = DEFAULT_PRIME) -> int:
    """Degree-t dimension of the first local cohomology of A/I at the
    irrelevant maximal ideal, for N large enough (N at least the regularity
    of A/I suffices).

    Computed as dim Hom(J, A/I)_t - dim (A/I)_t with J = (x_i^N): a
    homomorphism is a tuple (g_0..g_{n-1}) in (A/I)_{t+N} subject to the
    Koszul constraints x_j^N g_i = x_i^N g_j, because the pure powers form a
    regular sequence.  Valid when the degree-t colon piece (I : all degree-N
    monomials) equals I_t, i.e. the zeroth local cohomology vanishes there;
    callers should confirm that via saturation_piece_dim."""
    vs = gens[0].varset
    nvars = len(vs)
    quo = QuotientPresentation(gens)
    m_t = quo.dim(t, p)
    np1, _ = quo.reduction(t + N, p)
    np2, U2 = quo.reduction(t + 2 * N, p)
    m1, m2 = len(np1), len(np2)
    if m1 == 0 or m2 == 0:
        return 0
    mons1 = monomials_of_degree(vs, t + N)
    idx2 = monomial_index(vs, t + 2 * N)
    mult = []
    for i in range(nvars):
        e = [0] * nvars
        e[i] = N
        Pi = np.empty((m1, m2))
        for r, c in enumerate(np1):
            Pi[r] = U2[idx2[mon_mul(mons1[c], tuple(e))]]
        mult.append(Pi)
    blocks = []
    for i in range(nvars):
        for j in range(i + 1, nvars):
            B = np.zeros((nvars * m1, m2))
            B[i * m1:(i + 1) * m1] = mult[j]
            B[j * m1:(j + 1) * m1] = (-mult[i]) % p
            blocks.append(B)
    T = np.hstack(blocks)
    hom_dim = nvars * m1 - rank_gf(T, p)
    return hom_dim - m_t


def power_in_ideal(f: Polynomial, gens: Sequence[Polynomial], max_power: int,
                   p: int = DEFAULT_PRIME) -> int | None:
    """Smallest N <= max_power with f**N in the ideal, else None."""
    g = f
    for N in range(1, max_power + 1):
        d = g.homogeneous_degree()
        if d is None:
            raise UsageError("radical membership test needs homogeneous input")
        idx = monomial_index(f.varset, d)
        row = np.zeros(len(idx))
        for m, c in g.terms.items():
            row[idx[m]] = int(c) % p
        rows = _ideal_rows(gens, d, p)
        base = rank_gf(rows, p) if rows.size else 0
        stacked = np.vstack([rows, row[None, :]]) if rows.size else row[None, :]
        if rank_gf(stacked, p) == base:
            return N
        g = g * f
    return None


def _ideal_rows(gens: Sequence[Polynomial], t: int, p: int) -> np.ndarray:
    vs = gens[0].varset
    idx = monomial_index(vs, t)
    rows = []
    for g in gens:
        d = g.homogeneous_degree()
        if d > t:
            continue
        for mu in monomials_of_degree(vs, t - d):
            row = np.zeros(len(idx))
            for m, c in g.terms.items():
                row[idx[mon_mul(mu, m)]] = int(c) % p
            rows.append(row)
    return np.array(rows) if rows else np.zeros((0, len(idx)))
