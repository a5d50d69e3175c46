"""Matrix builders: the eight a x (a+1) blocks, the assembled matrices
A, B, A', A'', B', B'', C, D built from a sequence of four ring elements,
the sign-twisting substitution sigma, and a signed-permutation-equivalence
search.

Entry laws are kept 1-indexed in comments (matching the displayed shapes);
storage is 0-indexed.  Vectors are row vectors throughout: a matrix with
r rows and c columns is the map F -> G, v |-> v*M, where rank F = r.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import IntegrityError, UsageError
from .polyring import GF, QQ, ZZ, Domain, Polynomial, VarSet, grevlex_key

GENERIC_VARS = VarSet(("f1", "f2", "f3", "f4"))

BLOCK_KINDS = ("A11", "A12", "A21", "A22", "B11", "B12", "B21", "B22")
ASSEMBLED = ("A", "B", "Aprime", "Adblprime", "Bprime", "Bdblprime", "C", "D")


@dataclass(frozen=True)
class SequenceF:
    """A sequence of four elements f1..f4 sharing one variable set, with the
    common homogeneous degree delta when all four are homogeneous of it."""

    f1: Polynomial
    f2: Polynomial
    f3: Polynomial
    f4: Polynomial

    def __post_init__(self):
        vs = self.f1.varset
        dom = self.f1.domain
        for f in (self.f2, self.f3, self.f4):
            if f.varset != vs or f.domain != dom:
                raise UsageError("all four sequence elements must share one ring")

    @property
    def fs(self) -> tuple[Polynomial, Polynomial, Polynomial, Polynomial]:
        return (self.f1, self.f2, self.f3, self.f4)

    @property
    def varset(self) -> VarSet:
        return self.f1.varset

    @property
    def domain(self) -> Domain:
        return self.f1.domain

    @property
    def delta(self) -> int | None:
        degs = {f.homogeneous_degree() for f in self.fs}
        if len(degs) == 1 and None not in degs:
            return degs.pop()
        return None

    @staticmethod
    def generic(domain: Domain = ZZ) -> "SequenceF":
        return SequenceF(*(Polynomial.variable(GENERIC_VARS, n, domain) for n in GENERIC_VARS.names))

    @staticmethod
    def of_variables(varset: VarSet, names: Sequence[str], domain: Domain = ZZ) -> "SequenceF":
        if len(names) != 4:
            raise UsageError(f"need exactly four elements, got {len(names)}")
        return SequenceF(*(Polynomial.variable(varset, n, domain) for n in names))

    @property
    def is_generic(self) -> bool:
        return self.varset == GENERIC_VARS and self.fs == SequenceF.generic(self.domain).fs

    def sigma(self) -> "SequenceF":
        """(f1, f2, f3, f4) -> (-f1, -f4, -f3, -f2)."""
        return SequenceF(-self.f1, -self.f4, -self.f3, -self.f2)


class GradedMatrix:
    """Polynomial matrix with generator degrees on source (rows) and target
    (columns).  Entry (i, j) is zero or homogeneous of degree
    src_degrees[i] - tgt_degrees[j] whenever the degrees are present."""

    __slots__ = ("rows", "cols", "entries", "varset", "domain", "src_degrees", "tgt_degrees")

    def __init__(self, entries: Sequence[Sequence[Polynomial]], varset: VarSet, domain: Domain,
                 src_degrees=None, tgt_degrees=None):
        self.entries = tuple(tuple(row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise UsageError("ragged matrix")
            for p in row:
                if p.varset != varset or p.domain != domain:
                    raise UsageError("matrix entries must share one ring")
        self.varset = varset
        self.domain = domain
        self.src_degrees = tuple(src_degrees) if src_degrees is not None else None
        self.tgt_degrees = tuple(tgt_degrees) if tgt_degrees is not None else None
        if self.src_degrees is not None and len(self.src_degrees) != self.rows:
            raise UsageError("src_degrees length must equal row count")
        if self.tgt_degrees is not None and len(self.tgt_degrees) != self.cols:
            raise UsageError("tgt_degrees length must equal column count")

    @property
    def is_graded(self) -> bool:
        return self.src_degrees is not None and self.tgt_degrees is not None

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries[i][j]

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for row in self.entries for p in row)

    def validate_graded(self):
        """Check the entrywise homogeneity invariant; raises IntegrityError."""
        if not self.is_graded:
            raise UsageError("matrix carries no degree data")
        for i, row in enumerate(self.entries):
            for j, p in enumerate(row):
                if p.is_zero:
                    continue
                want = self.src_degrees[i] - self.tgt_degrees[j]
                if p.homogeneous_degree() != want:
                    raise IntegrityError(
                        f"entry ({i},{j}) = {p} is not homogeneous of degree {want}")

    def transpose(self) -> "GradedMatrix":
        entries = tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols))
        return GradedMatrix(entries, self.varset, self.domain,
                            src_degrees=None if self.tgt_degrees is None else tuple(-d for d in self.tgt_degrees),
                            tgt_degrees=None if self.src_degrees is None else tuple(-d for d in self.src_degrees))

    def with_degrees(self, src_degrees, tgt_degrees) -> "GradedMatrix":
        return GradedMatrix(self.entries, self.varset, self.domain, src_degrees, tgt_degrees)

    def map_entries(self, fn: Callable[[Polynomial], Polynomial]) -> "GradedMatrix":
        entries = tuple(tuple(fn(p) for p in row) for row in self.entries)
        first = entries[0][0] if self.rows and self.cols else None
        vs = first.varset if first is not None else self.varset
        dom = first.domain if first is not None else self.domain
        return GradedMatrix(entries, vs, dom, self.src_degrees, self.tgt_degrees)

    def matmul(self, other: "GradedMatrix") -> "GradedMatrix":
        if self.cols != other.rows:
            raise UsageError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        zero = Polynomial.zero(self.varset, self.domain)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    p = self.entries[i][k]
                    q = other.entries[k][j]
                    if not p.is_zero and not q.is_zero:
                        acc = acc + p * q
                row.append(acc)
            out.append(row)
        return GradedMatrix(out, self.varset, self.domain,
                            src_degrees=self.src_degrees, tgt_degrees=other.tgt_degrees)

    def json_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "srcDegrees": list(self.src_degrees) if self.src_degrees is not None else None,
            "tgtDegrees": list(self.tgt_degrees) if self.tgt_degrees is not None else None,
            "entries": [[p.text() for p in row] for row in self.entries],
        }

    def __eq__(self, other):
        return (isinstance(other, GradedMatrix) and self.entries == other.entries
                and self.varset == other.varset and self.domain == other.domain)

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"<GradedMatrix {self.rows}x{self.cols} over {self.varset}>"


def _grid(rows: int, cols: int, zero: Polynomial) -> list[list[Polynomial]]:
    return [[zero] * cols for _ in range(rows)]


def block(kind: str, a: int, F: SequenceF) -> GradedMatrix:
    """One of the eight a x (a+1) blocks.  1-indexed entry laws (zero elsewhere):

      A11[i,i] = f1            A11[i,i+1] = -f2
      A21[i,a+1-i] = -f4       A21[i,a+2-i] = f3
      A12[i,j] = f1^(j-1) f3^(a-i) f4^(i-j)          for j <= i
      A22[i,a+1-k] = f1^(a-i) f2^(i-1-k) f3^k        for 0 <= k <= i-1
      B11[i,j] = f1^(j-1) f2^(i-j) f3^(a-i)          for j <= i
      B12[i,i] = -f1           B12[i,i+1] = f4
      B21[i,a+1-k] = f1^(a-i) f3^k f4^(i-1-k)        for 0 <= k <= i-1
      B22[i,a+1-i] = f2        B22[i,a+2-i] = -f3
    """
    if kind not in BLOCK_KINDS:
        raise UsageError(f"unknown block kind {kind!r}")
    if a < 2:
        raise UsageError(f"construction parameter must be >= 2, got {a}")
    f1, f2, f3, f4 = F.fs
    zero = Polynomial.zero(F.varset, F.domain)
    E = _grid(a, a + 1, zero)
    if kind == "A11":
        for r in range(a):
            E[r][r] = f1
            E[r][r + 1] = -f2
    elif kind == "A21":
        for r in range(a):
            E[r][a - 1 - r] = -f4
            E[r][a - r] = f3
    elif kind == "A12":
        for r in range(a):
            for c in range(r + 1):
                E[r][c] = f1 ** c * f3 ** (a - 1 - r) * f4 ** (r - c)
    elif kind == "A22":
        for r in range(a):
            for k in range(r + 1):
                E[r][a - k] = f1 ** (a - 1 - r) * f2 ** (r - k) * f3 ** k
    elif kind == "B11":
        for r in range(a):
            for c in range(r + 1):
                E[r][c] = f1 ** c * f2 ** (r - c) * f3 ** (a - 1 - r)
    elif kind == "B12":
        for r in range(a):
            E[r][r] = -f1
            E[r][r + 1] = f4
    elif kind == "B21":
        for r in range(a):
            for k in range(r + 1):
                E[r][a - k] = f1 ** (a - 1 - r) * f3 ** k * f4 ** (r - k)
    elif kind == "B22":
        for r in range(a):
            E[r][a - 1 - r] = f2
            E[r][a - r] = -f3
    M = GradedMatrix(E, F.varset, F.domain)
    delta = F.delta
    if delta is not None:
        ent = delta if kind in ("A11", "A21", "B12", "B22") else (a - 1) * delta
        M = M.with_degrees([0] * a, [-ent] * (a + 1))
    return M


def _vstack(top: GradedMatrix, bottom: GradedMatrix) -> GradedMatrix:
    if top.cols != bottom.cols:
        raise UsageError("column mismatch in vertical stack")
    return GradedMatrix(top.entries + bottom.entries, top.varset, top.domain)


def _hstack(left: GradedMatrix, right: GradedMatrix) -> GradedMatrix:
    if left.rows != right.rows:
        raise UsageError("row mismatch in horizontal stack")
    entries = tuple(l + r for l, r in zip(left.entries, right.entries))
    return GradedMatrix(entries, left.varset, left.domain)


def infer_degrees(M: GradedMatrix, anchor: int = 0) -> GradedMatrix:
    """Assign the unique (up to shift) consistent generator degrees, anchored
    so the minimum degree over rows and columns is `anchor`.  Fails when an
    entry is inhomogeneous or the constraints conflict."""
    if M.rows == 0 or M.cols == 0:
        return M.with_degrees([anchor] * M.rows, [anchor] * M.cols)
    # nodes: ('r', i) and ('c', j); edge constraint src_i - tgt_j = deg(entry)
    deg: dict = {}
    adj: dict = {}
    for i, row in enumerate(M.entries):
        for j, p in enumerate(row):
            if p.is_zero:
                continue
            d = p.homogeneous_degree()
            if d is None:
                raise UsageError(f"entry ({i},{j}) is not homogeneous; degrees undefined")
            adj.setdefault(("r", i), []).append((("c", j), d))
            adj.setdefault(("c", j), []).append((("r", i), -d))
    nodes = [("r", i) for i in range(M.rows)] + [("c", j) for j in range(M.cols)]
    for start in nodes:
        if start in deg:
            continue
        deg[start] = 0
        stack = [start]
        while stack:
            u = stack.pop()
            for v, d in adj.get(u, ()):  # src - tgt = d  <=>  tgt = src - d
                want = deg[u] - d
                if v in deg:
                    if deg[v] != want:
                        raise IntegrityError(f"inconsistent degree constraints at {v}")
                else:
                    deg[v] = want
                    stack.append(v)
    shift = anchor - min(deg.values())
    src = [deg[("r", i)] + shift for i in range(M.rows)]
    tgt = [deg[("c", j)] + shift for j in range(M.cols)]
    return M.with_degrees(src, tgt)


def assemble(which: str, a: int, F: SequenceF) -> GradedMatrix:
    """Assembled matrices:

      A  = [[A11, A12], [A21, A22]]            2a x 2(a+1)
      B  = [[B11, B12], [B21, B22]]^T           2(a+1) x 2a
      A'  = [A11; A21]   A'' = [A12; A22]       2a x (a+1)
      B'  = [B12; B22]^T B''  = [B11; B21]^T    (a+1) x 2a
      C  (a-1) x 2a:  C[i,i] = f4, C[i,i+1] = -f3, C[i,2a-i] = -f2, C[i,2a-i+1] = f1
      D  = (D^T)^T, D^T[i,i] = -f2, D^T[i,i+1] = f3, D^T[i,2a-i] = f4, D^T[i,2a-i+1] = -f1
    """
    if which not in ASSEMBLED:
        raise UsageError(f"unknown assembled matrix {which!r}")
    if a < 2:
        raise UsageError(f"construction parameter must be >= 2, got {a}")
    f1, f2, f3, f4 = F.fs
    zero = Polynomial.zero(F.varset, F.domain)
    blk = lambda k: block(k, a, F)
    if which == "A":
        M = _vstack(_hstack(blk("A11"), blk("A12")), _hstack(blk("A21"), blk("A22")))
    elif which == "B":
        M = _vstack(_hstack(blk("B11"), blk("B12")), _hstack(blk("B21"), blk("B22"))).transpose()
    elif which == "Aprime":
        M = _vstack(blk("A11"), blk("A21"))
    elif which == "Adblprime":
        M = _vstack(blk("A12"), blk("A22"))
    elif which == "Bprime":
        M = _vstack(blk("B12"), blk("B22")).transpose()
    elif which == "Bdblprime":
        M = _vstack(blk("B11"), blk("B21")).transpose()
    elif which == "C":
        E = _grid(a - 1, 2 * a, zero)
        for r in range(a - 1):
            E[r][r] = f4
            E[r][r + 1] = -f3
            E[r][2 * a - 2 - r] = -f2
            E[r][2 * a - 1 - r] = f1
        M = GradedMatrix(E, F.varset, F.domain)
    else:  # D, stored directly as the 2a x (a-1) matrix the complexes consume
        E = _grid(a - 1, 2 * a, zero)
        for r in range(a - 1):
            E[r][r] = -f2
            E[r][r + 1] = f3
            E[r][2 * a - 2 - r] = f4
            E[r][2 * a - 1 - r] = -f1
        M = GradedMatrix(E, F.varset, F.domain).transpose()
    if F.delta is not None:
        M = infer_degrees(M)
    return M


def sigma_images(domain: Domain = ZZ) -> dict[str, Polynomial]:
    v = lambda n: Polynomial.variable(GENERIC_VARS, n, domain)
    return {"f1": -v("f1"), "f2": -v("f4"), "f3": -v("f3"), "f4": -v("f2")}


def apply_sigma(M: GradedMatrix) -> GradedMatrix:
    """Entrywise substitution (f1,f2,f3,f4) -> (-f1,-f4,-f3,-f2); generic mode only."""
    if M.varset != GENERIC_VARS:
        raise UsageError("apply_sigma requires entries in the generic ring Z[f1..f4]")
    images = sigma_images(M.domain)
    return M.map_entries(lambda p: p.substitute(images) if not p.is_zero else p)


# signed permutation equivalence ----------------------------------------

@dataclass(frozen=True)
class SignedPermWitness:
    """Witness for N[i][j] == row_signs[i] * col_signs[j] * M[row_perm[i]][col_perm[j]]."""

    row_perm: tuple[int, ...]
    row_signs: tuple[int, ...]
    col_perm: tuple[int, ...]
    col_signs: tuple[int, ...]

    def verify(self, M: GradedMatrix, N: GradedMatrix) -> bool:
        for i in range(N.rows):
            for j in range(N.cols):
                e = M.entries[self.row_perm[i]][self.col_perm[j]]
                s = self.row_signs[i] * self.col_signs[j]
                if (e.scale(s) if s != 1 else e) != N.entries[i][j]:
                    return False
        return True

    def json_dict(self) -> dict:
        return {
            "rowPerm": list(self.row_perm),
            "rowSigns": list(self.row_signs),
            "colPerm": list(self.col_perm),
            "colSigns": list(self.col_signs),
        }


def _sign_normalized_text(p: Polynomial) -> str:
    if p.is_zero:
        return "0"
    lead = p.sorted_terms()[0][1]
    if p.domain.kind != "GF" and lead < 0:
        p = -p
    return p.text()


def _signature(line: Sequence[Polynomial]) -> tuple:
    return tuple(sorted(_sign_normalized_text(p) for p in line))


def _solve_signs(M: GradedMatrix, N: GradedMatrix, rperm, cperm):
    """Find signs eps, del with N[i][j] = eps_i del_j M[rperm[i]][cperm[j]], or None."""
    rows, cols = N.rows, N.cols
    ratio = {}
    for i in range(rows):
        for j in range(cols):
            m = M.entries[rperm[i]][cperm[j]]
            n = N.entries[i][j]
            if m.is_zero != n.is_zero:
                return None
            if m.is_zero:
                continue
            if m == n:
                ratio[(i, j)] = 1
            elif -m == n:
                ratio[(i, j)] = -1
            else:
                return None
    eps = [0] * rows
    dlt = [0] * cols
    by_row = {}
    by_col = {}
    for (i, j), r in ratio.items():
        by_row.setdefault(i, []).append((j, r))
        by_col.setdefault(j, []).append((i, r))
    for i0 in range(rows):
        if eps[i0]:
            continue
        eps[i0] = 1
        stack = [("r", i0)]
        while stack:
            kind, k = stack.pop()
            if kind == "r":
                for j, r in by_row.get(k, ()):  # eps_k * dlt_j = r
                    want = r * eps[k]
                    if dlt[j] == 0:
                        dlt[j] = want
                        stack.append(("c", j))
                    elif dlt[j] != want:
                        return None
            else:
                for i, r in by_col.get(k, ()):  # eps_i * dlt_k = r
                    want = r * dlt[k]
                    if eps[i] == 0:
                        eps[i] = want
                        stack.append(("r", i))
                    elif eps[i] != want:
                        return None
    eps = [e or 1 for e in eps]
    dlt = [d or 1 for d in dlt]
    return tuple(eps), tuple(dlt)


def _perm_candidates(sigs_m: list, sigs_n: list) -> list[list[int]] | None:
    """candidates[i] = indices k of M-lines with the same signature as N-line i."""
    from collections import Counter
    if Counter(sigs_m) != Counter(sigs_n):
        return None
    return [[k for k, s in enumerate(sigs_m) if s == sig] for sig in sigs_n]


def signed_perm_equiv(M: GradedMatrix, N: GradedMatrix, max_nodes: int = 200_000) -> SignedPermWitness | None:
    """Search for a signed permutation witness; None if dimensions differ or
    the bounded backtracking search fails.  Exploits the per-line monomial
    support signatures, which are (near-)unique for the assembled matrices."""
    if (M.rows, M.cols) != (N.rows, N.cols):
        return None
    row_cand = _perm_candidates([_signature(r) for r in M.entries],
                                [_signature(r) for r in N.entries])
    mt, nt = M.transpose(), N.transpose()
    col_cand = _perm_candidates([_signature(c) for c in mt.entries],
                                [_signature(c) for c in nt.entries])
    if row_cand is None or col_cand is None:
        return None
    nodes = 0

    def backtrack(cands, used, chosen):
        nonlocal nodes
        if len(chosen) == len(cands):
            yield tuple(chosen)
            return
        i = len(chosen)
        for k in cands[i]:
            if k in used:
                continue
            nodes += 1
            if nodes > max_nodes:
                return
            used.add(k)
            chosen.append(k)
            yield from backtrack(cands, used, chosen)
            chosen.pop()
            used.discard(k)

    for rperm in backtrack(row_cand, set(), []):
        for cperm in backtrack(col_cand, set(), []):
            signs = _solve_signs(M, N, rperm, cperm)
            if signs is not None:
                w = SignedPermWitness(rperm, signs[0], cperm, signs[1])
                assert w.verify(M, N)
                return w
        if nodes > max_nodes:
            return None
    return None
