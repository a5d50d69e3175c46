"""Free complexes built from the assembled matrices: wiring with generator
degrees, composition-zero validation, duals, Betti tables, minimality and
the locally-linear classification."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .constructions import GradedMatrix, SequenceF, assemble
from .errors import IntegrityError, UsageError

COMPLEX_NAMES = ("C1", "C2", "D1", "D2", "CFULL")

# map wiring per complex name, in left-to-right order
_WIRING = {
    "C1": ("C", "Aprime"),
    "D1": ("C", "Adblprime"),
    "C2": ("Bprime", "D"),
    "D2": ("Bdblprime", "D"),
    "CFULL": ("C", "A", "B", "D"),
}


class FreeComplex:
    """Ordered chain of graded matrices; map k sends module k to module k+1
    under the row-vector convention.  Consecutive compositions are validated
    to be zero at construction time."""

    def __init__(self, name: str, maps: Sequence[GradedMatrix], check: bool = True):
        if not maps:
            raise UsageError("a complex needs at least one map")
        self.name = name
        self.maps = tuple(maps)
        for k in range(len(self.maps) - 1):
            if self.maps[k].cols != self.maps[k + 1].rows:
                raise UsageError(
                    f"map {k} ends in rank {self.maps[k].cols} but map {k + 1} "
                    f"starts from rank {self.maps[k + 1].rows}")
            if self.maps[k].tgt_degrees is not None and self.maps[k + 1].src_degrees is not None:
                if self.maps[k].tgt_degrees != self.maps[k + 1].src_degrees:
                    raise IntegrityError(f"generator degrees disagree between maps {k} and {k + 1}")
        if check:
            for entry in self.compose_check():
                if not entry["zero"]:
                    raise IntegrityError(
                        f"composition of maps {entry['pair']} in {name} is nonzero "
                        f"at positions {entry['nonzero_positions'][:4]}")

    # modules ------------------------------------------------------------
    @property
    def modules(self) -> tuple[tuple[int, tuple[int, ...] | None], ...]:
        out = [(self.maps[0].rows, self.maps[0].src_degrees)]
        for m in self.maps:
            out.append((m.cols, m.tgt_degrees))
        return tuple(out)

    @property
    def is_graded(self) -> bool:
        return all(m.is_graded for m in self.maps)

    def __len__(self):
        return len(self.modules)

    def compose_check(self) -> list[dict]:
        return compose_check(self.maps)

    def dualize(self, t: int = 0) -> "FreeComplex":
        """Reverse, transpose, and send generator degree g to t - g."""
        dual_maps = []
        for m in reversed(self.maps):
            src = None if m.tgt_degrees is None else tuple(t - d for d in m.tgt_degrees)
            tgt = None if m.src_degrees is None else tuple(t - d for d in m.src_degrees)
            dual_maps.append(GradedMatrix(
                tuple(tuple(m.entries[i][j] for i in range(m.rows)) for j in range(m.cols)),
                m.varset, m.domain, src, tgt))
        return FreeComplex(f"{self.name}*", dual_maps, check=False)

    def json_dict(self) -> dict:
        return {
            "name": self.name,
            "modules": [
                {"rank": r,
                 "degrees": list(d) if d is not None else None,
                 "twists": [-x for x in d] if d is not None else None}
                for r, d in self.modules
            ],
            "maps": [m.json_dict() for m in self.maps],
        }

    def __repr__(self):
        ranks = " -> ".join(str(r) for r, _ in self.modules)
        return f"<FreeComplex {self.name}: {ranks}>"


def compose_check(maps: Sequence[GradedMatrix]) -> list[dict]:
    """Exact symbolic products of all consecutive pairs with a zero/nonzero
    verdict; nonzero entries are reported by position."""
    report = []
    for k in range(len(maps) - 1):
        prod = maps[k].matmul(maps[k + 1])
        bad = [(i, j) for i in range(prod.rows) for j in range(prod.cols)
               if not prod.entries[i][j].is_zero]
        report.append({"pair": (k, k + 1), "zero": not bad, "nonzero_positions": bad})
    return report


def propagate_degrees(src_degrees: Sequence[int], M: GradedMatrix) -> GradedMatrix:
    """Fix target generator degrees from source degrees and entry degrees."""
    tgt: list[int | None] = [None] * M.cols
    for i, row in enumerate(M.entries):
        for j, p in enumerate(row):
            if p.is_zero:
                continue
            d = p.homogeneous_degree()
            if d is None:
                raise UsageError(f"entry ({i},{j}) is not homogeneous")
            want = src_degrees[i] - d
            if tgt[j] is None:
                tgt[j] = want
            elif tgt[j] != want:
                raise IntegrityError(f"inconsistent degree for column {j}")
    if any(d is None for d in tgt):
        raise UsageError("degree propagation underdetermined (all-zero column)")
    return M.with_degrees(tuple(src_degrees), tuple(tgt))


def build_complex(name: str, a: int, F: SequenceF, base_degree: int | None = None) -> FreeComplex:
    """One of the five named complexes.  Generator degrees start at
    base_degree on the leftmost module and drop by entry degree; default
    base_degree puts the minimum generator degree at zero."""
    if name not in COMPLEX_NAMES:
        raise UsageError(f"unknown complex {name!r}; choose from {COMPLEX_NAMES}")
    mats = [assemble(w, a, F) for w in _WIRING[name]]
    if F.delta is None:
        return FreeComplex(name, mats)
    degrees = [0] * mats[0].rows
    graded = []
    for m in mats:
        m = propagate_degrees(degrees, m)
        graded.append(m)
        degrees = list(m.tgt_degrees)
    if base_degree is None:
        shift = -min(min(min(m.src_degrees), min(m.tgt_degrees)) for m in graded)
    else:
        shift = base_degree  # leftmost module was anchored at 0
    graded = [m.with_degrees([d + shift for d in m.src_degrees],
                             [d + shift for d in m.tgt_degrees]) for m in graded]
    return FreeComplex(name, graded)


class BettiTable:
    """Ranks per (homological index, generator degree); the homological
    index counts from the rightmost module of the complex."""

    def __init__(self, entries: dict[tuple[int, int], int]):
        for (i, j), r in entries.items():
            if r <= 0:
                raise UsageError(f"Betti entry ({i},{j}) must be positive")
        self.entries = dict(entries)

    def degrees_at(self, i: int) -> set[int]:
        return {j for (k, j) in self.entries if k == i}

    def rank_at(self, i: int) -> int:
        return sum(r for (k, _), r in self.entries.items() if k == i)

    @property
    def max_index(self) -> int:
        return max((i for i, _ in self.entries), default=-1)

    def is_palindromic(self, top: int, degree_sum: int) -> bool:
        """beta_{i,j} == beta_{top-i, degree_sum-j} for all entries."""
        return all(self.entries.get((top - i, degree_sum - j)) == r
                   for (i, j), r in self.entries.items())

    def grid_str(self) -> str:
        """Macaulay-style grid: columns are homological indices, rows are j - i."""
        if not self.entries:
            return "(empty Betti table)"
        cols = sorted({i for i, _ in self.entries})
        rows = sorted({j - i for i, j in self.entries})
        width = max(len(str(r)) for r in self.entries.values())
        width = max(width, max(len(str(i)) for i in cols), 1)
        head = "     " + " ".join(f"{i:>{width}}" for i in cols)
        lines = [head]
        for d in rows:
            cells = []
            for i in cols:
                r = self.entries.get((i, d + i))
                cells.append(f"{r if r is not None else '.':>{width}}")
            lines.append(f"{d:>4} " + " ".join(cells))
        return "\n".join(lines)

    def json_dict(self) -> dict:
        return {"entries": [{"index": i, "degree": j, "rank": r}
                            for (i, j), r in sorted(self.entries.items())]}

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries


def betti_table(X: FreeComplex) -> BettiTable:
    if not X.is_graded:
        raise UsageError("Betti table requires a graded complex")
    entries: dict[tuple[int, int], int] = {}
    n = len(X.modules)
    for k, (rank, degs) in enumerate(X.modules):
        i = n - 1 - k  # homological index, rightmost module is 0
        for d in degs:
            entries[(i, d)] = entries.get((i, d), 0) + 1
    return BettiTable(entries)


def minimality_check(X: FreeComplex) -> bool:
    """True iff no map entry has a unit (nonzero constant) term."""
    return all(p.constant_term() == 0 for m in X.maps for row in m.entries for p in row)


@dataclass(frozen=True)
class LocalLinearProfile:
    d: int
    e: int
    s: int
    gap: int


def locally_linear_classify(B: BettiTable) -> LocalLinearProfile | None:
    """Detect the locally linear shape: linear strands of slope one on both
    sides of a single index s carrying exactly two generator degrees.  Fully
    linear tables (no split index) return None."""
    top = B.max_index
    if top < 0:
        return None
    split = [i for i in range(top + 1) if len(B.degrees_at(i)) == 2]
    if len(split) != 1:
        return None
    s = split[0]
    if not (1 < s < top - 1 + 1):  # 1 < s < p means both strands are nonempty
        return None
    if any(len(B.degrees_at(i)) != 1 for i in range(top + 1) if i != s):
        return None
    low = sorted(B.degrees_at(s))
    d, e = low[0] - s, low[1] - s
    if d >= e:
        return None
    for i in range(0, s):
        if B.degrees_at(i) != {d + i}:
            return None
    for i in range(s + 1, top + 1):
        if B.degrees_at(i) != {e + i}:
            return None
    return LocalLinearProfile(d=d, e=e, s=s, gap=e - d)
