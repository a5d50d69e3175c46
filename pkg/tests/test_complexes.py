"""Complex wiring, degree propagation, Betti tables, duals, and the
locally-linear classification."""

import pytest

from resolvitor.complexes import (BettiTable, FreeComplex, LocalLinearProfile,
                                  betti_table, build_complex, compose_check,
                                  locally_linear_classify, minimality_check)
from resolvitor.constructions import SequenceF
from resolvitor.errors import UsageError
from resolvitor.polyring import VarSet, ZZ, parse_poly


def _seq(*texts, names=("x0", "x1", "x2", "x3")):
    vs = VarSet(names)
    return SequenceF(*(parse_poly(t, vs, ZZ) for t in texts))


def test_build_complex_ranks_and_degrees():
    F = _seq("x0", "x1", "x2", "x3")
    X = build_complex("CFULL", 3, F)
    assert [r for r, _ in X.modules] == [2, 6, 8, 6, 2]
    assert [d for _, d in X.modules] == [
        (5, 5), (4,) * 6, (3, 3, 3, 3, 2, 2, 2, 2), (1,) * 6, (0, 0)]
    assert X.is_graded and minimality_check(X)


def test_build_complex_base_degree():
    F = _seq("x0", "x1", "x2", "x3")
    X = build_complex("C1", 2, F, base_degree=6)
    assert [d for _, d in X.modules] == [(6,), (5,) * 4, (4, 4, 4)]


def test_unknown_complex_rejected():
    with pytest.raises(UsageError):
        build_complex("C3", 2, _seq("x0", "x1", "x2", "x3"))


def test_compose_check_reports_positions():
    F = _seq("x0", "x1", "x2", "x3")
    X = build_complex("D1", 2, F)
    for entry in compose_check(X.maps):
        assert entry["zero"] and entry["nonzero_positions"] == []


def test_nonminimal_detected():
    F = _seq("x0", "1", "x2", "x3")
    X = build_complex("CFULL", 2, F)
    assert not minimality_check(X)


def test_betti_table_right_indexed():
    F = _seq("x0", "x1", "x2", "x3")
    B = betti_table(build_complex("CFULL", 3, F))
    assert B.entries[(0, 0)] == 2          # rightmost module
    assert B.entries[(4, 5)] == 2          # leftmost module
    assert B.entries[(2, 2)] == 4 and B.entries[(2, 3)] == 4
    assert B.is_palindromic(4, 5)
    assert B.rank_at(2) == 8


def test_betti_grid_renders():
    F = _seq("x0", "x1", "x2", "x3")
    grid = betti_table(build_complex("CFULL", 3, F)).grid_str()
    assert grid.splitlines()[0].split() == ["0", "1", "2", "3", "4"]
    assert "." in grid


def test_dualize_twists_and_maps():
    F = _seq("x0", "x1", "x2", "x3")
    X = build_complex("CFULL", 3, F)
    D = X.dualize(5)
    assert [r for r, _ in D.modules] == [2, 6, 8, 6, 2]
    # middle-module degree blocks come back swapped; equal as multisets
    assert [sorted(d) for _, d in D.modules] == [sorted(d) for _, d in X.modules]
    for entry in D.compose_check():
        assert entry["zero"]


def test_locally_linear_classify():
    F = _seq("x0", "x1", "x2", "x3")
    B = betti_table(build_complex("CFULL", 4, F))
    assert locally_linear_classify(B) == LocalLinearProfile(d=0, e=2, s=2, gap=2)
    # a purely linear table has no split index
    lin = BettiTable({(0, 0): 1, (1, 1): 2, (2, 2): 1})
    assert locally_linear_classify(lin) is None


def test_free_complex_rejects_mismatched_ranks():
    F = _seq("x0", "x1", "x2", "x3")
    X = build_complex("CFULL", 3, F)
    with pytest.raises(UsageError):
        FreeComplex("bad", [X.maps[0], X.maps[0]])
