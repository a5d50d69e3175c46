"""Polynomial arithmetic, parsing, and the canonical text form."""

import random

import pytest

from resolvitor.errors import ParseError, UsageError
from resolvitor.polyring import (GF, QQ, ZZ, Polynomial, VarSet, monomials_of_degree,
                                 parse_poly)

VS4 = VarSet(("x0", "x1", "x2", "x3"))
VS6 = VarSet(("x1", "x2", "x3", "y1", "y2", "y3"))


def test_varset_validation():
    with pytest.raises(UsageError):
        VarSet(())
    with pytest.raises(UsageError):
        VarSet(("a", "a"))
    assert VS4.index("x2") == 2
    assert "x3" in VS4 and "z" not in VS4


def test_monomials_of_degree_count_and_order():
    mons = monomials_of_degree(VS4, 3)
    assert len(mons) == 20
    assert all(sum(m) == 3 for m in mons)
    assert len(set(mons)) == len(mons)


def test_basic_arithmetic():
    x0 = Polynomial.variable(VS4, "x0")
    x1 = Polynomial.variable(VS4, "x1")
    p = (x0 + x1) * (x0 - x1)
    assert p == x0 * x0 - x1 * x1
    assert (p - p).is_zero
    assert (x0 ** 3).total_degree() == 3
    assert p.homogeneous_degree() == 2
    assert (p + Polynomial.constant(VS4, 5)).homogeneous_degree() is None


def test_gf_arithmetic_wraps():
    dom = GF(7)
    x0 = Polynomial.variable(VS4, "x0", dom)
    assert (x0.scale(3) + x0.scale(4)).is_zero


def test_substitute_is_ring_hom():
    rng = random.Random(11)
    x = [Polynomial.variable(VS4, n) for n in VS4.names]
    images = {n: x[(i + 1) % 4] * x[i] - x[i] for i, n in enumerate(VS4.names)}
    for _ in range(20):
        p = _random_poly(rng, VS4, ZZ)
        q = _random_poly(rng, VS4, ZZ)
        assert (p * q).substitute(images) == p.substitute(images) * q.substitute(images)
        assert (p + q).substitute(images) == p.substitute(images) + q.substitute(images)


def test_substitute_requires_all_images():
    x0 = Polynomial.variable(VS4, "x0")
    with pytest.raises(UsageError):
        (x0 * x0).substitute({})


def test_parse_simple():
    p = parse_poly("x0*x3-x1*x2", VS4)
    assert p.text() == "-x1*x2+x0*x3"
    assert parse_poly(p.text(), VS4) == p
    assert parse_poly("-(x0-x1)^2", VS4) == -(
        (Polynomial.variable(VS4, "x0") - Polynomial.variable(VS4, "x1")) ** 2)
    assert parse_poly("3", VS4).constant_term() == 3


def test_parse_errors_carry_offsets():
    with pytest.raises(ParseError) as e:
        parse_poly("x0+z", VS4)
    assert "offset" in str(e.value)
    with pytest.raises(ParseError):
        parse_poly("(x0+x1", VS4)
    with pytest.raises(ParseError):
        parse_poly("x0 x1", VS4)
    with pytest.raises(ParseError):
        parse_poly("", VS4)


def test_parse_rational_literals():
    p = parse_poly("1/2*x0+1/2*x0", VS4, QQ)
    assert p == Polynomial.variable(VS4, "x0", QQ)
    with pytest.raises(ParseError):
        parse_poly("1/2*x0", VS4, ZZ)


def _random_poly(rng, vs, domain, max_terms=6, max_deg=4, max_coeff=50):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        m = [0] * len(vs)
        for _ in range(rng.randint(0, max_deg)):
            m[rng.randrange(len(vs))] += 1
        c = rng.randint(-max_coeff, max_coeff)
        if c:
            terms[tuple(m)] = terms.get(tuple(m), 0) + c
    return Polynomial(vs, domain, terms)


@pytest.mark.parametrize("vs", [VS4, VS6], ids=["4vars", "6vars"])
def test_parse_print_round_trip(vs):
    rng = random.Random(20260826)
    for _ in range(600):
        p = _random_poly(rng, vs, ZZ)
        assert parse_poly(p.text(), vs, ZZ) == p
