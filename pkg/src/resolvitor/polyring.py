"""Exact sparse multivariate polynomials over ZZ, QQ and prime fields.

Polynomials are immutable: every operation returns a new value, so they can
be shared freely between workers.  The monomial order is graded reverse
lexicographic with respect to the declaration order of the variable set;
it fixes printing, parsing round-trips and the indexing of graded pieces.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ParseError, UsageError

Exponents = tuple  # exponent vector, one entry per variable


class Domain:
    """Coefficient domain: arbitrary-precision integers ("ZZ"), rationals
    ("QQ"), or a prime field ("GF", p)."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind not in ("ZZ", "QQ", "GF"):
            raise UsageError(f"unknown coefficient domain {kind!r}")
        if kind == "GF":
            if p is None or p < 2 or not _is_prime(p):
                raise UsageError(f"GF modulus must be prime, got {p!r}")
        elif p is not None:
            raise UsageError(f"domain {kind} takes no modulus")
        self.kind = kind
        self.p = p

    def coerce(self, value):
        if self.kind == "ZZ":
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise UsageError(f"{value} is not an integer")
                return int(value)
            return int(value)
        if self.kind == "QQ":
            return Fraction(value)
        return int(value) % self.p

    @property
    def is_field(self) -> bool:
        return self.kind != "ZZ"

    def __eq__(self, other):
        return isinstance(other, Domain) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return self.kind if self.p is None else f"GF({self.p})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


ZZ = Domain("ZZ")
QQ = Domain("QQ")


@functools.lru_cache(maxsize=None)
def GF(p: int) -> Domain:
    return Domain("GF", p)


class VarSet:
    """Ordered set of variable names.  The order defines the monomial order
    and must stay fixed for the lifetime of a session."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise UsageError("variable set must be nonempty")
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UsageError(f"unknown variable {name!r}") from None

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarSet({','.join(self.names)})"


def mon_degree(m: Exponents) -> int:
    return sum(m)


def mon_mul(m1: Exponents, m2: Exponents) -> Exponents:
    return tuple(a + b for a, b in zip(m1, m2))


def grevlex_key(m: Exponents):
    """Sort key: ascending in this key == descending graded reverse lex."""
    return (-sum(m), tuple(reversed(m)))


@functools.lru_cache(maxsize=None)
def monomials_of_degree(vs: VarSet, d: int) -> tuple[Exponents, ...]:
    """All monomials of total degree d, largest first in the canonical order."""
    if d < 0:
        raise UsageError(f"degree must be nonnegative, got {d}")
    n = len(vs)

    def gen(rest: int, deg: int):
        if rest == 1:
            yield (deg,)
            return
        for e in range(deg, -1, -1):
            for tail in gen(rest - 1, deg - e):
                yield (e,) + tail

    mons = sorted(gen(n, d), key=grevlex_key)
    assert len(mons) == math.comb(d + n - 1, n - 1)
    return tuple(mons)


def mon_str(vs: VarSet, m: Exponents) -> str:
    parts = []
    for name, e in zip(vs.names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


class Polynomial:
    """Sparse exact polynomial: map from exponent vector to nonzero coefficient."""

    __slots__ = ("varset", "domain", "terms")

    def __init__(self, varset: VarSet, domain: Domain, terms: Mapping[Exponents, object]):
        clean = {}
        n = len(varset)
        for m, c in terms.items():
            if len(m) != n or any(e < 0 for e in m):
                raise UsageError(f"bad exponent vector {m} for {varset}")
            c = domain.coerce(c)
            if c != 0:
                clean[tuple(m)] = c
        self.varset = varset
        self.domain = domain
        self.terms = clean

    # constructors -----------------------------------------------------
    @staticmethod
    def zero(varset: VarSet, domain: Domain = ZZ) -> "Polynomial":
        return Polynomial(varset, domain, {})

    @staticmethod
    def constant(varset: VarSet, value, domain: Domain = ZZ) -> "Polynomial":
        return Polynomial(varset, domain, {(0,) * len(varset): value})

    @staticmethod
    def variable(varset: VarSet, name: str, domain: Domain = ZZ) -> "Polynomial":
        i = varset.index(name)
        m = tuple(1 if j == i else 0 for j in range(len(varset)))
        return Polynomial(varset, domain, {m: 1})

    @staticmethod
    def monomial(varset: VarSet, exponents: Exponents, coeff=1, domain: Domain = ZZ) -> "Polynomial":
        return Polynomial(varset, domain, {tuple(exponents): coeff})

    # queries ----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def homogeneous_degree(self) -> int | None:
        """Common degree of all terms, or None (zero or inhomogeneous)."""
        degs = {sum(m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def constant_term(self):
        return self.terms.get((0,) * len(self.varset), self.domain.coerce(0))

    def coefficient(self, m: Exponents):
        return self.terms.get(tuple(m), self.domain.coerce(0))

    def variables_used(self) -> tuple[str, ...]:
        used = [False] * len(self.varset)
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(n for n, u in zip(self.varset.names, used) if u)

    # arithmetic -------------------------------------------------------
    def _check_compatible(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise UsageError(f"expected Polynomial, got {type(other).__name__}")
        if other.varset != self.varset:
            raise UsageError("variable set mismatch")
        if other.domain != self.domain:
            raise UsageError(f"domain mismatch: {self.domain} vs {other.domain}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Polynomial(self.varset, self.domain, terms)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) - c
        return Polynomial(self.varset, self.domain, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.varset, self.domain, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mon_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return Polynomial(self.varset, self.domain, terms)

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise UsageError("negative exponent")
        result = Polynomial.constant(self.varset, 1, self.domain)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        return Polynomial(self.varset, self.domain, {m: v * self.domain.coerce(c) for m, v in self.terms.items()})

    def substitute(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Ring homomorphism sending each variable to its image."""
        if not images:
            raise UsageError("substitution requires at least one image")
        imgs = dict(images)
        target_vs = None
        for q in imgs.values():
            if target_vs is None:
                target_vs = q.varset
            elif q.varset != target_vs:
                raise UsageError("substitution images must share one variable set")
            if q.domain != self.domain:
                raise UsageError(f"domain mismatch in substitution image: {q.domain}")
        for name in self.variables_used():
            if name not in imgs:
                raise UsageError(f"no image given for variable {name!r}")
        result = Polynomial.zero(target_vs, self.domain)
        one = Polynomial.constant(target_vs, 1, self.domain)
        pow_cache: dict[tuple[str, int], Polynomial] = {}
        for m, c in self.terms.items():
            term = one.scale(c)
            for name, e in zip(self.varset.names, m):
                if e == 0:
                    continue
                key = (name, e)
                if key not in pow_cache:
                    pow_cache[key] = imgs[name] ** e
                term = term * pow_cache[key]
            result = result + term
        return result

    def change_domain(self, domain: Domain) -> "Polynomial":
        return Polynomial(self.varset, domain, self.terms)

    # output -----------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Exponents, object]]:
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]))

    def text(self) -> str:
        """Canonical text form: descending monomial order, '^' powers,
        '*' products, no redundant '+'.  Bit-exact interchange format."""
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            neg = (self.domain.kind != "GF") and c < 0
            mag = -c if neg else c
            ms = mon_str(self.varset, m)
            if not ms:
                body = str(mag)
            elif mag == 1:
                body = ms
            else:
                body = f"{mag}*{ms}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("-" if neg else "+") + body)
        return "".join(out)

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"<{self.text()} over {self.domain}>"

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.varset == other.varset
            and self.domain == other.domain
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.varset, self.domain, frozenset(self.terms.items())))


# parser ---------------------------------------------------------------
#
# expr   := ['-'] term (('+' | '-') term)*
# term   := factor ('*' factor)*
# factor := base ['^' nat]
# base   := ident | number | '(' expr ')'
# number := nat ['/' nat]          (the '/' form only for literal rationals)


class _Parser:
    def __init__(self, text: str, varset: VarSet, domain: Domain):
        self.text = text
        self.pos = 0
        self.varset = varset
        self.domain = domain

    def fail(self, message: str):
        raise ParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.fail("expected a number")
        return int(self.text[start:self.pos])

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        ch = self.text[self.pos]
        if not (ch.isalpha() or ch == "_"):
            self.fail("expected an identifier")
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def base(self) -> Polynomial:
        ch = self.peek()
        if ch == "(":
            self.eat("(")
            p = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
            return p
        if ch.isdigit():
            start = self.pos
            num = self.nat()
            if self.peek() == "/":
                self.pos += 1
                den = self.nat()
                if den == 0:
                    self.pos = start
                    self.fail("zero denominator")
                if self.domain.kind == "QQ":
                    return Polynomial.constant(self.varset, Fraction(num, den), self.domain)
                if self.domain.kind == "GF":
                    inv = pow(den % self.domain.p, -1, self.domain.p)
                    return Polynomial.constant(self.varset, num * inv, self.domain)
                if num % den:
                    self.pos = start
                    self.fail(f"{num}/{den} is not an integer")
                return Polynomial.constant(self.varset, num // den, self.domain)
            return Polynomial.constant(self.varset, num, self.domain)
        if ch.isalpha() or ch == "_":
            start = self.pos
            name = self.ident()
            if name not in self.varset:
                self.pos = start
                self.fail(f"unknown identifier {name!r}")
            return Polynomial.variable(self.varset, name, self.domain)
        self.fail("expected a factor")

    def factor(self) -> Polynomial:
        p = self.base()
        if self.peek() == "^":
            self.pos += 1
            e = self.nat()
            p = p ** e
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek() == "*":
            self.pos += 1
            p = p * self.factor()
        return p

    def expr(self) -> Polynomial:
        negate = False
        if self.peek() == "-":
            self.pos += 1
            negate = True
        p = self.term()
        if negate:
            p = -p
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                p = p + self.term()
            elif ch == "-":
                self.pos += 1
                p = p - self.term()
            else:
                return p

    def parse(self) -> Polynomial:
        p = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.fail("unexpected trailing input")
        return p


def parse_poly(text: str, varset: VarSet, domain: Domain = ZZ) -> Polynomial:
    """Parse a polynomial expression.  parse_poly(p.text()) == p for every
    canonical polynomial p over the same variable set and domain."""
    return _Parser(text, varset, domain).parse()
