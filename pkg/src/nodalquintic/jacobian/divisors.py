"""Divisors of functions on y^2 = f(w), tame symbols and the Gersten maps.

Functions on the curve are products of factors (a(w) + b(w) Y)^e. Their
divisors are read off the norm a^2 - b^2 f factored over Q or F_p, with the
two places at infinity (sextic, square leading coefficient) separated by
looking for cancellation of leading terms.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

import sympy

from ..errors import DegenerateError, ParameterError

W = sympy.Symbol("w")
T = sympy.Symbol("t")


# ---------------------------------------------------------- base fields

class _Base:
    """Coefficient handling for Q (p = None) or F_p."""

    def __init__(self, p: int | None):
        self.p = p

    def poly(self, coeffs: Sequence, var=W) -> sympy.Poly:
        cs = [sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) if self.p is None
              else int(Fraction(c).numerator * pow(Fraction(c).denominator, -1, self.p)) % self.p
              for c in coeffs]
        if self.p is None:
            return sympy.Poly(list(reversed(cs)) or [0], var, domain="QQ")
        return sympy.Poly(list(reversed(cs)) or [0], var, modulus=self.p)

    def key(self, P: sympy.Poly) -> tuple:
        cs = list(reversed(P.all_coeffs()))
        if self.p is None:
            return tuple(Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in cs)
        return tuple(int(c) % self.p for c in cs)

    def elem(self, c):
        if self.p is None:
            return Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
        return int(c) % self.p

    def sqrt(self, c):
        """Square root in the base field, or None."""
        if self.p is None:
            c = Fraction(c)
            if c < 0:
                return None
            n, d = isqrt(c.numerator), isqrt(c.denominator)
            if n * n == c.numerator and d * d == c.denominator:
                return Fraction(n, d)
            return None
        c = int(c) % self.p
        if c == 0:
            return 0
        if pow(c, (self.p - 1) // 2, self.p) != 1:
            return None
        return min(r for r in range(self.p) if r * r % self.p == c)

    def neg(self, c):
        return -c if self.p is None else (-c) % self.p

    def factor(self, P: sympy.Poly) -> list[tuple[sympy.Poly, int]]:
        _, facs = P.factor_list()
        return [(f.monic(), e) for f, e in facs]


def _ord(P: sympy.Poly, pi: sympy.Poly) -> int | None:
    if P.is_zero:
        return None
    k = 0
    while True:
        q, r = P.div(pi)
        if not r.is_zero:
            return k
        P, k = q, k + 1


# ---------------------------------------------------------- places, divisors

@dataclass(frozen=True)
class Place:
    """A closed point of the curve.

    ``kind`` is "pt" (affine place with Y = rho(w) mod pi), "fib" (the whole
    fiber over pi when it is not known to split) or "inf" (point at infinity,
    ``rho`` holding the limit of Y / w^3, or None for the unique place).
    """

    kind: str
    pi: tuple
    rho: tuple | None
    degree: int

    def __repr__(self):
        if self.kind == "inf":
            return f"inf[{self.rho[0] if self.rho else ''}]"
        if self.kind == "pt" and len(self.pi) == 2:
            return f"({-self.pi[0]}, {self.rho[0] if self.rho else 0})"
        return f"{self.kind}(pi={self.pi}, rho={self.rho})"


class Divisor(dict):
    """Formal sum of places (Place -> multiplicity)."""

    def degree(self) -> int:
        return sum(m * P.degree for P, m in self.items())

    def __add__(self, other: "Divisor") -> "Divisor":
        out = Divisor(self)
        for P, m in other.items():
            out[P] = out.get(P, 0) + m
        return Divisor({P: m for P, m in out.items() if m})

    def __neg__(self) -> "Divisor":
        return Divisor({P: -m for P, m in self.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __mul__(self, k: int) -> "Divisor":
        return Divisor({P: k * m for P, m in self.items() if k * m})

    __rmul__ = __mul__

    def points(self) -> dict:
        """Rational affine points and infinite places, keyed for display."""
        return {repr(P): m for P, m in self.items()}

    def is_zero(self) -> bool:
        return not any(self.values())


@dataclass(frozen=True)
class CurveFunction:
    """Product of factors (a + b Y)^e, with a, b coefficient lists in w."""

    factors: tuple

    @classmethod
    def of(cls, a: Sequence, b: Sequence = (), e: int = 1) -> "CurveFunction":
        return cls(((tuple(a), tuple(b), e),))

    @classmethod
    def one(cls) -> "CurveFunction":
        return cls(())

    def __mul__(self, other: "CurveFunction") -> "CurveFunction":
        return CurveFunction(self.factors + other.factors)

    def __truediv__(self, other: "CurveFunction") -> "CurveFunction":
        return CurveFunction(self.factors + tuple((a, b, -e) for a, b, e in other.factors))

    def __pow__(self, k: int) -> "CurveFunction":
        return CurveFunction(tuple((a, b, e * k) for a, b, e in self.factors))


class FunctionField:
    """The curve y^2 = f(w) over Q (p = None) or F_p, deg f in {5, 6}."""

    def __init__(self, f: Sequence, p: int | None = None):
        self.base = _Base(p)
        self.f = self.base.poly(f)
        if self.f.degree() not in (5, 6):
            raise ParameterError("deg f must be 5 or 6")
        if sympy.gcd(self.f, self.f.diff(W)).degree() > 0:
            raise DegenerateError("f is not square-free")
        self.lc = self.base.elem(self.f.LC())
        self._s = self.base.sqrt(self.lc) if self.f.degree() == 6 else None

    # -- infinity
    def infinite_places(self) -> list[Place]:
        if self.f.degree() == 5:
            return [Place("inf", (), None, 1)]
        if self._s is None:
            return [Place("inf", (), None, 2)]
        s = self._s
        return [Place("inf", (), (s,), 1), Place("inf", (), (self.base.neg(s),), 1)]

    def _infinity_orders(self, a: sympy.Poly, b: sympy.Poly, finite_degree: int) -> Divisor:
        da = a.degree() if not a.is_zero else None
        db = b.degree() if not b.is_zero else None
        out = Divisor()
        if self.f.degree() == 5:
            cands = [o for o in ((-2 * da) if da is not None else None,
                                 (-2 * db - 5) if db is not None else None) if o is not None]
            out[self.infinite_places()[0]] = min(cands)
            return out
        top = max(d for d in (da, None if db is None else db + 3) if d is not None)
        places = self.infinite_places()
        if len(places) == 1:
            out[places[0]] = -top
            return out
        if da is not None and db is not None and da == db + 3:
            la, lb = self.base.elem(a.LC()), self.base.elem(b.LC())
            for P in places:
                s = P.rho[0]
                total = la + lb * s
                if (total if self.base.p is None else total % self.base.p) == 0:
                    other = [Q for Q in places if Q != P][0]
                    out[other] = -top
                    out[P] = -finite_degree + top
                    return out
        for P in places:
            out[P] = -top
        return out

    # -- finite part
    def _pt(self, pi: sympy.Poly, rho: sympy.Poly) -> Place:
        return Place("pt", self.base.key(pi), self.base.key(rho.rem(pi)), pi.degree())

    def divisor_of(self, a: Sequence, b: Sequence = ()) -> Divisor:
        """div(a + b Y)."""
        A, B = self.base.poly(a), self.base.poly(b)
        if A.is_zero and B.is_zero:
            raise DegenerateError("the zero function has no divisor")
        N = A * A - B * B * self.f
        if N.is_zero:
            raise DegenerateError("the zero function has no divisor")
        out = Divisor()
        finite_degree = 0
        for pi, e in self.base.factor(N):
            if pi.degree() == 0:
                continue
            oa, ob = _ord(A, pi), _ord(B, pi)
            k = min(o for o in (oa, ob) if o is not None)
            if self.f.rem(pi).is_zero:
                out[self._pt(pi, pi * 0)] = e
            elif e == 2 * k:
                out[Place("fib", self.base.key(pi), None, 2 * pi.degree())] = k
            else:
                a1 = A.exquo(pi**k) if k else A
                b1 = B.exquo(pi**k) if k else B
                rho = (-a1 * b1.invert(pi)).rem(pi)
                out[self._pt(pi, rho)] = out.get(self._pt(pi, rho), 0) + e - k
                if k:
                    out[self._pt(pi, -rho)] = out.get(self._pt(pi, -rho), 0) + k
            finite_degree += e * pi.degree()
        out = out + self._infinity_orders(A, B, finite_degree)
        return self.canonical(out)

    def divisor_of_function(self, F: CurveFunction) -> Divisor:
        total = Divisor()
        for a, b, e in F.factors:
            total = total + self.divisor_of(a, b) * e
        return self.canonical(total)

    def canonical(self, D: Divisor) -> Divisor:
        """Split fibers into their two places whenever the split is known."""
        known: dict[tuple, tuple] = {}
        for P in D:
            if P.kind == "pt" and any(P.rho):
                known.setdefault(P.pi, P.rho)
        out = Divisor()
        for P, m in D.items():
            if P.kind != "fib":
                out[P] = out.get(P, 0) + m
                continue
            rho = known.get(P.pi)
            if rho is None and len(P.pi) == 2:
                x = -P.pi[0] if self.base.p is None else (-P.pi[0]) % self.base.p
                val = self.f.eval(sympy.Rational(x.numerator, x.denominator)
                                  if self.base.p is None else x)
                r = self.base.sqrt(self.base.elem(val))
                if r is not None:
                    rho = (r,)
            if rho is None:
                out[P] = out.get(P, 0) + m
                continue
            pi = self.base.poly(P.pi)
            rp = self.base.poly(rho)
            for sign in (1, -1):
                Q = self._pt(pi, rp * sign)
                out[Q] = out.get(Q, 0) + m
        return Divisor({P: m for P, m in out.items() if m})


def divisor_of_function(f: Sequence, expr: CurveFunction, p: int | None = None) -> Divisor:
    return FunctionField(f, p).divisor_of_function(expr)


# ---------------------------------------------------------- tame symbols on P^1

def _p1_poly(expr, p: int | None) -> tuple[sympy.Poly, sympy.Poly]:
    num, den = sympy.fraction(sympy.together(sympy.sympify(expr)))
    kw = {"modulus": p} if p else {"domain": "QQ"}
    return sympy.Poly(num, T, **kw), sympy.Poly(den, T, **kw)


def _ord_p1(expr, place, p: int | None) -> int:
    num, den = _p1_poly(expr, p)
    if num.is_zero:
        raise DegenerateError("order of the zero function")
    if place == "inf":
        return den.degree() - num.degree()
    return _ord(num, place) - _ord(den, place)


def _as_place(place, p: int | None):
    if place == "inf":
        return "inf"
    kw = {"modulus": p} if p else {"domain": "QQ"}
    if isinstance(place, sympy.Poly):
        return place.monic()
    return sympy.Poly(T - place, T, **kw)


def tame_symbol(f, g, place, p: int | None = None):
    """(-1)^(ab) f^b / g^a at a place of P^1, a = ord f, b = ord g.

    ``place`` is a base-field value t0, the string "inf", or a monic
    irreducible sympy Poly in t. The result is a base-field element for
    degree-one places and a residue polynomial (coefficients) otherwise.
    """
    place = _as_place(place, p)
    a, b = _ord_p1(f, place, p), _ord_p1(g, place, p)
    u = sympy.together(sympy.sympify(f) ** b / sympy.sympify(g) ** a * (-1) ** (a * b))
    if place == "inf":
        u = sympy.together(u.subs(T, 1 / T))
        place = _as_place(0, p)
    num, den = _p1_poly(u, p)
    rn, rd = num.rem(place), den.rem(place)
    if rd.is_zero or rn.is_zero:
        raise AssertionError("tame symbol is not a unit at the place")
    val = (rn * rd.invert(place)).rem(place)
    base = _Base(p)
    if place.degree() == 1:
        return base.elem(val.eval(0) if not val.is_zero else 0)
    return base.key(val)


def _places_of(exprs, p: int | None) -> list:
    out = ["inf"]
    seen = set()
    for e in exprs:
        num, den = _p1_poly(e, p)
        for P in (num, den):
            if P.degree() <= 0:
                continue
            for fac, _ in P.factor_list()[1]:
                fac = fac.monic()
                k = tuple(fac.all_coeffs())
                if k not in seen:
                    seen.add(k)
                    out.append(fac)
    return out


def weil_reciprocity_product(f, g, p: int | None = None):
    """Product over all places of P^1 of the norm of the tame symbol (= 1)."""
    kw = {"modulus": p} if p else {"domain": "QQ"}
    total = sympy.Integer(1)
    for place in _places_of([f, g], p):
        pl = _as_place(place, p) if place != "inf" else "inf"
        a, b = _ord_p1(f, pl, p), _ord_p1(g, pl, p)
        if a == 0 and b == 0:
            continue
        u = sympy.together(sympy.sympify(f) ** b / sympy.sympify(g) ** a * (-1) ** (a * b))
        if pl == "inf":
            u = sympy.together(u.subs(T, 1 / T))
            pl = sympy.Poly(T, T, **kw)
        num, den = _p1_poly(u, p)
        total = total * sympy.resultant(pl, num) / sympy.resultant(pl, den)
    total = sympy.nsimplify(total)
    if p:
        n, d = sympy.fraction(total)
        return int(n) * pow(int(d), -1, p) % p
    return Fraction(int(sympy.fraction(total)[0]), int(sympy.fraction(total)[1]))


# ---------------------------------------------------------- Gersten maps on P^2

def _normalize_point(v) -> tuple:
    v = [Fraction(x) for x in v]
    for x in v:
        if x != 0:
            return tuple(y / x for y in v)
    raise DegenerateError("zero vector is not a point")


def _normalize_line(l) -> tuple:
    return _normalize_point(l)


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _form_exponents(fn: Iterable) -> dict:
    out: dict = defaultdict(int)
    for form, e in fn:
        out[_normalize_line(form)] += e
    out = {k: v for k, v in out.items() if v}
    if sum(out.values()) != 0:
        raise ParameterError("a rational function on P^2 needs total degree 0")
    return out


def gersten_d2(f: Iterable, g: Iterable) -> dict:
    """Tame symbols of {f, g} along every line, for f, g products of linear
    forms [(form, exponent), ...] on P^2 (constants dropped). Each symbol is
    returned as its exponent map {form: n} on the line (a function on P^1)."""
    ef, eg = _form_exponents(f), _form_exponents(g)
    out = {}
    for C in set(ef) | set(eg):
        a, b = ef.get(C, 0), eg.get(C, 0)
        if a == 0 and b == 0:
            continue
        sym: dict = defaultdict(int)
        for form in set(ef) | set(eg):
            if form == C:
                continue
            n = b * ef.get(form, 0) - a * eg.get(form, 0)
            if n:
                sym[form] += n
        out[C] = dict(sym)
    return out


def gersten_d1(symbols: dict) -> dict:
    """Sum over lines C of the divisor on C of each tame-symbol function."""
    total: dict = defaultdict(int)
    for C, sym in symbols.items():
        for form, n in sym.items():
            P = _normalize_point(_cross(C, form))
            total[P] += n
    return {P: n for P, n in total.items() if n}


def d1_d2(f: Iterable, g: Iterable) -> dict:
    """d_1(d_2{f, g}); the Gersten complex forces this to be empty."""
    f, g = list(f), list(g)
    return gersten_d1(gersten_d2(f, g))
