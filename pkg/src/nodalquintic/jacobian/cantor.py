"""Mumford representation and Cantor's algorithm on imaginary genus-2 models."""

from __future__ import annotations

import random as _random
from dataclasses import dataclass

from ..errors import DomainError, ParameterError, PrecisionError
from ..kernels.fields import FFElem
from ..kernels.padic import PadicNum
from ..kernels.upoly import UPoly, xgcd
from .curve import HyperCurve


def _is_zero(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else c == 0


def _min_prec(polys) -> int | None:
    precs = [c.prec for g in polys for c in g.coeffs if isinstance(c, PadicNum)]
    return min(precs) if precs else None


@dataclass(frozen=True, eq=False)
class MumfordDivisor:
    """Reduced divisor class (u, v): u monic, deg v < deg u <= 2, u | v^2 - f."""

    curve: HyperCurve
    u: UPoly
    v: UPoly

    def __post_init__(self):
        if self.curve.degree != 5:
            raise DomainError("Cantor arithmetic is implemented for quintic (imaginary) models only")

    def check(self) -> bool:
        u, v = self.u, self.v
        if u.deg() > 2 or (not v.is_zero() and v.deg() >= u.deg()):
            return False
        if not _is_zero(u.lc() - u.one):
            return False
        return ((v * v - self.curve.f) % u).is_zero()

    @property
    def degree(self) -> int:
        return self.u.deg()

    def is_identity(self) -> bool:
        return self.u.deg() == 0

    def __eq__(self, other):
        if not isinstance(other, MumfordDivisor):
            return NotImplemented
        return self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u, self.v))

    def __add__(self, other: "MumfordDivisor") -> "MumfordDivisor":
        return cantor_add(self, other)

    def __neg__(self) -> "MumfordDivisor":
        return negate(self)

    def __sub__(self, other: "MumfordDivisor") -> "MumfordDivisor":
        return cantor_add(self, negate(other))

    def __rmul__(self, n: int) -> "MumfordDivisor":
        return scalar_mul(n, self)

    def __repr__(self):
        return f"MumfordDivisor(u={self.u!r}, v={self.v!r})"


def identity(curve: HyperCurve) -> MumfordDivisor:
    f = curve.f
    return MumfordDivisor(curve, f.constant(f.one), f._new([]))


def from_point(curve: HyperCurve, x, y) -> MumfordDivisor:
    """The class of P - infinity."""
    f = curve.f
    if not curve.is_on(x, y):
        raise ParameterError("point is not on the curve")
    return MumfordDivisor(curve, f._new([-x, f.one]), f.constant(y))


def point_difference(curve: HyperCurve, P, Q) -> MumfordDivisor:
    """The class of [P - Q] for affine points P = (x, y), Q = (x, y)."""
    return cantor_add(from_point(curve, *P), negate(from_point(curve, *Q)))


def negate(D: MumfordDivisor) -> MumfordDivisor:
    return MumfordDivisor(D.curve, D.u, (-D.v) % D.u if D.u.deg() > 0 else D.v)


def _reduce(curve: HyperCurve, u: UPoly, v: UPoly) -> tuple[UPoly, UPoly]:
    f = curve.f
    while u.deg() > 2:
        u = (f - v * v) // u
        v = (-v) % u
        lc = u.lc()
        if isinstance(lc, PadicNum) and lc.relprec <= 0:
            raise PrecisionError(
                f"precision loss: leading coefficient of valuation >= {lc.prec} "
                f"is indistinguishable from zero during reduction")
        u = u.monic()
    v = v % u
    return u, v


def cantor_add(D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
    if D1.curve is not D2.curve and D1.curve.f != D2.curve.f:
        raise DomainError("divisors live on different curves")
    curve = D1.curve
    u1, v1, u2, v2 = D1.u, D1.v, D2.u, D2.v
    if u1.deg() == 0:
        return D2
    if u2.deg() == 0:
        return D1
    d1, e1, e2 = xgcd(u1, u2)
    d, c1, s3 = xgcd(d1, v1 + v2)
    s1, s2 = c1 * e1, c1 * e2
    u = (u1 * u2) // (d * d)
    v = (s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + curve.f)) // d
    v = v % u
    u, v = _reduce(curve, u, v)
    out = MumfordDivisor(curve, u, v)
    prec = _min_prec((u, v))
    if prec is not None and prec < 1:
        raise PrecisionError("precision exhausted in Cantor composition")
    return out


def scalar_mul(n: int, D: MumfordDivisor) -> MumfordDivisor:
    """n * D by double-and-add."""
    if n < 0:
        return scalar_mul(-n, negate(D))
    result = identity(D.curve)
    base = D
    while n:
        if n & 1:
            result = cantor_add(result, base)
        n >>= 1
        if n:
            base = cantor_add(base, base)
    return result


def random_point(curve: HyperCurve, rng: _random.Random | None = None):
    """A uniformly chosen affine point over a finite base field."""
    rng = rng or _random
    z = curve.f.zero
    if not isinstance(z, FFElem):
        raise DomainError("random_point needs a finite base field")
    F = z.field
    while True:
        x = F.random(rng)
        fx = curve.f(x)
        if fx.is_zero():
            return x, fx
        if fx.is_square():
            y = fx.sqrt()
            return x, (y if rng.random() < 0.5 else -y)


def random_divisor(curve: HyperCurve, rng: _random.Random | None = None) -> MumfordDivisor:
    """Sum of two random points minus 2 infinity."""
    rng = rng or _random
    P = random_point(curve, rng)
    Q = random_point(curve, rng)
    return cantor_add(from_point(curve, *P), from_point(curve, *Q))
