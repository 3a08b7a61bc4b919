"""Genus-2 hyperelliptic curves y^2 = f(x) and Frobenius data over F_p."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DegenerateError, DomainError, ParameterError
from ..kernels.fields import GF, FFElem
from ..kernels.padic import PadicNum
from ..kernels.upoly import UPoly, is_squarefree, resultant


@dataclass(frozen=True, eq=False)
class HyperCurve:
    """y^2 = f(x) with deg f in {5, 6} over F_q, Q or Q_p (PadicNum)."""

    f: UPoly

    def __post_init__(self):
        if self.f.deg() not in (5, 6):
            raise ParameterError(f"genus 2 needs deg f in (5, 6), got {self.f.deg()}")
        zero = self.f.zero
        if isinstance(zero, FFElem):
            if zero.field.p == 2:
                raise DomainError("characteristic 2 is not supported")
            if not is_squarefree(self.f):
                raise DegenerateError("singular curve: f is not square-free")
        elif isinstance(zero, PadicNum):
            if resultant(self.f, self.f.derivative()).is_zero():
                raise DegenerateError("singular curve: discriminant vanishes to working precision")
        elif resultant(self.f, self.f.derivative()) == 0:
            raise DegenerateError("singular curve: f is not square-free")

    @classmethod
    def over_field(cls, coeffs, field: GF) -> "HyperCurve":
        return cls(UPoly([field(int(c) if not isinstance(c, FFElem) else c) for c in coeffs],
                         field.zero()))

    @classmethod
    def over_padics(cls, coeffs, p: int, N: int) -> "HyperCurve":
        cs = [c if isinstance(c, PadicNum) else PadicNum(p, N, c) for c in coeffs]
        return cls(UPoly(cs, PadicNum(p, N, 0)))

    @classmethod
    def over_rationals(cls, coeffs) -> "HyperCurve":
        return cls(UPoly([Fraction(c) for c in coeffs], Fraction(0)))

    @property
    def degree(self) -> int:
        return self.f.deg()

    @property
    def genus(self) -> int:
        return 2

    @property
    def zero(self):
        return self.f.zero

    @property
    def one(self):
        return self.f.one

    @property
    def p(self) -> int | None:
        z = self.f.zero
        if isinstance(z, FFElem):
            return z.field.p
        if isinstance(z, PadicNum):
            return z.p
        return None

    def is_on(self, x, y) -> bool:
        diff = y * y - self.f(x)
        return diff.is_zero() if hasattr(diff, "is_zero") else diff == 0

    def reduce_mod_p(self) -> "HyperCurve":
        """Reduction of a p-adic curve to F_p."""
        z = self.f.zero
        if not isinstance(z, PadicNum):
            raise DomainError("reduction mod p needs a p-adic curve")
        F = GF(z.p)
        return HyperCurve.over_field([c.residue for c in self.f.coeffs], F)


@dataclass(frozen=True)
class FrobeniusData:
    p: int
    n1: int
    n2: int
    a1: int
    a2: int
    jacobian_order: int

    def lpoly(self) -> list[int]:
        """Coefficients of P(T) = 1 + a1 T + a2 T^2 + p a1 T^3 + p^2 T^4."""
        p = self.p
        return [1, self.a1, self.a2, p * self.a1, p * p]

    def weil_bounds(self) -> tuple[float, float]:
        r = math.sqrt(self.p)
        return (r - 1) ** 4, (r + 1) ** 4

    def to_json(self) -> dict:
        return {"p": self.p, "n1": self.n1, "n2": self.n2, "a1": self.a1, "a2": self.a2,
                "jacobian_order": self.jacobian_order}


def _infinite_points(f: UPoly) -> int:
    if f.deg() == 5:
        return 1
    return 2 if f.lc().is_square() else 0


def count_points(f: UPoly) -> int:
    """Projective point count of y^2 = f(x) over the coefficient field of f."""
    F = f.zero.field
    total = _infinite_points(f)
    for x in F.elements():
        fx = f(x)
        if fx.is_zero():
            total += 1
        elif fx.is_square():
            total += 2
    return total


def jacobian_order(curve: HyperCurve) -> FrobeniusData:
    """Point counts over F_p and F_{p^2} and the order of J(F_p)."""
    z = curve.f.zero
    if not isinstance(z, FFElem) or z.field.k != 1:
        raise DomainError("jacobian_order needs a curve over a prime field F_p")
    p = z.field.p
    if p < 7:
        raise ParameterError("jacobian_order expects p >= 7")
    F2 = GF(p, 2)
    f2 = UPoly([F2(int(c)) for c in curve.f.coeffs], F2.zero())
    n1 = count_points(curve.f)
    n2 = count_points(f2)
    s1 = p + 1 - n1
    s2 = p * p + 1 - n2
    a1 = -s1
    a2 = (s1 * s1 - s2) // 2
    order = 1 + a1 + a2 + p * a1 + p * p
    return FrobeniusData(p, n1, n2, a1, a2, order)
