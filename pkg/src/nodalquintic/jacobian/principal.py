"""Cantor arithmetic that also tracks the function realising each step.

For reduced classes D1, D2 on a quintic model, ``tracked_add`` returns D3 and
a function h with D1 + D2 = D3 + div(h) as degree-zero divisors. This gives
explicit functions for p-divisible sums of point differences over F_p.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from ..errors import DomainError, ParameterError
from ..kernels.fields import FFElem
from ..kernels.upoly import UPoly, xgcd
from .cantor import MumfordDivisor, from_point, identity, scalar_mul
from .curve import HyperCurve, jacobian_order
from .divisors import CurveFunction, Divisor, FunctionField


def _ints(g: UPoly) -> list[int]:
    return [int(c) for c in g.coeffs]


def _fn(a: UPoly | None = None, b: UPoly | None = None, e: int = 1) -> CurveFunction:
    return CurveFunction.of(_ints(a) if a is not None else [], _ints(b) if b is not None else [], e)


def tracked_negate(D: MumfordDivisor) -> tuple[MumfordDivisor, CurveFunction]:
    """-D = D(u, -v) - div(u)."""
    if D.is_identity():
        return D, CurveFunction.one()
    neg = MumfordDivisor(D.curve, D.u, (-D.v) % D.u)
    return neg, _fn(D.u, e=-1)


def tracked_add(D1: MumfordDivisor, D2: MumfordDivisor) -> tuple[MumfordDivisor, CurveFunction]:
    curve = D1.curve
    f = curve.f
    if D1.is_identity():
        return D2, CurveFunction.one()
    if D2.is_identity():
        return D1, CurveFunction.one()
    u1, v1, u2, v2 = D1.u, D1.v, D2.u, D2.v
    d1, e1, e2 = xgcd(u1, u2)
    d, c1, s3 = xgcd(d1, v1 + v2)
    s1, s2 = c1 * e1, c1 * e2
    u = (u1 * u2) // (d * d)
    v = ((s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + f)) // d) % u
    h = _fn(d) if d.deg() > 0 else CurveFunction.one()
    while u.deg() > 2:
        u2_ = ((f - v * v) // u).monic()
        # D(u, v) = D(u', -v) + div((Y - v) / u')
        h = h * _fn(-v, f.constant(f.one)) * _fn(u2_, e=-1)
        v = (-v) % u2_
        u = u2_
    v = v % u if u.deg() > 0 else v._new([])
    return MumfordDivisor(curve, u, v), h


def tracked_scalar_mul(n: int, D: MumfordDivisor) -> tuple[MumfordDivisor, CurveFunction]:
    """n * D = D_n + div(h) as degree-zero divisors."""
    base, hb = D, CurveFunction.one()
    if n < 0:
        base, hb = tracked_negate(D)
        n = -n
    result, hr = identity(D.curve), CurveFunction.one()
    while n:
        if n & 1:
            result, g = tracked_add(result, base)
            hr = _merge(hr * hb * g)
        n >>= 1
        if n:
            base, g = tracked_add(base, base)
            hb = _merge(hb ** 2 * g)
    return result, hr


def _merge(F: CurveFunction) -> CurveFunction:
    acc: dict = {}
    for a, b, e in F.factors:
        acc[(a, b)] = acc.get((a, b), 0) + e
    return CurveFunction(tuple((a, b, e) for (a, b), e in acc.items() if e))


def mumford_to_divisor(K: FunctionField, D: MumfordDivisor) -> Divisor:
    """The degree-zero divisor E - deg(E) infinity of a reduced class."""
    out = Divisor()
    if D.is_identity():
        return out
    u = K.base.poly(_ints(D.u))
    v = K.base.poly(_ints(D.v))
    for pi, e in K.base.factor(u):
        P = K._pt(pi, v.rem(pi))
        out[P] = out.get(P, 0) + e
    out[K.infinite_places()[0]] = -D.u.deg()
    return out


def _point_divisor(K: FunctionField, P) -> Divisor:
    x, y = int(P[0]), int(P[1])
    pt = K._pt(K.base.poly([-x, 1]), K.base.poly([y]))
    return Divisor({pt: 1})


@dataclass
class PrincipalDemo:
    E: MumfordDivisor
    function: CurveFunction
    divisor: Divisor
    expected: Divisor
    verified: bool


def principal_function_demo(curve: HyperCurve, terms: Sequence[tuple[int, tuple, tuple]]) -> PrincipalDemo:
    """For D = sum r (P - Q) over F_p with [D] = p[E], a function f1 with
    div(f1) = D - p E. Curves are quintic models over a prime field."""
    z = curve.f.zero
    if not isinstance(z, FFElem) or z.field.k != 1 or curve.degree != 5:
        raise DomainError("the demo runs on quintic models over a prime field")
    p = z.field.p
    K = FunctionField(_ints(curve.f), p)
    total, h_rel = identity(curve), CurveFunction.one()
    expected = Divisor()
    for r, P, Q in terms:
        for pt, sign in ((P, 1), (Q, -1)):
            D = from_point(curve, *pt)
            D_r, g = tracked_scalar_mul(sign * r, D)
            total, g2 = tracked_add(total, D_r)
            h_rel = _merge(h_rel * g * g2)
            expected = expected + _point_divisor(K, pt) * (sign * r)
    order = jacobian_order(curve).jacobian_order
    if gcd(order, p) == 1:
        E = scalar_mul(pow(p, -1, order), total)
    else:
        E = _search_p_root(curve, total, p)
    pE, h_p = tracked_scalar_mul(p, E)
    if pE != total:
        raise ParameterError("class is not p-divisible")
    f1 = _merge(h_rel / h_p)
    expected = K.canonical(expected - mumford_to_divisor(K, E) * p)
    got = K.divisor_of_function(f1) if f1.factors else Divisor()
    return PrincipalDemo(E, f1, got, expected, K.canonical(got - expected).is_zero())


def _search_p_root(curve: HyperCurve, target: MumfordDivisor, p: int) -> MumfordDivisor:
    F = curve.f.zero.field
    f = curve.f
    elems = list(F.elements())
    cands = [identity(curve)]
    for a in elems:
        for b in elems:
            u = f._new([-a, f.one])
            v = f.constant(b)
            if ((v * v - f) % u).is_zero():
                cands.append(MumfordDivisor(curve, u, v))
    for c0 in elems:
        for c1 in elems:
            u = f._new([c0, c1, f.one])
            for v0 in elems:
                for v1 in elems:
                    v = f._new([v0, v1])
                    if ((v * v - f) % u).is_zero():
                        cands.append(MumfordDivisor(curve, u, v))
    for E in cands:
        if scalar_mul(p, E) == target:
            return E
    raise ParameterError("class is not p-divisible")
