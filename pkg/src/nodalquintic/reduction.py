"""Reduction of the genus-2 curve of a family member modulo p.

Covers the split of the special fiber into two rational components, the
regularity test at their meeting points, the rational fibers over the four
nodes, which component each section meets, and the boundary certificate that
a relation among the sections is not killed by the special fiber.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import DegenerateError, ParameterError, PrecisionError, Reject
from .family import FamilyParams, curve_coefficients, weierstrass_f
from .kernels.fields import GF
from .kernels.linalg import ExactMatrix, matrix_rank_kernel
from .kernels.padic import PadicNum, hensel_quadratic_roots, vp
from .kernels.upoly import UPoly, gcd, is_squarefree, poly_square_root

MEETING_NUMBER = 3


@dataclass(frozen=True)
class SpecialFiberSplit:
    """f = c^2 h^2 mod p; the component D_1 is {Y = c h(w)}."""

    p: int
    h: UPoly
    c: object
    hhat: UPoly   # c u^3 h(1/u)

    def h_ints(self) -> list[int]:
        return [int(x) for x in self.h.coeffs]


def _fp_poly(coeffs, p: int) -> UPoly:
    F = GF(p)
    return UPoly.over(F, [F(int(v) % p) for v in coeffs])


def special_fiber_split(params: FamilyParams, p: int) -> SpecialFiberSplit:
    if p == 2:
        raise ParameterError("p = 2 is not supported")
    a0 = int(params.a[0])
    if a0 % p == 0:
        raise Reject("iii", "a0 not a unit")
    f = _fp_poly(weierstrass_f(params), p)
    try:
        res = poly_square_root(f)
    except DegenerateError:
        raise Reject("iii", "non-reduced fiber", "f = 0 mod p") from None
    if res is None:
        raise Reject("iii", "irreducible double cover", "f is not a square mod p")
    h, _ = res
    if h.deg() != 3:
        raise Reject("iii", "degree drop", f"deg h = {h.deg()}")
    if not is_squarefree(h):
        raise Reject("iii", "repeated roots", "components meet tangentially")
    F = GF(p)
    c = F(a0)
    hhat = UPoly.over(F, [c * h[3 - i] for i in range(4)])
    return SpecialFiberSplit(p, h, c, hhat)


def _int_poly_sub(f, g):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return [x - y for x, y in zip(f, g)]


def _int_poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] += x * y
    return out


def defect_polynomial(params: FamilyParams, split: SpecialFiberSplit,
                      lift: Sequence[int] | None = None) -> list[int]:
    """g = (f - a_0^2 h~^2) / p for an integer lift h~ of h (monic cubic)."""
    p = split.p
    ht = list(lift) if lift is not None else split.h_ints()
    if [x % p for x in ht] != split.h_ints():
        raise ParameterError("lift does not reduce to h")
    f = [int(v) for v in weierstrass_f(params)]
    a0 = int(params.a[0])
    diff = _int_poly_sub(f, [a0 * a0 * x for x in _int_poly_mul(ht, ht)])
    if any(x % p for x in diff):
        raise AssertionError("f is not congruent to a0^2 h^2 mod p")
    return [x // p for x in diff]


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    common_factor: UPoly


def regularity_check(params: FamilyParams, split: SpecialFiberSplit, N: int = 2,
                     lift: Sequence[int] | None = None) -> RegularityResult:
    """The model is regular at the meeting points of the two components iff the
    defect polynomial does not vanish at any root of h (over the algebraic
    closure), i.e. gcd(h, g mod p) = 1. No meeting point lies at w = infinity
    because h has degree 3."""
    if N < 2:
        raise ParameterError("regularity needs the parameters modulo p^2 (N >= 2)")
    g = _fp_poly(defect_polynomial(params, split, lift), split.p)
    common = gcd(split.h, g)
    return RegularityResult(common.deg() == 0, common)


def component_meeting_number(split: SpecialFiberSplit) -> int:
    """Number of meeting points of D_1 and D_2 (roots of h and of hhat at u = 0)."""
    if not is_squarefree(split.h):
        raise DegenerateError("repeated roots are rejected upstream")
    at_infinity = 1 if split.hhat[0].is_zero() else 0
    if at_infinity:
        raise AssertionError("unreachable: hhat(0) = a0 is a unit")
    n = split.h.deg() + at_infinity
    if n != MEETING_NUMBER:
        raise AssertionError(f"meeting number {n} != {MEETING_NUMBER}")
    return n


# ------------------------------------------------------------- node fibers

def node_quadratics(params: FamilyParams):
    """Coefficients (lead, mid, const) of the four quadratics cutting out the
    fibers of the normalization over the nodes."""
    a0, a1, a2 = params.a
    b0, b1, b2 = params.b
    c0, c1, c2 = params.c
    return (
        (a2, c2, b2),
        (a1 + a2, c1 + c2, b1 + b2),
        (b0 + b2, c0 + c2, a0 + a2),
        (a0 + a1 + a2, c0 + c1 + c2, b0 + b1 + b2),
    )


@dataclass(frozen=True)
class NodeFibers:
    p: int
    N: int
    roots: tuple   # ((alpha_1, alpha_2), (beta_1, beta_2), (gamma_1, gamma_2), (delta_1, delta_2))

    @property
    def alpha(self):
        return self.roots[0]

    @property
    def beta(self):
        return self.roots[1]

    @property
    def gamma(self):
        return self.roots[2]

    @property
    def delta(self):
        return self.roots[3]


def node_fibers(params: FamilyParams, p: int, N: int) -> NodeFibers:
    if p == 2:
        raise ParameterError("p = 2 is not supported")
    out = []
    for k, (A, B, C) in enumerate(node_quadratics(params), start=1):
        A, B, C = (PadicNum(p, N, v) for v in (A, B, C))
        if not A.is_unit():
            raise Reject("fibers", "leading coefficient degenerate", f"node {k}")
        try:
            roots = hensel_quadratic_roots(A, B, C)
        except PrecisionError:
            raise Reject("fibers", "discriminant not a unit", f"node {k}") from None
        if roots is None:
            raise Reject("fibers", "sections not rational at this member", f"node {k}")
        # label by residue mod p so P/Q do not depend on the precision
        out.append(tuple(sorted(roots, key=lambda r: r.mod_p())))
    return NodeFibers(p, N, tuple(out))


# ---------------------------------------------------------- section data

def _peval(coeffs, x):
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class SectionPoint:
    """A section in Weierstrass coordinates (w, Y) with Y^2 = f(w).

    For the third pair the point is also given in the chart at infinity,
    u = 1/w and Yhat = u^3 Y, which stays integral when u = 0 mod p.
    """

    label: str
    w: object | None
    Y: object | None
    u: object | None = None
    Yhat: object | None = None


def section_points(params: FamilyParams, fibers: NodeFibers) -> list[tuple[SectionPoint, SectionPoint]]:
    """(P_i, Q_i) for i = 1..4 in Weierstrass coordinates."""
    (d0, d1, d2), (e0, e1, e2) = curve_coefficients(params)
    pairs = []
    for i, (r1, r2) in enumerate(fibers.roots, start=1):
        pts = []
        for lab, r in (("P", r1), ("Q", r2)):
            name = f"{lab}{i}"
            if i == 1:
                pts.append(SectionPoint(name, r, 2 * r * _peval(d2, r) + _peval(d1, r)))
            elif i == 2:
                pts.append(SectionPoint(name, r, _peval(d1, r)))
            elif i == 3:
                Yhat = -_peval(e1, r)
                if r.is_zero() or r.valuation() > 0:
                    pts.append(SectionPoint(name, None, None, r, Yhat))
                else:
                    w = r.inverse()
                    pts.append(SectionPoint(name, w, Yhat * w**3, r, Yhat))
            else:
                pts.append(SectionPoint(name, r, 2 * _peval(d2, r) + _peval(d1, r)))
        pairs.append(tuple(pts))
    return pairs


@dataclass(frozen=True)
class IntersectionData:
    meeting_number: int
    eps: tuple            # ((eps(P_1), eps(Q_1)), ..., (eps(P_4), eps(Q_4)))
    split_indices: tuple  # indices i (1-based) with eps(P_i) = -eps(Q_i)

    @property
    def verdict(self) -> bool:
        return len(self.split_indices) >= 3

    def chosen(self) -> tuple:
        return self.split_indices[:3]


def _component_sign(pt: SectionPoint, split: SpecialFiberSplit) -> int:
    p = split.p
    F = GF(p)
    if pt.u is not None and (pt.w is None):
        Y = F(pt.Yhat.mod_p())
        H = split.hhat(F(pt.u.mod_p()))
    else:
        Y = F(pt.Y.mod_p())
        H = split.c * split.h(F(pt.w.mod_p()))
    if H.is_zero():
        raise Reject("v", "section through component intersection", pt.label)
    if Y == H:
        return 1
    if Y == -H:
        return -1
    raise PrecisionError(f"section {pt.label} is not on the special fiber (Y != +-c h)")


def reduction_pattern(params: FamilyParams, fibers: NodeFibers,
                      split: SpecialFiberSplit) -> IntersectionData:
    eps = []
    for P, Q in section_points(params, fibers):
        eps.append((_component_sign(P, split), _component_sign(Q, split)))
    idx = tuple(i for i, (a, b) in enumerate(eps, start=1) if a == -b)
    return IntersectionData(component_meeting_number(split), tuple(eps), idx)


# ------------------------------------------------------- boundary certificate

@dataclass(frozen=True)
class B2Certificate:
    signed_sum: PadicNum
    valuation: int | None
    n2: PadicNum
    nonzero: bool


def b2_certificate(data: IntersectionData, r: Sequence, indices: Sequence[int],
                   p: int, Nprime: int) -> B2Certificate:
    """Signed sum sum_k r_k (P_{i_k} - Q_{i_k} . D_1) and the coefficient of
    D_2 that a vertical correction would need."""
    if p == 3 and data.meeting_number % 3 == 0:
        raise ParameterError("meeting number not invertible mod 3")
    if len(r) != len(indices):
        raise ParameterError("one coefficient per chosen index")
    total = PadicNum(p, Nprime, 0)
    for rk, i in zip(r, indices):
        eP, eQ = data.eps[i - 1]
        if eP != -eQ:
            raise ParameterError(f"index {i} is not split across the components")
        rk = rk.reduce(min(Nprime, rk.prec)) if isinstance(rk, PadicNum) else PadicNum(p, Nprime, rk)
        total = total + rk * eP
    n2 = -total / PadicNum(p, Nprime, data.meeting_number)
    nonzero = not total.is_zero()
    return B2Certificate(total, total.valuation() if nonzero else None, n2, nonzero)


@dataclass(frozen=True)
class SystemVerdict:
    solvable: bool
    certificate: tuple | None   # (q_k..., q'_s...) when unsolvable


def solve_vertical_system(ED: Sequence[Sequence[int]], EE: Sequence[Sequence[int]],
                          bD: Sequence, bE: Sequence, p: int, Nprime: int) -> SystemVerdict:
    """Decide whether x_l with
        sum_l x_l (E_l.D_k) + bD_k = 0 for all k,
        sum_l x_l (E_l.E_s) + bE_s = 0 for all s
    has a solution in Q_p. ``ED[k][l]`` and ``EE[s][l]`` are integers; the
    right sides are p-adic numbers known modulo p^Nprime.

    Unsolvable iff some integral (q, q') kills the matrix but pairs to a
    nonzero value with the right side.
    """
    M = [list(r) for r in ED] + [list(r) for r in EE]
    b = list(bD) + list(bE)
    if len(b) != len(M):
        raise ParameterError("right side length mismatch")
    ncols = len(M[0]) if M and M[0] else 0
    if ncols == 0:
        left = [[Fraction(int(i == j)) for j in range(len(M))] for i in range(len(M))]
    else:
        Mt = ExactMatrix.of([[Fraction(M[i][j]) for i in range(len(M))] for j in range(ncols)])
        _, left = matrix_rank_kernel(Mt)
    for y in left:
        y = _primitive(y, p)
        s = PadicNum(p, Nprime, 0)
        for yi, bi in zip(y, b):
            bi = bi if isinstance(bi, PadicNum) else PadicNum(p, Nprime, bi)
            s = s + bi * yi
        if not s.reduce(Nprime).is_zero():
            return SystemVerdict(False, tuple(y))
    return SystemVerdict(True, None)


def _primitive(v, p: int) -> list[int]:
    """Scale a rational vector to an integral one with some entry a p-unit."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    nz = [x for x in ints if x]
    if not nz:
        return ints
    m = min(vp(x, p) for x in nz)
    return [x // p**m for x in ints]
