"""Logarithm on the Jacobian of a family member with split toric reduction.

Modulo p the curve Y^2 = f(w) degenerates to the two rational components
D_1 = {Y = a0 h} and D_2 = {Y = -a0 h}; write f = a0^2 h~^2 + p g with h~ the
monic lift of h. On the tube of D_1 the differential w^i dw / Y expands as

    sum_m binom(-1/2, m) p^m a0^(-2m-1) w^i g^m / h~^(2m+1) dw,

whose partial fractions over the roots x of h~ integrate to a function Phi_i
that is analytic on the whole tube and vanishes at the point at infinity of
D_1. The sum over conjugate roots is a trace from A = Z_p[x]/h~. With
K = log[oo_+ - oo_-],

    log[P - Q] = eps_P Phi(P) - eps_Q Phi(Q) + (eps_P - eps_Q)/2 * K,

where eps = +1 on D_1 and -1 on D_2. K is read off the divisor of
Y - a0 h~, whose zeros are the roots of g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import DegenerateError, ParameterError, PrecisionError
from ..family import FamilyParams
from ..kernels.padic import PadicNum
from ..reduction import (
    SectionPoint, SpecialFiberSplit, _component_sign, defect_polynomial, node_fibers,
    section_points, special_fiber_split,
)
from .logs import LogVector

GUARD = 6


class EtaleCubic:
    """Z/p^W [x] / (h), h a monic cubic that is square-free mod p."""

    def __init__(self, h: Sequence[int], p: int, W: int):
        if len(h) != 4 or h[3] != 1:
            raise ParameterError("expected a monic cubic")
        self.p, self.W, self.m = p, W, p**W
        self.h = [int(c) % self.m for c in h]

    def scalar(self, c: int):
        return (int(c) % self.m, 0, 0)

    @property
    def zero(self):
        return (0, 0, 0)

    @property
    def one(self):
        return (1, 0, 0)

    @property
    def gen(self):
        return (0, 1, 0)

    def add(self, a, b):
        m = self.m
        return ((a[0] + b[0]) % m, (a[1] + b[1]) % m, (a[2] + b[2]) % m)

    def sub(self, a, b):
        m = self.m
        return ((a[0] - b[0]) % m, (a[1] - b[1]) % m, (a[2] - b[2]) % m)

    def smul(self, c: int, a):
        m = self.m
        return (c * a[0] % m, c * a[1] % m, c * a[2] % m)

    def mul(self, a, b):
        c = [0] * 5
        for i in range(3):
            if a[i]:
                for j in range(3):
                    c[i + j] += a[i] * b[j]
        h0, h1, h2 = self.h[0], self.h[1], self.h[2]
        for k in (4, 3):
            t = c[k]
            if t:
                c[k] = 0
                c[k - 1] -= t * h2
                c[k - 2] -= t * h1
                c[k - 3] -= t * h0
        m = self.m
        return (c[0] % m, c[1] % m, c[2] % m)

    def pow(self, a, n: int):
        out, base = self.one, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def _is_principal(self, a) -> bool:
        p = self.p
        return a[0] % p == 1 and a[1] % p == 0 and a[2] % p == 0

    def _unit_power(self, a):
        """(a^L, L) with a^L = 1 mod p, L = p^6 - 1 (covers every residue field)."""
        L = self.p**6 - 1
        z = self.pow(a, L)
        if not self._is_principal(z):
            raise DegenerateError("element is not a unit of the cubic algebra")
        return z, L

    def inv(self, a):
        z, L = self._unit_power(a)
        y = self.sub(z, self.one)
        # (1 + y)^-1 = sum (-y)^k
        acc, term = self.one, self.one
        for _ in range(self.W + 1):
            term = self.mul(term, y)
            term = self.smul(-1, term)
            if term == self.zero:
                break
            acc = self.add(acc, term)
        return self.mul(acc, self.pow(a, L - 1))

    def log_principal(self, z):
        """log(z) for z = 1 mod p, with division by p-powers done exactly.

        Terms y^k / k are formed at W + e digits where e bounds v_p(k), so the
        result is correct modulo p^W."""
        p = self.p
        y = self.sub(z, self.one)
        if any(c % p for c in y):
            raise DegenerateError("log_principal needs z = 1 mod p")
        K = 1
        while K + 1 - math.log(K + 1, p) < self.W + 1:
            K += 1
        e = int(math.log(K, p)) + 1
        big = EtaleCubic(self.h, p, self.W + e)
        acc = big.zero
        term = big.one
        yb = tuple(c for c in y)
        for k in range(1, K + 1):
            term = big.mul(term, yb)
            v = 0
            kk = k
            while kk % p == 0:
                kk //= p
                v += 1
            num = tuple(c // p**v if c % p**v == 0 else None for c in term)
            if None in num:
                raise PrecisionError("log series term not divisible as expected")
            sgn = 1 if k % 2 else -1
            acc = big.add(acc, big.smul(sgn * pow(kk, -1, big.m), num))
        return tuple(c % self.m for c in acc)

    def log_unit(self, a):
        z, L = self._unit_power(a)
        return self.smul(pow(L, -1, self.m), self.log_principal(z))

    def trace(self, a) -> int:
        h0, h1, h2 = self.h[0], self.h[1], self.h[2]
        return (3 * a[0] - h2 * a[1] + (h2 * h2 - 2 * h1) * a[2]) % self.m


# ------------------------------------------------------- series over A

def _s_mul(A: EtaleCubic, a, b, K: int):
    out = [A.zero] * (K + 1)
    for i, x in enumerate(a[: K + 1]):
        if x == A.zero:
            continue
        for j, y in enumerate(b[: K + 1 - i]):
            out[i + j] = A.add(out[i + j], A.mul(x, y))
    return out


def _s_inv(A: EtaleCubic, a, K: int):
    inv0 = A.inv(a[0])
    out = [inv0]
    for k in range(1, K + 1):
        acc = A.zero
        for j in range(1, min(k, len(a) - 1) + 1):
            acc = A.add(acc, A.mul(a[j], out[k - j]))
        out.append(A.mul(A.smul(-1, acc), inv0))
    return out


def _shifted_poly(A: EtaleCubic, coeffs: Sequence[int]):
    """Coefficients in t of P(x + t), as elements of A."""
    out = [A.zero]
    for c in reversed(list(coeffs)):
        # out = out * (x + t) + c
        new = [A.zero] * (len(out) + 1)
        for k, a in enumerate(out):
            new[k] = A.add(new[k], A.mul(a, A.gen))
            new[k + 1] = A.add(new[k + 1], a)
        new[0] = A.add(new[0], A.scalar(c))
        out = new
    while len(out) > 1 and out[-1] == A.zero:
        out.pop()
    return out


def _padic_int(fr, p: int, W: int) -> int:
    x = PadicNum(p, W, fr)
    if x.valuation() < 0:
        raise PrecisionError("scalar is not p-integral")
    return x.residue


def _binom_half(m: int) -> Fraction:
    """binom(-1/2, m)."""
    return Fraction((-1) ** m * math.comb(2 * m, m), 4**m)


# ------------------------------------------------------- the log itself

@dataclass(frozen=True)
class PointData:
    """A point of the tube of one component, in the w-chart or the u-chart."""

    eps: int
    w: int | None = None
    u: int | None = None


class ToricLog:
    """Component-integral logarithm for a family member with split reduction."""

    def __init__(self, params: FamilyParams, p: int, digits: int, guard: int = GUARD,
                 split: SpecialFiberSplit | None = None):
        self.params = params
        self.p = p
        self.digits = digits
        self.W = digits + guard
        self.split = split or special_fiber_split(params, p)
        self.a0 = int(params.a[0])
        h = self.split.h_ints()
        self.g = defect_polynomial(params, self.split)
        A = self.A = EtaleCubic(h, p, self.W)
        gx = _shifted_poly(A, self.g)
        if not self._is_unit(gx[0]):
            raise DegenerateError("g vanishes at a meeting point (model not regular)")
        self._laurent()
        self.K = self._K_from(self.g)

    # -- setup
    def _is_unit(self, a) -> bool:
        try:
            self.A._unit_power(a)
            return True
        except DegenerateError:
            return False

    def _laurent(self):
        A, p, W = self.A, self.p, self.W
        M = 1
        while M - math.log(2 * M + 1, p) < W:
            M += 1
        self.M = M
        J = 2 * M + 1
        hx = _shifted_poly(A, self.A.h)          # h(x + t), constant term 0
        if hx[0] != A.zero:
            raise AssertionError("x is not a root of h in A")
        H = hx[1:]
        Hinv = _s_inv(A, H, J)
        Hinv2 = _s_mul(A, Hinv, Hinv, J)
        G = _shifted_poly(A, self.g)
        # C[i][j] for j = 1..J (index j), over the two differentials
        C = [[A.zero] * (J + 1) for _ in range(2)]
        P = Hinv                                   # G^m Hinv^(2m+1)
        for m in range(M):
            deg = 2 * m
            T0 = P[: deg + 1]
            T1 = [A.add(A.mul(A.gen, T0[k]), T0[k - 1] if k else A.zero) for k in range(deg + 1)]
            for i, T in enumerate((T0, T1)):
                for j in range(1, deg + 2):
                    coef = T[deg + 1 - j]
                    if coef == A.zero:
                        continue
                    scal = _binom_half(m) * Fraction(p) ** m / Fraction(self.a0) ** (2 * m + 1)
                    if j >= 2:
                        scal = scal / (1 - j)
                    C[i][j] = A.add(C[i][j], A.smul(_padic_int(scal, p, W), coef))
            if m + 1 < M:
                P = _s_mul(A, _s_mul(A, P, G, J), Hinv2, J)
        self.C = C          # C[i][1] residues, C[i][j] (j >= 2) already divided by 1 - j
        for i in range(2):
            if A.trace(C[i][1]) % p**self.digits:
                raise PrecisionError("residues do not sum to zero at working precision")

    # -- evaluation
    def phi(self, pt: PointData) -> tuple[int, int]:
        """(Phi_0, Phi_1) at a point of the tube, as integers mod p^W."""
        A, p = self.A, self.p
        if pt.w is not None:
            z = A.sub(A.scalar(pt.w), A.gen)               # w - x
            zinv = A.inv(z)
            logz = A.log_unit(z)
            powers = [A.one, zinv]                        # (w - x)^(1 - j) for j = 1, 2
            step = zinv
        elif pt.u is not None:
            if pt.u % p:
                raise ParameterError("u-chart points must have u = 0 mod p")
            one_minus = A.sub(A.one, A.smul(pt.u, A.gen))   # 1 - x u
            inv = A.inv(one_minus)
            logz = A.log_principal(one_minus)
            step = A.smul(pt.u, inv)                      # u / (1 - x u)
            powers = [A.one, step]
        else:
            raise ParameterError("point needs a w or u coordinate")
        J = len(self.C[0]) - 1
        while len(powers) < J:
            powers.append(A.mul(powers[-1], step))
        out = []
        for i in range(2):
            acc = A.mul(self.C[i][1], logz)
            for j in range(2, J + 1):
                if self.C[i][j] != A.zero:
                    acc = A.add(acc, A.mul(self.C[i][j], powers[j - 1]))
            out.append(A.trace(acc))
        return out[0], out[1]

    def _K_from(self, g: Sequence[int]) -> tuple[int, int]:
        """K = -(1/3) sum over the roots w_j of g of Phi(w_j), without roots."""
        A, p = self.A, self.p
        J = len(self.C[0]) - 1
        while len(g) > 1 and g[-1] == 0:
            g = list(g[:-1])
        if len(g) == 1:
            return 0, 0
        G = _shifted_poly(A, g)
        dG = [A.smul(k, G[k]) for k in range(1, len(G))]
        ratio = _s_mul(A, dG, _s_inv(A, G, J), J)
        a = [A.smul(-1, c) for c in ratio]                 # a_n = sum_j (w_j - x)^-(n+1)
        logg = A.log_unit(G[0])
        third = pow(-3, -1, A.m)
        out = []
        for i in range(2):
            acc = A.mul(self.C[i][1], logg)
            for j in range(2, J + 1):
                acc = A.add(acc, A.mul(self.C[i][j], a[j - 2]))
            out.append(A.trace(acc) * third % A.m)
        return out[0], out[1]

    def K_alternative(self, r: Sequence[int]) -> tuple[int, int]:
        """K recomputed from the function Y - (a0 h~ + p r(w)), deg r <= 2."""
        from ..reduction import _int_poly_mul, _int_poly_sub
        h = self.split.h_ints()
        p, a0 = self.p, self.a0
        gq = _int_poly_sub(_int_poly_sub(self.g, [2 * a0 * c for c in _int_poly_mul(h, r)]),
                           [p * c for c in _int_poly_mul(r, r)])
        return self._K_from(gq)

    # -- points and logs
    def point_data(self, pt: SectionPoint) -> PointData:
        eps = _component_sign(pt, self.split)
        if pt.w is not None and pt.w.valuation() >= 0:
            return PointData(eps, w=pt.w.residue)
        return PointData(eps, u=pt.u.residue)

    def _padic(self, v: int) -> PadicNum:
        return PadicNum(self.p, self.digits, v % self.p**self.digits)

    def log_points(self, P: PointData, Q: PointData) -> LogVector:
        fP, fQ = self.phi(P), self.phi(Q)
        half = (P.eps - Q.eps) // 2
        vals = [P.eps * a - Q.eps * b + half * k for a, b, k in zip(fP, fQ, self.K)]
        return LogVector(*(self._padic(v) for v in vals))

    def log_pair(self, P: SectionPoint, Q: SectionPoint) -> LogVector:
        return self.log_points(self.point_data(P), self.point_data(Q))


def section_logs(params: FamilyParams, p: int, digits: int, indices: Sequence[int],
                 guard: int = GUARD) -> tuple[list[LogVector], list[tuple[int, int]], ToricLog]:
    """Logs of [P_i - Q_i] for the chosen indices; the sections are recomputed
    at the internal working precision."""
    T = ToricLog(params, p, digits, guard)
    fibers = node_fibers(params, p, T.W)
    pairs = section_points(params, fibers)
    logs, eps = [], []
    for i in indices:
        P, Q = pairs[i - 1]
        dP, dQ = T.point_data(P), T.point_data(Q)
        logs.append(T.log_points(dP, dQ))
        eps.append((dP.eps, dQ.eps))
    return logs, eps, T
