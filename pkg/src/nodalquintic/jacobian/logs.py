"""p-adic logarithm on genus-2 Jacobians against the differentials dx/y, x dx/y.

Only single-disc ("tiny") power-series integrals are used. A class on a curve
of good reduction is first pushed into the kernel of reduction by multiplying
with n = |J(F_p)| p^e; a kernel class of degree two has its two points in a
pair of residue discs swapped by the hyperelliptic involution, and its log is
a trace over the quadratic algebra cut out by the Mumford polynomial u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import BadPositionError, DomainError, ParameterError, PrecisionError
from ..kernels.fields import GF
from ..kernels.linalg import kernel_mod_pn
from ..kernels.padic import PadicNum, format_padic, padic_sqrt, vp
from ..kernels.upoly import UPoly
from .cantor import MumfordDivisor, cantor_add, from_point, point_difference, scalar_mul
from .curve import HyperCurve, jacobian_order

LOSS_BUDGET = 2


@dataclass(frozen=True)
class LogVector:
    """Coordinates (l1, l2) of a logarithm against (dx/y, x dx/y)."""

    l1: PadicNum
    l2: PadicNum

    @classmethod
    def zero(cls, p: int, prec: int) -> "LogVector":
        return cls(PadicNum(p, prec, 0), PadicNum(p, prec, 0))

    @property
    def p(self) -> int:
        return self.l1.p

    @property
    def prec(self) -> int:
        return min(self.l1.prec, self.l2.prec)

    def __iter__(self):
        return iter((self.l1, self.l2))

    def __add__(self, other: "LogVector") -> "LogVector":
        return LogVector(self.l1 + other.l1, self.l2 + other.l2)

    def __sub__(self, other: "LogVector") -> "LogVector":
        return LogVector(self.l1 - other.l1, self.l2 - other.l2)

    def __neg__(self) -> "LogVector":
        return LogVector(-self.l1, -self.l2)

    def __mul__(self, k) -> "LogVector":
        return LogVector(self.l1 * k, self.l2 * k)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "LogVector":
        return LogVector(self.l1 / k, self.l2 / k)

    def with_prec(self, prec: int) -> "LogVector":
        return LogVector(self.l1.reduce(min(prec, self.l1.prec)),
                         self.l2.reduce(min(prec, self.l2.prec)))

    def transform(self, m: Sequence[Sequence]) -> "LogVector":
        """Coordinates after the basis change given by a 2x2 matrix."""
        return LogVector(self.l1 * m[0][0] + self.l2 * m[0][1],
                         self.l1 * m[1][0] + self.l2 * m[1][1])

    def agrees(self, other: "LogVector", digits: int) -> bool:
        """True when both coordinates agree modulo p^digits."""
        if min(self.prec, other.prec) < digits:
            return False
        return all(d.reduce(digits).is_zero() for d in (self - other))

    def valuation(self) -> int:
        return min(self.l1.valuation(), self.l2.valuation())

    def to_json(self) -> dict:
        return {"l1": format_padic(self.l1), "l2": format_padic(self.l2), "prec": self.prec}


# ----------------------------------------------------------------- series

def _padic(p: int, prec: int, c) -> PadicNum:
    if isinstance(c, PadicNum):
        return c
    return PadicNum(p, prec, c)


def _taylor(coeffs: Sequence[PadicNum], c: PadicNum) -> list[PadicNum]:
    """Coefficients of f(c + t) in t."""
    out = list(coeffs)
    n = len(out)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + c * out[j + 1]
    return out


def _power_series(a: list[PadicNum], alpha: Fraction, K: int) -> list[PadicNum]:
    """First K+1 coefficients of A^alpha for A = 1 + O(t)."""
    zero = a[0] * 0
    a = a + [zero] * max(0, K + 1 - len(a))
    b = [a[0] * 0 + 1]
    for k in range(1, K + 1):
        acc = zero
        for j in range(1, k + 1):
            if a[j].is_zero():
                continue
            acc = acc + a[j] * b[k - j] * ((alpha + 1) * j - k)
        b.append(acc / k)
    return b


def _mul_series(a: list, b: list, K: int) -> list:
    zero = a[0] * 0
    out = [zero] * (K + 1)
    for i, x in enumerate(a[: K + 1]):
        if x.is_zero():
            continue
        for j, y in enumerate(b[: K + 1 - i]):
            out[i + j] = out[i + j] + x * y
    return out


def _integrand_series(f: UPoly, xc: PadicNum, K: int) -> tuple[PadicNum, list[PadicNum]]:
    """(f(xc), B) with B(t) = (f(xc + t) / f(xc))^(-1/2) to order K."""
    F = _taylor(list(f.coeffs), xc)
    f0 = F[0]
    if not f0.is_unit():
        raise BadPositionError("Weierstrass residue disc: f(x) is not a unit at the centre")
    A = [c / f0 for c in F]
    return f0, _power_series(A, Fraction(-1, 2), K)


def _antiderivative(series: list[PadicNum]) -> list[PadicNum]:
    return [series[0] * 0] + [c / (k + 1) for k, c in enumerate(series)]


def _order_for(r: Fraction, p: int, target: int) -> int:
    """Smallest K with (K+1) r - log_p(K+1) >= target."""
    K = 1
    while (K + 1) * r - math.log(K + 1, p) < target:
        K += 1
    return K


def _truncation_floor(K: int, r: Fraction, p: int) -> int:
    return math.floor((K + 1) * r - math.log(K + 1, p))


def _series_eval(series: list[PadicNum], t: PadicNum) -> PadicNum:
    acc = series[-1]
    for c in reversed(series[:-1]):
        acc = acc * t + c
    return acc


def _check_padic_curve(curve: HyperCurve) -> int:
    if not isinstance(curve.zero, PadicNum):
        raise DomainError("p-adic logarithms need a curve over Q_p")
    return curve.zero.p


# ----------------------------------------------------------------- tiny logs

def tiny_log(curve: HyperCurve, P, Q, digits: int | None = None) -> LogVector:
    """Integrals of dx/y and x dx/y from Q to P inside one residue disc."""
    p = _check_padic_curve(curve)
    (xp, yp), (xq, yq) = P, Q
    xp, yp, xq, yq = (_padic(p, curve.zero.prec, c) for c in (xp, yp, xq, yq))
    if min(xp.valuation(), xq.valuation()) < 0:
        raise BadPositionError("infinite residue disc is not supported by tiny_log")
    if (xp - xq).valuation() < 1 or (yp - yq).valuation() < 1:
        raise ParameterError("points lie in different residue discs")
    if not yq.is_unit():
        raise BadPositionError("Weierstrass residue disc is not supported by tiny_log")
    prec = min(c.prec for c in (xp, yp, xq, yq))
    if digits is not None:
        prec = min(prec, digits)
    t = xp - xq
    if t.is_zero():
        return LogVector.zero(p, prec)
    r = Fraction(min(t.valuation(), prec))
    K = _order_for(r, p, prec)
    _, B = _integrand_series(curve.f, xq, K)
    B = [c / yq for c in B]
    xB = [xq * B[0]] + [xq * B[k] + B[k - 1] for k in range(1, K + 1)]
    out = []
    for s in (B, xB):
        val = _series_eval(_antiderivative(s), t)
        out.append(val.reduce(min(val.prec, prec, _truncation_floor(K, r, p))))
    return LogVector(*out)


# ----------------------------------------------------------------- kernel logs

def kernel_log(E: MumfordDivisor, digits: int) -> LogVector:
    """Log of a degree-two class in the kernel of reduction whose points sit in
    a pair of involution-swapped, non-Weierstrass, finite residue discs."""
    curve = E.curve
    p = _check_padic_curve(curve)
    prec = min([c.prec for c in E.u.coeffs + E.v.coeffs] + [digits])
    if prec < 2:
        raise PrecisionError("kernel class known to fewer than two digits")
    if E.is_identity():
        return LogVector.zero(p, prec)
    if E.degree == 1:
        raise BadPositionError("kernel class supported in the infinite disc")
    u0, u1 = E.u[0], E.u[1]
    if min(u0.valuation(), u1.valuation()) < 0:
        raise BadPositionError("kernel class supported in the infinite disc")
    if (u1 * u1 - u0 * 4).valuation() < 1:
        raise ParameterError("class is not in the kernel of reduction")
    xbar = PadicNum(p, curve.zero.prec, (-u1 / 2).residue)
    b = u1 + xbar * 2
    c = E.u(xbar)
    r = min(Fraction(b.valuation()), Fraction(c.valuation(), 2))
    if r <= 0:
        raise ParameterError("class is not in the kernel of reduction")
    K = _order_for(r, p, prec + LOSS_BUDGET)
    f0, B = _integrand_series(curve.f, xbar, K)
    V1 = E.v[1]
    if V1.valuation() >= 0:
        raise ParameterError("class is not in the kernel of reduction")
    V0 = E.v(xbar)
    tau = [V0 * 2 - b * V1, -b * V0 + (b * b - c * 2) * V1]
    while len(tau) <= K:
        tau.append(-b * tau[-1] - c * tau[-2])
    xB = [xbar * B[0]] + [xbar * B[k] + B[k - 1] for k in range(1, K + 1)]
    out = []
    for s in (B, xB):
        H = _mul_series(_antiderivative(s), B, K)
        acc = H[1] * tau[1]
        for k in range(2, K + 1):
            acc = acc + H[k] * tau[k]
        acc = acc / f0
        out.append(acc.reduce(min(acc.prec, prec, _truncation_floor(K, r, p))))
    return LogVector(*out)


def _aux_kernel_divisors(curve: HyperCurve):
    """Kernel classes R1 + R2 - 2oo with R1, R2 in swapped discs over a
    non-Weierstrass rational residue point."""
    p = curve.zero.p
    prec = curve.zero.prec
    fbar = curve.reduce_mod_p().f
    for x0 in range(p):
        v = fbar(GF(p)(x0))
        if v.is_zero() or not v.is_square():
            continue
        pts = []
        for k, sign in ((1, 1), (2, -1)):
            x = PadicNum(p, prec, x0 + k * p)
            y = padic_sqrt(curve.f(x))
            if y.residue % p != (sign * int(v.sqrt())) % p:
                y = -y
            pts.append((x, y))
        yield cantor_add(from_point(curve, *pts[0]), from_point(curve, *pts[1]))


def log_divisor(D: MumfordDivisor, digits: int, order: int | None = None,
                max_extra: int = 2) -> LogVector:
    """Log of an arbitrary class on a good-reduction curve over Q_p.

    The class is multiplied by n = |J(F_p)| p^e (e = 1, 2, ...); a kernel class
    in a bad position is retried with a larger e and finally shifted by an
    auxiliary kernel class of known logarithm.
    """
    curve = D.curve
    p = _check_padic_curve(curve)
    if order is None:
        order = jacobian_order(curve.reduce_mod_p()).jacobian_order
    last: Exception | None = None
    for e in range(1, 2 + max_extra):
        n = order * p**e
        E = scalar_mul(n, D)
        try:
            return kernel_log(E, digits + vp(n, p)) / n
        except BadPositionError as exc:
            last = exc
        for A in _aux_kernel_divisors(curve):
            try:
                lam = kernel_log(cantor_add(E, A), digits + vp(n, p)) - kernel_log(A, digits + vp(n, p))
                return lam / n
            except BadPositionError as exc:
                last = exc
    raise BadPositionError(f"bad position persists after retries: {last}")


def _lift_curve(curve: HyperCurve, W: int) -> HyperCurve:
    p = curve.p
    cs = [c.to_fraction() if isinstance(c, PadicNum) else c for c in curve.f.coeffs]
    return HyperCurve.over_padics([PadicNum(p, W, c) for c in cs], p, W)


def _lift_point(curve: HyperCurve, P, W: int):
    p = curve.p
    x, y = P
    xe = PadicNum(p, W, x.to_fraction() if isinstance(x, PadicNum) else x)
    y0 = _padic(p, W, y)
    fx = curve.f(xe)
    if not (y0 * y0 - fx).reduce(1).is_zero():
        raise ParameterError("point is not on the curve modulo p")
    try:
        root = padic_sqrt(fx)
    except ValueError:
        raise ParameterError("point does not lift to the curve") from None
    d1, d2 = (root - y0), (root + y0)
    v1 = d1.valuation() if not d1.is_zero() else d1.prec
    v2 = d2.valuation() if not d2.is_zero() else d2.prec
    return xe, (root if v1 >= v2 else -root)


def log_combination(curve: HyperCurve, terms, digits: int, max_work: int = 1600) -> LogVector:
    """Log of sum_k c_k [P_k - Q_k] for ``terms`` = [(c_k, P_k, Q_k), ...].

    Coordinates are read as exact values (their stored lifts) and y is
    re-lifted on the curve, so the computation can run at any working
    precision; the working precision is doubled until ``digits`` digits are
    certified by the precision tracking.
    """
    p = _check_padic_curve(curve)
    if curve.degree != 5:
        raise DomainError("logs on good-reduction curves need a quintic model")
    order = jacobian_order(curve.reduce_mod_p()).jacobian_order
    W = max(200, 10 * digits)
    lam = None
    while W <= max_work:
        cW = _lift_curve(curve, W)
        try:
            D = None
            for coef, P, Q in terms:
                Dk = scalar_mul(coef, point_difference(cW, _lift_point(cW, P, W), _lift_point(cW, Q, W)))
                D = Dk if D is None else cantor_add(D, Dk)
            lam = log_divisor(D, digits, order)
        except PrecisionError:
            lam = None
        if lam is not None and lam.prec >= digits:
            return lam.with_prec(digits)
        W *= 2
    raise PrecisionError(f"could not certify {digits} digits within working precision {max_work}")


def aj_log(curve: HyperCurve, P, Q, digits: int, max_work: int = 1600) -> LogVector:
    """Log of the class [P - Q] to ``digits`` certified p-adic digits."""
    p = _check_padic_curve(curve)
    x1, y1 = (_padic(p, curve.zero.prec, c) for c in P)
    x2, y2 = (_padic(p, curve.zero.prec, c) for c in Q)
    if x1 == x2 and y1 == y2:
        return LogVector.zero(p, digits)
    try:
        lam = tiny_log(curve, (x1, y1), (x2, y2), digits)
        if lam.prec >= digits:
            return lam
    except (ParameterError, BadPositionError):
        pass
    return log_combination(curve, [(1, P, Q)], digits, max_work)


# ----------------------------------------------------------------- relations

@dataclass(frozen=True)
class Relation:
    r: tuple[int, int, int]
    n: int
    p: int
    ambiguous: bool
    kernel_rank_mod_p: int

    def to_json(self) -> dict:
        return {"r": list(self.r), "n": self.n, "p": self.p, "ambiguous": self.ambiguous,
                "kernel_rank_mod_p": self.kernel_rank_mod_p}


def _centered(a: int, m: int) -> int:
    a %= m
    return a - m if a > m // 2 else a


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def log_matrix(logs: Sequence[LogVector], n: int) -> tuple[list[list[int]], int]:
    """2 x k integer matrix of log coordinates mod p^n, rescaled by a power of
    p so that some entry is a unit; returns (matrix, shift)."""
    p = logs[0].p
    entries = [c for lam in logs for c in lam]
    if min(lam.prec for lam in logs) < n:
        raise PrecisionError(f"logs carry fewer than {n} digits")
    nonzero = [c.valuation() for c in entries if not c.is_zero()]
    shift = -min(nonzero) if nonzero else 0
    m = p**n
    rows = []
    for j in range(2):
        row = []
        for lam in logs:
            c = (lam.l1, lam.l2)[j] * Fraction(p) ** shift
            row.append(c.reduce(min(n, c.prec)).residue % m if c.prec >= 1 else 0)
        rows.append(row)
    return rows, shift


def find_relation(l1: LogVector, l2: LogVector, l3: LogVector, n: int) -> Relation:
    """r in (Z/p^n)^3, some entry a unit, with sum r_k l_k = 0 mod p^n."""
    p = l1.p
    M, _ = log_matrix([l1, l2, l3], n)
    gens = kernel_mod_pn(M, p, n)
    m = p**n
    rank = _rank_mod_p(gens, p) if gens else 0
    for g in gens:
        unit = next((i for i, x in enumerate(g) if x % p), None)
        if unit is None:
            continue
        inv = pow(g[unit], -1, m)
        r = tuple(_centered(x * inv, m) for x in g)
        return Relation(r, n, p, rank >= 2, rank)
    raise PrecisionError("no primitive kernel vector found")


def relation_residual(r: Sequence[int], logs: Sequence[LogVector], n: int) -> list[int]:
    """sum r_k l_k mod p^n, coordinatewise (zero list when r is a relation)."""
    M, _ = log_matrix(list(logs), n)
    m = logs[0].p ** n
    return [sum(a * b for a, b in zip(row, r)) % m for row in M]


@dataclass(frozen=True)
class Independence:
    independent: bool
    valuation: int | None
    precision: int
    verdict: str

    def __bool__(self):
        return self.independent

    def to_json(self) -> dict:
        return {"independent": self.independent, "valuation": self.valuation,
                "precision": self.precision, "verdict": self.verdict}


def independence_check(la: LogVector, lb: LogVector, budget: int = LOSS_BUDGET) -> Independence:
    """Decide linear independence from the valuation of the 2x2 determinant."""
    prec = min(la.prec, lb.prec)
    det = la.l1 * lb.l2 - la.l2 * lb.l1
    threshold = prec - budget
    if not det.is_zero():
        v = det.valuation()
        if v < threshold:
            return Independence(True, v, prec, "independent")
        return Independence(False, v, prec, "dependent")
    if det.prec >= threshold:
        return Independence(False, None, prec, "dependent")
    return Independence(False, None, prec, "indeterminate")
