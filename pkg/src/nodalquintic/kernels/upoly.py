"""Dense univariate polynomials over an exact coefficient domain.

Coefficients are any objects with field-style operators (``FFElem``,
``Fraction``, ``PadicNum``). A zero element is carried alongside the
coefficient tuple so that the zero polynomial still knows its domain.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import DegenerateError, DomainError
from .fields import FFElem, GF


def _is_zero(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


class UPoly:
    """Immutable polynomial; ``coeffs[i]`` is the coefficient of x^i."""

    __slots__ = ("coeffs", "zero")

    def __init__(self, coeffs: Iterable, zero):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(zero + c for c in cs)
        self.zero = zero

    # ---------------------------------------------------------------- basics
    @classmethod
    def over(cls, field_or_zero, coeffs: Sequence) -> "UPoly":
        zero = field_or_zero.zero() if isinstance(field_or_zero, GF) else field_or_zero
        return cls(coeffs, zero)

    @property
    def one(self):
        return self.zero + 1

    def deg(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        if not self.coeffs:
            return self.zero
        return self.coeffs[-1]

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.zero

    def __len__(self):
        return len(self.coeffs)

    def _new(self, coeffs) -> "UPoly":
        return UPoly(coeffs, self.zero)

    def constant(self, c) -> "UPoly":
        return self._new([c])

    def x(self) -> "UPoly":
        return self._new([self.zero, self.one])

    def _other(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            return other
        return self.constant(other)

    def __add__(self, other):
        o = self._other(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return self._new([self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            return self._new([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return self._new([])
        out = [self.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return self._new(out)

    def __rmul__(self, other):
        return self._new([other * c for c in self.coeffs])

    def __pow__(self, n: int):
        result = self.constant(self.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return (self - other).is_zero()
        return (self - self.constant(other)).is_zero()

    def __hash__(self):
        return hash(tuple(repr(c) for c in self.coeffs))

    def __call__(self, x):
        acc = self.zero + 0 * x if not isinstance(x, UPoly) else x.constant(x.zero)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UPoly":
        return self._new([c * i for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "UPoly":
        if not self.coeffs:
            return self
        inv = self.one / self.lc()
        return self._new([c * inv for c in self.coeffs])

    def divmod(self, other: "UPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return self._new([]), self
        q = [self.zero] * (dq + 1)
        inv = self.one / other.lc()
        db = other.deg()
        for k in range(dq, -1, -1):
            c = r[k + db] * inv
            q[k] = c
            if _is_zero(c):
                continue
            for j, b in enumerate(other.coeffs):
                r[k + j] = r[k + j] - c * b
        return self._new(q), self._new(r[:db])

    def __floordiv__(self, other):
        return self.divmod(self._other(other))[0]

    def __mod__(self, other):
        return self.divmod(self._other(other))[1]

    def shift(self, k: int) -> "UPoly":
        """Multiply by x^k."""
        return self._new([self.zero] * k + list(self.coeffs))

    def reverse(self, n: int | None = None) -> "UPoly":
        """x^n * self(1/x) with n defaulting to deg."""
        n = self.deg() if n is None else n
        cs = list(self.coeffs) + [self.zero] * (n + 1 - len(self.coeffs))
        return self._new(cs[: n + 1][::-1])

    def map(self, fn) -> "UPoly":
        return UPoly([fn(c) for c in self.coeffs], fn(self.zero))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if _is_zero(c):
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(terms)


# -------------------------------------------------------------- algorithms

def gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd over a field (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def xgcd(a: UPoly, b: UPoly):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = a.constant(a.one), a._new([])
    t0, t1 = a._new([]), a.constant(a.one)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = a.one / r0.lc()
    return r0 * inv, s0 * inv, t0 * inv


def powmod(base: UPoly, n: int, mod: UPoly) -> UPoly:
    result = base.constant(base.one) % mod
    b = base % mod
    while n:
        if n & 1:
            result = (result * b) % mod
        b = (b * b) % mod
        n >>= 1
    return result


def _field_of(f: UPoly) -> GF:
    z = f.zero
    if not isinstance(z, FFElem):
        raise DomainError("operation requires a finite-field coefficient domain")
    return z.field


def _pth_root(f: UPoly) -> UPoly:
    F = _field_of(f)
    p = F.p
    e = F.k - 1
    cs = [f.coeffs[i] ** (p**e) for i in range(0, len(f.coeffs), p)]
    return f._new(cs)


def squarefree_decomposition(f: UPoly) -> list[tuple[UPoly, int]]:
    """Square-free factors (g_i, e_i) with f = lc * prod g_i^e_i, over F_q."""
    F = _field_of(f)
    if f.is_zero():
        raise DegenerateError("square-free decomposition of 0")
    f = f.monic()
    if f.deg() == 0:
        return []
    out: list[tuple[UPoly, int]] = []
    df = f.derivative()
    if df.is_zero():
        return [(g, e * F.p) for g, e in squarefree_decomposition(_pth_root(f))]
    c = gcd(f, df)
    w = f // c
    i = 1
    while w.deg() > 0:
        y = gcd(w, c)
        z = w // y
        if z.deg() > 0:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if c.deg() > 0:
        out.extend((g, e * F.p) for g, e in squarefree_decomposition(_pth_root(c.monic())))
    out.sort(key=lambda ge: ge[1])
    return out


def is_squarefree(f: UPoly) -> bool:
    return all(e == 1 for _, e in squarefree_decomposition(f))


def _canonical_sqrt(c: FFElem) -> FFElem:
    r = c.sqrt()
    s = -r
    return min(r, s, key=lambda e: tuple(reversed(e.c)))


def poly_square_root(f: UPoly):
    """Decide whether f = c * h^2 with c a nonzero square in F_q.

    Returns ``(h, sqrt_c)`` with h monic, or ``None`` when f is not of that
    form. The square root of c is the representative with the smaller
    coordinate vector. Raises DegenerateError on f = 0.
    """
    if f.is_zero():
        raise DegenerateError("degenerate fiber: f = 0 (special fiber non-reduced)")
    c = f.lc()
    if not c.is_square():
        return None
    h = f.constant(f.one)
    for g, e in squarefree_decomposition(f):
        if e % 2:
            return None
        h = h * g ** (e // 2)
    return h, _canonical_sqrt(c)


def count_roots_in_base(f: UPoly) -> int:
    """Number of distinct roots of f in the coefficient field F_q."""
    F = _field_of(f)
    if f.is_zero():
        raise DegenerateError("zero polynomial")
    x = f.x()
    xq = powmod(x, F.q, f)
    return gcd(f, xq - x).deg()


def roots_in_base(f: UPoly) -> list:
    """Distinct roots in F_q, by exhaustive search (small fields only)."""
    F = _field_of(f)
    return [a for a in F.elements() if f(a).is_zero()]


def distinct_degree_profile(f: UPoly) -> list[int]:
    """Degrees of the irreducible factors of a square-free f over F_q."""
    F = _field_of(f)
    x = f.x()
    rest = f.monic()
    degs: list[int] = []
    d = 0
    xp = x
    while rest.deg() > 0:
        d += 1
        if 2 * d > rest.deg():
            degs.append(rest.deg())
            break
        xp = powmod(xp, F.q, rest)
        g = gcd(rest, xp - x)
        if g.deg() > 0:
            degs.extend([d] * (g.deg() // d))
            rest = rest // g
            xp = xp % rest if rest.deg() > 0 else xp
    return sorted(degs)


def resultant(a: UPoly, b: UPoly):
    """Resultant via Euclid over a field."""
    if a.is_zero() or b.is_zero():
        return a.zero
    res = a.one
    while b.deg() > 0:
        r = a % b
        if r.is_zero():
            return a.zero
        da, db, dr = a.deg(), b.deg(), r.deg()
        if (da * db) % 2:
            res = -res
        res = res * b.lc() ** (da - dr)
        a, b = b, r
    return res * b.lc() ** a.deg()


def qpoly(coeffs: Sequence) -> UPoly:
    """Convenience constructor over Q."""
    return UPoly([Fraction(c) for c in coeffs], Fraction(0))
