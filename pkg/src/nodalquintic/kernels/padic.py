"""Fixed-precision p-adic numbers.

A ``PadicNum`` stores ``p^val * unit + O(p^prec)``. The absolute precision
``prec`` is carried through every operation (zealous arithmetic): a result is
never claimed to more digits than its inputs justify. Values of negative
valuation are allowed so that quotients can be formed; the plain Z/p^N view
is available through :attr:`PadicNum.residue`.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import DegenerateError, DomainError, ParameterError, PrecisionError
from .fields import GF


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicNum:
    __slots__ = ("p", "prec", "val", "unit")

    def __init__(self, p: int, prec: int, value=0):
        if p == 2:
            raise ParameterError("p = 2 is not supported")
        if isinstance(value, PadicNum):
            if value.p != p:
                raise DomainError("different primes")
            value = value.to_fraction()
        value = Fraction(value)
        self.p = p
        if value == 0:
            self._set(prec, 0, prec)
            return
        vn, vd = vp(value.numerator, p), vp(value.denominator, p)
        v = vn - vd
        num = value.numerator // p**vn
        den = value.denominator // p**vd
        if v >= prec:
            self._set(prec, 0, prec)
            return
        mod = p ** (prec - v)
        self._set(v, num * pow(den, -1, mod) % mod, prec)

    def _set(self, val, unit, prec):
        self.val = val
        self.unit = unit
        self.prec = prec

    @classmethod
    def _raw(cls, p: int, val: int, unit: int, prec: int) -> "PadicNum":
        """Build from components, normalising the unit part."""
        obj = cls.__new__(cls)
        obj.p = p
        if unit == 0 or val >= prec:
            obj._set(prec, 0, prec)
            return obj
        while unit % p == 0:
            unit //= p
            val += 1
            if val >= prec:
                obj._set(prec, 0, prec)
                return obj
        obj._set(val, unit % p ** (prec - val), prec)
        return obj

    @classmethod
    def from_residue(cls, p: int, prec: int, residue: int) -> "PadicNum":
        return cls(p, prec, int(residue) % p**prec)

    # ------------------------------------------------------------------ views
    @property
    def residue(self) -> int:
        """Representative in [0, p^prec) (requires non-negative valuation)."""
        if self.val < 0:
            raise PrecisionError("negative valuation has no residue in Z/p^N")
        return self.p**self.val * self.unit % self.p**self.prec

    @property
    def relprec(self) -> int:
        return self.prec - self.val

    def valuation(self) -> int:
        return self.val

    def known_valuation(self) -> bool:
        return not self.is_zero()

    def is_zero(self) -> bool:
        return self.unit == 0

    def is_unit(self) -> bool:
        return self.val == 0 and self.unit != 0

    def to_fraction(self) -> Fraction:
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def lift(self) -> int:
        return self.residue

    def centered(self) -> int:
        """Representative of least absolute value."""
        r = self.residue
        m = self.p**self.prec
        return r - m if r > m // 2 else r

    def reduce(self, prec: int) -> "PadicNum":
        """Truncate to a lower absolute precision (ring homomorphism)."""
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision from {self.prec} to {prec}")
        return PadicNum._raw(self.p, self.val, self.unit, prec)

    def with_prec(self, prec: int) -> "PadicNum":
        """Reinterpret with a different absolute precision (lift by zero digits)."""
        return PadicNum._raw(self.p, self.val, self.unit, prec)

    def mod_p(self) -> int:
        if self.val < 0:
            raise PrecisionError("element is not p-integral")
        return self.residue % self.p

    # ------------------------------------------------------------ arithmetic
    def _coerce(self, other) -> "PadicNum | None":
        if isinstance(other, PadicNum):
            if other.p != self.p:
                raise DomainError(f"mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            # exact constant: give it enough digits never to be the bottleneck
            fr = Fraction(other)
            v = 0 if fr == 0 else vp(fr.numerator, self.p) - vp(fr.denominator, self.p)
            return PadicNum(self.p, self.prec + abs(v) + abs(self.val) + 2, fr)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.p
        prec = min(self.prec, o.prec)
        if self.is_zero() and o.is_zero():
            return PadicNum._raw(p, prec, 0, prec)
        if self.is_zero():
            return o.reduce(prec) if o.prec >= prec else o
        if o.is_zero():
            return self.reduce(prec)
        v = min(self.val, o.val)
        if v >= prec:
            return PadicNum._raw(p, prec, 0, prec)
        total = self.unit * p ** (self.val - v) + o.unit * p ** (o.val - v)
        return PadicNum._raw(p, v, total % p ** (prec - v), prec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicNum._raw(self.p, self.val, -self.unit, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prec = min(self.prec + o.val, o.prec + self.val)
        val = self.val + o.val
        if self.is_zero() or o.is_zero():
            return PadicNum._raw(self.p, prec, 0, prec)
        return PadicNum._raw(self.p, val, self.unit * o.unit, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNum":
        if self.is_zero():
            raise PrecisionError("inverse of an element that is zero to working precision")
        rp = self.relprec
        val = -self.val
        return PadicNum._raw(self.p, val, pow(self.unit, -1, self.p**rp), val + rp)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNum(self.p, self.prec, 1)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        """Equality up to the smaller of the two precisions."""
        if isinstance(other, PadicNum):
            if other.p != self.p:
                return False
            return (self - other).is_zero()
        if isinstance(other, (int, Fraction)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        raise TypeError("PadicNum is unhashable (equality is precision-dependent)")

    def __repr__(self):
        return f"PadicNum({self})"

    def __str__(self):
        return format_padic(self)


_PADIC_RE = re.compile(
    r"^\s*(?:(-?\d+)(?:\*(\d+)\^(-?\d+))?)\s+mod\s+(\d+)\^(-?\d+)\s*$"
)


def format_padic(x: PadicNum) -> str:
    """Serialise as ``"u*p^k mod p^N"`` (or ``"0 mod p^N"``)."""
    if x.is_zero():
        return f"0 mod {x.p}^{x.prec}"
    return f"{x.unit}*{x.p}^{x.val} mod {x.p}^{x.prec}"


def parse_padic(text: str, p: int | None = None) -> PadicNum:
    m = _PADIC_RE.match(text)
    if not m:
        raise ParameterError(f"cannot parse p-adic value {text!r}")
    unit, base, exp, modp, prec = m.groups()
    q = int(modp)
    if p is not None and q != p:
        raise ParameterError(f"expected prime {p}, got {q}")
    if base is not None and int(base) != q:
        raise ParameterError("base and modulus primes differ")
    value = Fraction(int(unit)) * Fraction(q) ** (int(exp) if exp is not None else 0)
    return PadicNum(q, int(prec), value)


# ---------------------------------------------------------------- algorithms

def padic_sqrt(a: PadicNum) -> PadicNum:
    """Square root of a p-adic square of even valuation (p odd).

    The result has relative precision equal to that of ``a``.
    Raises ValueError when ``a`` is not a square.
    """
    if a.is_zero():
        raise PrecisionError("square root of an element that is zero to working precision")
    if a.val % 2:
        raise ValueError("odd valuation: not a square")
    p = a.p
    u0 = a.unit % p
    F = GF(p)
    if not F(u0).is_square():
        raise ValueError("unit part is not a square mod p")
    r = int(F(u0).sqrt())
    rp = a.relprec
    mod = p
    target = p**rp
    while mod < target:
        mod = min(mod * mod, target)
        r = (r - (r * r - a.unit) * pow(2 * r, -1, mod)) % mod
    half = a.val // 2
    return PadicNum._raw(p, half, r, half + rp)


def hensel_quadratic_roots(a: PadicNum, b: PadicNum, c: PadicNum,
                           allow_reduced: bool = False):
    """Roots of a*r^2 + b*r + c over Z_p at the common precision.

    Returns a pair of roots sorted by residue, or ``None`` when the
    polynomial has no root in Z_p (discriminant a non-square unit, or of odd
    valuation). A discriminant of positive even valuation loses precision;
    that case raises :class:`PrecisionError` unless ``allow_reduced``.
    """
    p = a.p
    if p == 2:
        raise ParameterError("p = 2 is not supported")
    if not a.is_unit():
        raise DegenerateError("leading coefficient degenerate (not a p-adic unit)")
    N = min(a.prec, b.prec, c.prec)
    a, b, c = a.reduce(N), b.reduce(N), c.reduce(N)
    disc = b * b - 4 * a * c
    if disc.is_zero():
        if not allow_reduced:
            raise PrecisionError("discriminant vanishes to working precision")
        r = -b / (2 * a)
        half = (N + 1) // 2
        r = r.reduce(min(r.prec, half))
        return (r, r)
    if disc.val % 2:
        return None
    if not GF(p)(disc.unit % p).is_square():
        return None
    if disc.val > 0 and not allow_reduced:
        raise PrecisionError(
            f"discriminant has valuation {disc.val}; roots only known to "
            f"{N - disc.val // 2} digits")
    s = padic_sqrt(disc)
    inv2a = (2 * a).inverse()
    roots = [(-b + s) * inv2a, (-b - s) * inv2a]
    roots.sort(key=lambda r: r.residue)
    return tuple(roots)


def padic_log_principal(x: PadicNum) -> PadicNum:
    """p-adic logarithm of a principal unit x = 1 + z, v(z) >= 1."""
    p = x.p
    z = x - 1
    if not z.is_zero() and z.val < 1:
        raise ValueError("log series needs a principal unit")
    N = x.prec
    if z.is_zero():
        return PadicNum(p, N, 0)
    zt = z.residue
    mod = p**N
    total = 0
    k = 1
    # k*v(z) - v_p(k) increases with k, so the first vanishing term ends the sum
    while k * z.val - _ilog(k, p) < N:
        e = vp(k, p)
        term = zt**k // p**e * pow(k // p**e, -1, mod) % mod
        total = (total + term if k % 2 else total - term) % mod
        k += 1
    return PadicNum(p, N, total)


def _ilog(k: int, p: int) -> int:
    e = 0
    while k >= p:
        k //= p
        e += 1
    return e
