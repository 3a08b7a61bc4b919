"""Finite fields F_q, q = p^k, with elements as coordinate tuples.

Elements of ``GF(p, k)`` are coordinate vectors over F_p with respect to the
power basis of ``F_p[x]/(m(x))``, ``m`` the lexicographically first monic
irreducible polynomial of degree ``k``. ``GF(p, 1)`` is the prime field.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from ..errors import DomainError, ParameterError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


is_prime = _is_prime


def _polymulmod(a, b, m, p):
    """Product of coefficient lists a*b reduced modulo monic m, over F_p."""
    k = len(m) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for j in range(k + 1):
                prod[d - k + j] = (prod[d - k + j] - c * m[j]) % p
    prod = prod[:k] + [0] * (k - len(prod[:k]))
    return prod


def _is_irreducible(m, p) -> bool:
    # brute-force factor search; only small k are ever requested
    k = len(m) - 1
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            if _divides(g, m, p):
                return False
    return True


def _divides(g, m, p) -> bool:
    r = list(m)
    dg = len(g) - 1
    while len(r) - 1 >= dg:
        c = r[-1]
        if c:
            off = len(r) - 1 - dg
            for j in range(dg + 1):
                r[off + j] = (r[off + j] - c * g[j]) % p
        r.pop()
    return not any(r)


@lru_cache(maxsize=None)
def _modulus(p: int, k: int) -> tuple:
    if k == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=k):
        m = list(reversed(tail)) + [1]
        if m[0] == 0:
            continue
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")


class GF:
    """The finite field with p^k elements."""

    _cache: dict = {}

    def __new__(cls, p: int, k: int = 1):
        key = (p, k)
        if key in cls._cache:
            return cls._cache[key]
        if not _is_prime(p):
            raise ParameterError(f"{p} is not prime")
        if k < 1:
            raise ParameterError("extension degree must be >= 1")
        obj = super().__new__(cls)
        obj.p = p
        obj.k = k
        obj.q = p**k
        obj.modulus = _modulus(p, k)
        cls._cache[key] = obj
        return obj

    def __getnewargs__(self):
        return (self.p, self.k)

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __call__(self, value) -> "FFElem":
        if isinstance(value, FFElem):
            if value.field is not self:
                if value.field.p == self.p and value.field.k == 1:
                    return self.from_int(value.c[0])
                raise DomainError(f"cannot coerce {value.field} element into {self}")
            return value
        if isinstance(value, (tuple, list)):
            c = tuple(int(x) % self.p for x in value)
            if len(c) > self.k:
                raise ParameterError("too many coordinates")
            return FFElem(self, c + (0,) * (self.k - len(c)))
        return self.from_int(value)

    def from_int(self, n: int) -> "FFElem":
        return FFElem(self, (int(n) % self.p,) + (0,) * (self.k - 1))

    def zero(self) -> "FFElem":
        return self.from_int(0)

    def one(self) -> "FFElem":
        return self.from_int(1)

    def gen(self) -> "FFElem":
        """The class of x in F_p[x]/(m)."""
        if self.k == 1:
            raise ParameterError("prime field has no polynomial generator")
        return self((0, 1))

    def elements(self) -> Iterator["FFElem"]:
        for c in itertools.product(range(self.p), repeat=self.k):
            yield FFElem(self, tuple(reversed(c)))

    def random(self, rng: random.Random | None = None) -> "FFElem":
        rng = rng or random
        return FFElem(self, tuple(rng.randrange(self.p) for _ in range(self.k)))

    def frobenius(self, a: "FFElem") -> "FFElem":
        return a**self.p


class FFElem:
    """An element of ``GF(p, k)``; immutable."""

    __slots__ = ("field", "c")

    def __init__(self, field: GF, c: tuple):
        self.field = field
        self.c = c

    def _coerce(self, other) -> "FFElem | None":
        if isinstance(other, FFElem):
            if other.field is not self.field:
                raise DomainError(f"mixed-domain arithmetic: {self.field} vs {other.field}")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, Fraction):
            F = self.field
            return F.from_int(other.numerator) / F.from_int(other.denominator)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FFElem(self.field, tuple((a + b) % p for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FFElem(self.field, tuple(-a % p for a in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FFElem(self.field, tuple((a - b) % p for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        F = self.field
        if F.k == 1:
            return FFElem(F, (self.c[0] * o.c[0] % F.p,))
        return FFElem(F, tuple(_polymulmod(list(self.c), list(o.c), F.modulus, F.p)))

    __rmul__ = __mul__

    def inverse(self) -> "FFElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        F = self.field
        if F.k == 1:
            return FFElem(F, (pow(self.c[0], -1, F.p),))
        return self ** (F.q - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        F = self.field
        if F.k == 1:
            return FFElem(F, (pow(self.c[0], n, F.p),))
        result = F.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.field is other.field and self.c == other.c
        if isinstance(other, int):
            return self.c == self.field.from_int(other).c
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.c))

    def __bool__(self):
        return any(self.c)

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_square(self) -> bool:
        if self.is_zero():
            return True
        return self ** ((self.field.q - 1) // 2) == 1

    def sqrt(self) -> "FFElem":
        """A square root (Tonelli-Shanks); raises ValueError on non-squares."""
        if self.is_zero():
            return self
        if not self.is_square():
            raise ValueError("not a square")
        F = self.field
        q = F.q
        if q % 4 == 3:
            return self ** ((q + 1) // 4)
        s, t = 0, q - 1
        while t % 2 == 0:
            t //= 2
            s += 1
        z = next(e for e in F.elements() if not e.is_zero() and not e.is_square())
        m, c, r, u = s, z**t, self ** ((t + 1) // 2), self**t
        while u != 1:
            i, uu = 0, u
            while uu != 1:
                uu = uu * uu
                i += 1
            b = c ** (1 << (m - i - 1))
            m, c = i, b * b
            r, u = r * b, u * c
        return r

    def __int__(self):
        if self.field.k != 1:
            raise TypeError("only prime-field elements convert to int")
        return self.c[0]

    def __repr__(self):
        if self.field.k == 1:
            return str(self.c[0])
        terms = [f"{a}*g^{i}" if i else str(a) for i, a in enumerate(self.c) if a]
        return " + ".join(terms) or "0"
