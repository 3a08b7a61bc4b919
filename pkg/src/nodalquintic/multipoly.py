"""Sparse multivariate polynomials with graded reverse-lexicographic order.

An ``MPoly`` carries its variable names and a map from exponent tuples to
nonzero coefficients. Coefficients may be ``int``, ``Fraction``, ``FFElem``
or ``PadicNum``; family parameters are ordinary variables that
:func:`specialize` later substitutes away.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ParameterError

Monomial = tuple


def _nz(c) -> bool:
    if hasattr(c, "is_zero"):
        return not c.is_zero()
    return c != 0


def grevlex_key(m: Monomial):
    """Sort key: larger key means larger monomial in grevlex."""
    return (sum(m), tuple(-e for e in reversed(m)))


def homogeneous_monomials(n_vars: int, degree: int) -> list[Monomial]:
    """All exponent vectors of the given total degree, grevlex-descending."""
    if n_vars < 1 or degree < 0:
        raise ParameterError("need n_vars >= 1 and degree >= 0")
    out = []
    for combo in combinations_with_replacement(range(n_vars), degree):
        e = [0] * n_vars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=grevlex_key, reverse=True)
    return out


class MPoly:
    __slots__ = ("names", "terms")

    def __init__(self, names: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        self.names = tuple(names)
        n = len(self.names)
        clean = {}
        for m, c in (terms or {}).items():
            if len(m) != n:
                raise ParameterError("exponent vector length does not match variable count")
            if _nz(c):
                clean[tuple(m)] = c
        self.terms = clean

    # ------------------------------------------------------------ builders
    @classmethod
    def var(cls, names: Sequence[str], name: str, one=1) -> "MPoly":
        e = [0] * len(names)
        e[list(names).index(name)] = 1
        return cls(names, {tuple(e): one})

    @classmethod
    def const(cls, names: Sequence[str], c) -> "MPoly":
        return cls(names, {(0,) * len(names): c})

    def gens(self, one=1) -> list["MPoly"]:
        return [MPoly.var(self.names, n, one) for n in self.names]

    # ------------------------------------------------------------ queries
    @property
    def nvars(self) -> int:
        return len(self.names)

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms, key=grevlex_key, reverse=True)

    def items(self):
        for m in self.monomials():
            yield m, self.terms[m]

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(m) for m in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (degree is None or degs == {degree})

    def coefficient(self, m: Monomial):
        return self.terms.get(tuple(m), 0)

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=grevlex_key)

    def support_vars(self) -> set[str]:
        used = set()
        for m in self.terms:
            used.update(self.names[i] for i, e in enumerate(m) if e)
        return used

    # ------------------------------------------------------------ arithmetic
    def _same_ring(self, other) -> bool:
        # an MPoly over other variables acts as a coefficient
        return isinstance(other, MPoly) and other.names == self.names

    def _lift(self, other) -> "MPoly":
        if self._same_ring(other):
            return other
        return MPoly.const(self.names, other)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out[m] + c if m in out else c
        return MPoly(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.names, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not self._same_ring(other):
            return MPoly(self.names, {m: c * other for m, c in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out[m] + c1 * c2 if m in out else c1 * c2
        return MPoly(self.names, out)

    def __rmul__(self, other):
        return MPoly(self.names, {m: other * c for m, c in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ParameterError("negative power")
        result = MPoly.const(self.names, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.names, frozenset((m, repr(c)) for m, c in self.terms.items())))

    def map_coeffs(self, fn: Callable) -> "MPoly":
        return MPoly(self.names, {m: fn(c) for m, c in self.terms.items()})

    def __repr__(self):
        return format_mpoly(self)

    # ------------------------------------------------------------ calculus
    def partial(self, var) -> "MPoly":
        return partial_derivative(self, var)

    def __call__(self, *point):
        return evaluate(self, point)


def _index(f: MPoly, var) -> int:
    if isinstance(var, str):
        try:
            return f.names.index(var)
        except ValueError:
            raise ParameterError(f"unknown variable {var!r}") from None
    if not 0 <= var < f.nvars:
        raise ParameterError(f"variable index {var} out of range")
    return var


def partial_derivative(f: MPoly, var) -> MPoly:
    """Formal derivative with respect to a variable (index or name)."""
    i = _index(f, var)
    out = {}
    for m, c in f.terms.items():
        e = m[i]
        if e:
            mm = m[:i] + (e - 1,) + m[i + 1:]
            out[mm] = c * e
    return MPoly(f.names, out)


def evaluate(f: MPoly, point: Sequence):
    """Evaluate at a full point; the result lives in the coefficient/point ring."""
    if len(point) != f.nvars:
        raise ParameterError("point has the wrong number of coordinates")
    total = 0
    for m, c in f.terms.items():
        t = c
        for x, e in zip(point, m):
            if e:
                t = t * x**e
        total = total + t
    return total


def substitute(f: MPoly, images: Mapping[str, object], names: Sequence[str]) -> MPoly:
    """Replace variables by polynomials in ``names``; unlisted variables must
    belong to ``names`` and are carried over."""
    target = tuple(names)
    gens = {}
    for v in f.names:
        if v in images:
            img = images[v]
            gens[v] = img if isinstance(img, MPoly) else MPoly.const(target, img)
        elif v in target:
            gens[v] = MPoly.var(target, v)
        else:
            raise ParameterError(f"no image for variable {v!r}")
    out = MPoly(target)
    powers: dict = {}
    for m, c in f.terms.items():
        t = MPoly.const(target, c)
        for v, e in zip(f.names, m):
            if e:
                key = (v, e)
                if key not in powers:
                    powers[key] = gens[v] ** e
                t = t * powers[key]
        out = out + t
    return out


def specialize(f: MPoly, assignment: Mapping[str, object], keep: Sequence[str]) -> MPoly:
    """Evaluate every variable outside ``keep`` at ``assignment``.

    The result is a polynomial in ``keep`` whose coefficients are the
    assigned values combined with the original coefficients.
    """
    keep = tuple(keep)
    missing = sorted(v for v in f.support_vars() if v not in keep and v not in assignment)
    if missing:
        raise ParameterError("unassigned parameters: " + ", ".join(missing))
    kidx = [f.names.index(k) if k in f.names else None for k in keep]
    others = [(i, v) for i, v in enumerate(f.names) if v not in keep]
    out: dict = {}
    for m, c in f.terms.items():
        t = c
        for i, v in others:
            if m[i]:
                t = t * assignment[v] ** m[i]
        mm = tuple(m[i] if i is not None else 0 for i in kidx)
        out[mm] = out[mm] + t if mm in out else t
    return MPoly(keep, out)


def divide(f: MPoly, divisors: Sequence[MPoly]):
    """Multivariate division in grevlex; returns (quotients, remainder).

    Leading coefficients must be invertible in the coefficient domain.
    """
    quots = [MPoly(f.names) for _ in divisors]
    rem = MPoly(f.names)
    p = f
    leads = [(g.leading_monomial(), g.terms[g.leading_monomial()]) for g in divisors]
    while not p.is_zero():
        lm = p.leading_monomial()
        lc = p.terms[lm]
        for k, (gm, gc) in enumerate(leads):
            if all(a >= b for a, b in zip(lm, gm)):
                shift = tuple(a - b for a, b in zip(lm, gm))
                if isinstance(lc, int) and isinstance(gc, int):
                    coef = Fraction(lc, gc)
                else:
                    coef = lc / gc
                term = MPoly(f.names, {shift: coef})
                quots[k] = quots[k] + term
                p = p - term * divisors[k]
                break
        else:
            rem = rem + MPoly(f.names, {lm: lc})
            p = p - MPoly(f.names, {lm: lc})
    return quots, rem


# ---------------------------------------------------------------- text I/O

def format_mpoly(f: MPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for m, c in f.items():
        mono = "*".join(
            (n if e == 1 else f"{n}^{e}") for n, e in zip(f.names, m) if e)
        cs = str(c)
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append("-" + mono)
        else:
            parts.append(f"({cs})*{mono}" if re.search(r"[\s+/]|.-", cs) else f"{cs}*{mono}")
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def parse_mpoly(text: str, names: Sequence[str], coeff: Callable = int) -> MPoly:
    """Parse ASCII polynomial text (``^`` powers, ``*`` optional)."""
    names = tuple(names)
    toks: list[tuple[str, str]] = []
    for num, ident, other in _TOKEN.findall(text):
        if num:
            toks.append(("num", num))
        elif ident:
            toks.extend(_split_ident(ident, names))
        elif other.strip():
            toks.append(("op", other))
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("end", "")

    def take():
        nonlocal pos
        t = peek()
        pos += 1
        return t

    def expr():
        if peek() == ("op", "-"):
            take()
            acc = -term()
        else:
            if peek() == ("op", "+"):
                take()
            acc = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = power()
        while True:
            t = peek()
            if t == ("op", "*"):
                take()
                acc = acc * power()
            elif t == ("op", "/"):
                take()
                d = power()
                if not d.is_homogeneous(0) or d.is_zero():
                    raise ParameterError("division only by nonzero constants")
                acc = acc * (Fraction(1) / d.coefficient((0,) * len(names)))
            elif t[0] in ("num", "var") or t == ("op", "("):
                acc = acc * power()
            else:
                return acc

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num":
                raise ParameterError("exponent must be a non-negative integer")
            base = base ** int(val)
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return MPoly.const(names, coeff(int(val)))
        if kind == "var":
            return MPoly.var(names, val, coeff(1))
        if (kind, val) == ("op", "("):
            e = expr()
            if take() != ("op", ")"):
                raise ParameterError("unbalanced parentheses")
            return e
        if (kind, val) == ("op", "-"):
            return -power()
        raise ParameterError(f"unexpected token {val!r} in {text!r}")

    result = expr()
    if pos != len(toks):
        raise ParameterError(f"trailing input in {text!r}")
    return result


def _split_ident(ident: str, names: tuple) -> list[tuple[str, str]]:
    if ident in names:
        return [("var", ident)]
    out = []
    i = 0
    while i < len(ident):
        for n in sorted(names, key=len, reverse=True):
            if ident.startswith(n, i):
                out.append(("var", n))
                i += len(n)
                break
        else:
            raise ParameterError(f"unknown symbol {ident!r}")
    return out


def poly_from_terms(names: Sequence[str], pairs: Iterable[tuple[Monomial, object]]) -> MPoly:
    out: dict = {}
    for m, c in pairs:
        out[m] = out[m] + c if m in out else c
    return MPoly(names, out)
