"""Buchberger's algorithm over F_p in graded reverse-lexicographic order.

Polynomials are plain dicts ``{exponent tuple: int in [1, p)}``.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable

from .multipoly import MPoly, grevlex_key

Poly = dict


def from_mpoly(f: MPoly, p: int) -> Poly:
    out = {}
    for m, c in f.terms.items():
        if isinstance(c, Fraction):
            v = c.numerator * pow(c.denominator, -1, p) % p
        else:
            v = int(c) % p
        if v:
            out[m] = v
    return out


def lead(f: Poly):
    return max(f, key=grevlex_key)


def _monic(f: Poly, p: int) -> Poly:
    lm = lead(f)
    inv = pow(f[lm], -1, p)
    return {m: c * inv % p for m, c in f.items()}


def _sub_mul(f: Poly, g: Poly, coef: int, shift, p: int) -> Poly:
    """f - coef * x^shift * g."""
    out = dict(f)
    for m, c in g.items():
        mm = tuple(a + b for a, b in zip(m, shift))
        v = (out.get(mm, 0) - coef * c) % p
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def reduce(f: Poly, basis: list[Poly], p: int, leads: list | None = None) -> Poly:
    """Full normal form of f with respect to monic ``basis``."""
    f = dict(f)
    rem: Poly = {}
    if leads is None:
        leads = [lead(g) for g in basis]
    while f:
        lm = lead(f)
        c = f[lm]
        for g, gm in zip(basis, leads):
            if _divides(gm, lm):
                f = _sub_mul(f, g, c, tuple(a - b for a, b in zip(lm, gm)), p)
                break
        else:
            rem[lm] = c
            del f[lm]
    return rem


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def groebner_basis(polys: Iterable[Poly], p: int, stop_on_unit: bool = True) -> list[Poly]:
    """Reduced Groebner basis (monic, grevlex) of the ideal over F_p."""
    G: list[Poly] = []
    leads: list = []
    for f in polys:
        f = {m: c % p for m, c in f.items() if c % p}
        if f:
            G.append(_monic(f, p))
            leads.append(lead(G[-1]))
    if not G:
        return []
    heap: list = []
    pending: set = set()

    def push(i, j):
        L = _lcm(leads[i], leads[j])
        heapq.heappush(heap, (grevlex_key(L), i, j))
        pending.add((i, j))

    for j in range(len(G)):
        for i in range(j):
            push(i, j)
    while heap:
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        li, lj = leads[i], leads[j]
        L = _lcm(li, lj)
        if all(a + b == c for a, b, c in zip(li, lj, L)):
            continue
        if any(k != i and k != j and _divides(leads[k], L)
               and (min(i, k), max(i, k)) not in pending
               and (min(j, k), max(j, k)) not in pending
               for k in range(len(G))):
            continue
        s = {tuple(a + b for a, b in zip(m, _shift(L, li))): c for m, c in G[i].items()}
        s = _sub_mul(s, G[j], 1, _shift(L, lj), p)
        r = reduce(s, G, p, leads)
        if not r:
            continue
        r = _monic(r, p)
        lr = lead(r)
        if stop_on_unit and sum(lr) == 0:
            return [r]
        G.append(r)
        leads.append(lr)
        k = len(G) - 1
        for i2 in range(k):
            push(i2, k)
    return _interreduce(G, p)


def _shift(L, m):
    return tuple(a - b for a, b in zip(L, m))


def _interreduce(G: list[Poly], p: int) -> list[Poly]:
    G = sorted(G, key=lambda g: grevlex_key(lead(g)))
    kept: list[Poly] = []
    for g in G:
        if not any(_divides(lead(h), lead(g)) for h in kept):
            kept.append(g)
    out = []
    for i, g in enumerate(kept):
        others = kept[:i] + kept[i + 1:]
        out.append(_monic(reduce(g, others, p), p))
    out.sort(key=lambda g: grevlex_key(lead(g)), reverse=True)
    return out


def contains_one(polys: Iterable[Poly], p: int) -> bool:
    G = groebner_basis(polys, p)
    return len(G) == 1 and sum(lead(G[0])) == 0
