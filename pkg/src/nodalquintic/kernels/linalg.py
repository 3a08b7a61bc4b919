"""Exact linear algebra: fields, Z/p^N, and a numpy fast path mod p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import DomainError, ParameterError
from .fields import FFElem, GF


@dataclass(frozen=True)
class ExactMatrix:
    """A matrix of exact entries from one domain (F_q or Q)."""

    rows: tuple

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def domain(self):
        """The common coefficient domain: a ``GF`` or the string ``"QQ"``."""
        fields = set()
        rational = False
        for row in self.rows:
            for e in row:
                if isinstance(e, FFElem):
                    fields.add(e.field)
                elif isinstance(e, (int, Fraction)):
                    rational = True
                else:
                    raise DomainError(f"unsupported entry type {type(e).__name__}")
        if len(fields) > 1 or (fields and rational):
            raise DomainError("matrix mixes entries from different domains")
        return fields.pop() if fields else "QQ"


def _rref(rows: list[list], zero, one):
    """In-place reduced row echelon form; returns pivot columns."""
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        k = next((i for i in range(r, nr) if rows[i][c] != zero), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != zero:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


def matrix_rank_kernel(M: ExactMatrix):
    """Rank and a kernel basis (list of column vectors) over the entry field."""
    dom = M.domain()
    nr, nc = M.shape
    if dom == "QQ":
        zero, one = Fraction(0), Fraction(1)
        rows = [[Fraction(x) for x in r] for r in M.rows]
    else:
        zero, one = dom.zero(), dom.one()
        rows = [list(r) for r in M.rows]
    pivots = _rref(rows, zero, one)
    free = [c for c in range(nc) if c not in pivots]
    kernel = []
    for fcol in free:
        v = [zero] * nc
        v[fcol] = one
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fcol]
        kernel.append(v)
    return len(pivots), kernel


# ------------------------------------------------------------ numpy mod p

def rref_mod_p(A: np.ndarray, p: int):
    """Reduced row echelon form of an integer matrix over F_p.

    Returns ``(R, pivots)`` where R has ``len(pivots)`` rows. Requires
    p < 2^31 so that products fit in int64.
    """
    if p >= 2**31:
        raise ParameterError("modulus too large for the int64 fast path")
    R = np.array(A, dtype=np.int64) % p
    nr, nc = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r, c:] = R[r, c:] * inv % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            R[np.ix_(rows, np.arange(c, nc))] = (
                R[np.ix_(rows, np.arange(c, nc))] - np.outer(col[rows], R[r, c:])) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def _fmod(x: np.ndarray, p: int) -> np.ndarray:
    """x mod p for integral float64 arrays with |x| < 2^53."""
    q = np.floor(x * (1.0 / p))
    q *= p
    r = x - q
    r[r < 0] += p
    r[r >= p] -= p
    return r


def _small_rref(B: np.ndarray, p: int):
    """RREF of a short float64 block mod p (entries already reduced)."""
    nr, nc = B.shape
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.nonzero(B[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            B[[r, k]] = B[[k, r]]
        B[r, c:] = _fmod(B[r, c:] * pow(int(B[r, c]), -1, p), p)
        col = B[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            B[hit, c:] = _fmod(B[hit, c:] - np.outer(col[hit], B[r, c:]), p)
        pivots.append(c)
        r += 1
    return B[:r], pivots


def rref_blocked(A: np.ndarray, p: int, block: int = 64):
    """Incremental RREF over F_p using float64 matrix products.

    Rows are absorbed in blocks: each block is reduced against the current
    echelon basis with one product, echelonized on its own, and then used to
    clear its pivot columns from the basis. Exact while every inner product
    stays below 2^53, which holds for p < 2^20 and fewer than 8000 pivots.
    """
    if p >= 2**20:
        return rref_mod_p(A, p)
    A = _fmod(np.asarray(A, dtype=np.float64), p)
    nc = A.shape[1]
    E = np.zeros((0, nc))
    pivots: list[int] = []
    for start in range(0, A.shape[0], block):
        B = A[start:start + block].copy()
        if pivots:
            B -= _fmod(B[:, pivots] @ E, p)
            B[B < 0] += p
        B, newp = _small_rref(B, p)
        if not newp:
            continue
        if pivots:
            E -= _fmod(E[:, newp] @ B, p)
            E[E < 0] += p
        E = np.vstack([E, B])
        pivots = pivots + newp
    order = np.argsort(pivots, kind="stable")
    return E[order].astype(np.int64), [pivots[i] for i in order]


def rank_mod_p(A: np.ndarray, p: int) -> int:
    """Rank over F_p."""
    A = np.asarray(A)
    if A.size == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(rref_blocked(A, p)[1])


# ------------------------------------------------------------ Z/p^N

def _val(x: int, p: int, N: int) -> int:
    if x == 0:
        return N
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def howell_form(rows: Sequence[Sequence[int]], p: int, N: int) -> list[list[int]]:
    """Canonical Howell form of the row span over Z/p^N.

    Pivots are powers of p, entries above a pivot p^e lie in [0, p^e), and the
    rows with zeros in the first j columns span the elements of the module
    with that property.
    """
    if N < 1:
        raise ParameterError("precision N must be >= 1")
    m = p**N
    work = [[int(x) % m for x in r] for r in rows]
    nc = len(work[0]) if work else 0
    H: list[list[int]] = []
    pivcols: list[tuple[int, int]] = []
    for c in range(nc):
        work = [r for r in work if any(r)]
        if not work:
            break
        best = min(range(len(work)), key=lambda i: _val(work[i][c], p, N))
        e = _val(work[best][c], p, N)
        if e == N:
            continue
        piv = work.pop(best)
        u = piv[c] // p**e
        uinv = pow(u, -1, m)
        piv = [x * uinv % m for x in piv]
        pe = p**e
        for i, r in enumerate(work):
            if r[c]:
                f = r[c] // pe
                work[i] = [(x - f * y) % m for x, y in zip(r, piv)]
        if e > 0:
            work.append([x * p ** (N - e) % m for x in piv])
        H.append(piv)
        pivcols.append((c, pe))
    for i, (c, pe) in enumerate(pivcols):
        for k in range(i):
            f = H[k][c] // pe
            if f:
                H[k] = [(x - f * y) % m for x, y in zip(H[k], H[i])]
    return H


def kernel_mod_pn(M: Sequence[Sequence[int]], p: int, N: int) -> list[list[int]]:
    """Generators (in Howell form) of {v : M v = 0 mod p^N}."""
    if N < 1:
        raise ParameterError("precision N must be >= 1")
    m = p**N
    nr = len(M)
    nc = len(M[0]) if nr else 0
    aug = []
    for j in range(nc):
        row = [int(M[i][j]) % m for i in range(nr)]
        row += [1 if k == j else 0 for k in range(nc)]
        aug.append(row)
    H = howell_form(aug, p, N)
    gens = [r[nr:] for r in H if not any(r[:nr])]
    return howell_form(gens, p, N) if gens else []


def as_int_rows(M, p: int, N: int) -> list[list[int]]:
    """Integer residues of a matrix of ints, Fractions or p-adic numbers."""
    from .padic import PadicNum

    m = p**N
    out = []
    for r in (M.rows if isinstance(M, ExactMatrix) else M):
        row = []
        for x in r:
            if isinstance(x, PadicNum):
                row.append(x.reduce(min(N, x.prec)).residue % m)
            elif isinstance(x, Fraction):
                row.append(x.numerator * pow(x.denominator, -1, m) % m)
            elif isinstance(x, int):
                row.append(x % m)
            else:
                raise DomainError(f"unsupported entry {type(x).__name__}")
        out.append(row)
    return out


__all__ = [
    "ExactMatrix", "matrix_rank_kernel", "rref_mod_p", "rref_blocked", "rank_mod_p",
    "howell_form", "kernel_mod_pn", "as_int_rows", "GF",
]
