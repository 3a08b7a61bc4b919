"""Jacobian ring of a quintic surface over F_p and rank checks for
multiplication by the degree-5 part of the ideal
<x^2(x-z)^2, y^2(y-z)^2, xy(x-z)(y-z), w>."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import NonSmoothError, ParameterError
from .kernels.linalg import rank_mod_p, rref_blocked
from .multipoly import MPoly, homogeneous_monomials, parse_mpoly, partial_derivative

XYZW = ("x", "y", "z", "w")
HILBERT = (1, 4, 10, 20, 31, 40, 44, 40, 31, 20, 10, 4, 1)
I_GENERATORS = ("x^2*(x-z)^2", "y^2*(y-z)^2", "x*y*(x-z)*(y-z)")


def _int_terms(f: MPoly, p: int) -> dict:
    out = {}
    for m, c in f.terms.items():
        v = int(c) % p
        if v:
            out[m] = v
    return out


@dataclass
class GradedPiece:
    degree: int
    monomials: list
    index: dict
    pivots: list
    nonpivots: list
    rref: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.nonpivots)

    @property
    def basis(self) -> list:
        return [self.monomials[j] for j in self.nonpivots]

    def reduce(self, v: np.ndarray, p: int) -> np.ndarray:
        """Coordinates in the monomial complement basis of a vector (or rows)."""
        v = np.asarray(v, dtype=np.int64) % p
        out = v[..., self.nonpivots]
        if self.pivots:
            out = (out - (v[..., self.pivots] @ self.rref[:, self.nonpivots]) % p) % p
        return out


@dataclass
class JacobianRing:
    """R = F_p[x,y,z,w] / (dF/dx, dF/dy, dF/dz, dF/dw) for a quintic F."""

    F: MPoly
    p: int
    _pieces: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.p < 3:
            raise ParameterError("p must be an odd prime")
        if self.F.names != XYZW or not self.F.is_homogeneous(5) or self.F.is_zero():
            raise ParameterError("F must be a nonzero quintic form in x, y, z, w")
        self.partials = [_int_terms(partial_derivative(self.F, i), self.p) for i in range(4)]
        if any(not d for d in self.partials):
            raise NonSmoothError("non-smooth specialization: a partial derivative vanishes")

    def graded_piece(self, d: int) -> GradedPiece:
        if not 0 <= d <= 12:
            raise ParameterError("degree must lie in [0, 12]")
        if d in self._pieces:
            return self._pieces[d]
        mons = homogeneous_monomials(4, d)
        index = {m: i for i, m in enumerate(mons)}
        if d < 4:
            piece = GradedPiece(d, mons, index, [], list(range(len(mons))),
                                np.zeros((0, len(mons)), dtype=np.int64))
        else:
            rows = []
            for m in homogeneous_monomials(4, d - 4):
                for g in self.partials:
                    row = np.zeros(len(mons), dtype=np.int64)
                    for e, c in g.items():
                        row[index[tuple(a + b for a, b in zip(m, e))]] = c
                    rows.append(row)
            R, piv = rref_blocked(np.array(rows), self.p)
            nonpiv = [j for j in range(len(mons)) if j not in set(piv)]
            piece = GradedPiece(d, mons, index, list(piv), nonpiv, R)
        if piece.dim != HILBERT[d]:
            raise NonSmoothError(
                f"non-smooth specialization: dim R^{d} = {piece.dim}, expected {HILBERT[d]}")
        self._pieces[d] = piece
        return piece

    def reduce_poly(self, terms: dict, d: int) -> np.ndarray:
        piece = self.graded_piece(d)
        v = np.zeros(len(piece.monomials), dtype=np.int64)
        for m, c in terms.items():
            v[piece.index[m]] = (v[piece.index[m]] + int(c)) % self.p
        return piece.reduce(v, self.p)

    def mult_table(self, a: int, b: int) -> np.ndarray:
        """T[i, j] = class of (basis_i of R^a) * (basis_j of R^b) in R^{a+b}."""
        Pa, Pb, Pc = self.graded_piece(a), self.graded_piece(b), self.graded_piece(a + b)
        T = np.zeros((Pa.dim, Pb.dim, len(Pc.monomials)), dtype=np.int64)
        for i, m1 in enumerate(Pa.basis):
            for j, m2 in enumerate(Pb.basis):
                T[i, j, Pc.index[tuple(x + y for x, y in zip(m1, m2))]] = 1
        return Pc.reduce(T, self.p)


def ideal_I5_spanning_set(p: int) -> list[dict]:
    """The 47 degree-5 products spanning I^5: generator times variable, and w
    times every quartic monomial."""
    out = []
    for text in I_GENERATORS:
        g = parse_mpoly(text, XYZW)
        for v in XYZW:
            out.append(_int_terms(g * MPoly.var(XYZW, v), p))
    for m in homogeneous_monomials(4, 4):
        out.append({(m[0], m[1], m[2], m[3] + 1): 1})
    return out


def ideal_I5_basis(R: JacobianRing) -> np.ndarray:
    """Rows: a basis (RREF) of the image of I^5 in R^5, in graded-piece coordinates."""
    vecs = np.array([R.reduce_poly(t, 5) for t in ideal_I5_spanning_set(R.p)])
    E, _ = rref_blocked(vecs, R.p)
    return E


def _check(rank: int, target: int) -> dict:
    return {"pass": rank == target, "rank": int(rank), "target": int(target),
            "deficiency": int(target - rank)}


def verify_condition_A(R: JacobianRing) -> dict:
    """Rank report for the four sequences built from multiplication by I^5."""
    p = R.p
    Ib = ideal_I5_basis(R)
    k = Ib.shape[0]
    # RG_a[r, j, :] = (basis_r of R^a) * (I-basis_j) in R^{a+5}
    RG = {}
    for a in (1, 6):
        T = R.mult_table(a, 5)
        RG[a] = np.einsum("rsc,js->rjc", T, Ib) % p
    report = {"p": p, "dim_I5": int(k)}
    for i, a in ((0, 1), (1, 6)):
        target = R.graded_piece(a + 5).dim
        M = RG[a].reshape(-1, target)
        report[f"jac1_i{i}"] = _check(rank_mod_p(M, p), target)

    pairs = list(combinations(range(k), 2))
    pa = np.array([x for x, _ in pairs], dtype=np.intp)
    pb = np.array([y for _, y in pairs], dtype=np.intp)

    def koszul(a: int) -> np.ndarray:
        # r (x) (g_a ^ g_b)  ->  (r g_a) (x) g_b - (r g_b) (x) g_a
        src = RG[a]
        dim_r, _, dim_t = src.shape
        K = np.zeros((dim_r, len(pairs), dim_t, k), dtype=np.int64)
        idx = np.arange(len(pairs))
        K[:, idx, :, pb] += np.transpose(src[:, pa, :], (1, 0, 2))
        K[:, idx, :, pa] -= np.transpose(src[:, pb, :], (1, 0, 2))
        return K.reshape(dim_r * len(pairs), dim_t * k) % p

    K1 = koszul(1)
    mu = RG[6].reshape(R.graded_piece(6).dim * k, -1)
    composite = (K1 @ mu) % p
    rank_mu = rank_mod_p(mu, p)
    nullity = mu.shape[0] - rank_mu
    rank_k = rank_mod_p(K1, p)
    report["jac3"] = {
        "pass": bool(rank_k == nullity and not composite.any()),
        "rank": int(rank_k), "target": int(nullity), "deficiency": int(nullity - rank_k),
        "composite_zero": bool(not composite.any()),
    }
    K6 = koszul(6)
    report["jac4"] = _check(rank_mod_p(K6, p), K6.shape[1])
    report["all_pass"] = all(report[c]["pass"] for c in ("jac1_i0", "jac1_i1", "jac3", "jac4"))
    return report
