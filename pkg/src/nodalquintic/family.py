"""The 44-parameter quintic family and its nodal hyperplane-section curve."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from . import groebner
from .errors import ParameterError
from .kernels.fields import GF
from .kernels.padic import PadicNum, parse_padic
from .multipoly import MPoly, homogeneous_monomials, partial_derivative, substitute

XYZW = ("x", "y", "z", "w")
MULTI_INDICES: list[tuple] = homogeneous_monomials(4, 4)
NODES = ((0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1))


def index_key(I: tuple) -> str:
    return "".join(str(i) for i in I)


PARAM_NAMES: tuple = (
    ("a_0", "a_1", "a_2", "b_0", "b_1", "b_2", "c_0", "c_1", "c_2")
    + tuple("d_" + index_key(I) for I in MULTI_INDICES))


@dataclass(frozen=True)
class FamilyParams:
    """Coordinates (a, b, c, d_I) of a member of the family."""

    a: tuple
    b: tuple
    c: tuple
    d: Mapping[tuple, object] = field(default_factory=dict)

    def __post_init__(self):
        for name, v in (("a", self.a), ("b", self.b), ("c", self.c)):
            if len(v) != 3:
                raise ParameterError(f"{name} needs exactly 3 entries")
        bad = [I for I in self.d if I not in MULTI_INDICES]
        if bad:
            raise ParameterError(f"unknown multi-indices {bad}")

    def dval(self, I: tuple):
        return self.d.get(I, 0)

    def as_dict(self) -> dict:
        out = {n: v for n, v in zip(PARAM_NAMES[:9], self.a + self.b + self.c)}
        for I in MULTI_INDICES:
            out["d_" + index_key(I)] = self.dval(I)
        return out

    def map(self, fn) -> "FamilyParams":
        return FamilyParams(tuple(fn(v) for v in self.a), tuple(fn(v) for v in self.b),
                            tuple(fn(v) for v in self.c),
                            {I: fn(v) for I, v in self.d.items()})

    def mod(self, p: int) -> "FamilyParams":
        F = GF(p)
        return self.map(lambda v: F(_to_int_mod(v, p)))

    # -------------------------------------------------------------- JSON
    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, PadicNum):
                return str(v)
            if isinstance(v, Fraction):
                return str(v)
            return int(v)
        return {"a": [enc(v) for v in self.a], "b": [enc(v) for v in self.b],
                "c": [enc(v) for v in self.c],
                "d": {index_key(I): enc(self.d[I]) for I in MULTI_INDICES if I in self.d}}

    @classmethod
    def from_json(cls, obj) -> "FamilyParams":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            a, b, c = (tuple(_decode(v) for v in obj[k]) for k in ("a", "b", "c"))
            d = {}
            for key, v in obj.get("d", {}).items():
                if len(key) != 4 or not key.isdigit():
                    raise ParameterError(f"bad multi-index key {key!r}")
                d[tuple(int(ch) for ch in key)] = _decode(v)
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed parameter object: {exc}") from None
        return cls(a, b, c, d)

    @classmethod
    def random(cls, rng: random.Random, modulus: int, unit_a0_mod: int | None = None
               ) -> "FamilyParams":
        """Uniform integers in [0, modulus); a_0 prime to ``unit_a0_mod`` if given."""
        vals = [rng.randrange(modulus) for _ in range(9)]
        if unit_a0_mod is not None:
            while vals[0] % unit_a0_mod == 0:
                vals[0] = rng.randrange(modulus)
        d = {I: rng.randrange(modulus) for I in MULTI_INDICES}
        return cls(tuple(vals[0:3]), tuple(vals[3:6]), tuple(vals[6:9]), d)

    @classmethod
    def symbolic(cls) -> "FamilyParams":
        """Parameters as variables of a polynomial ring over Z."""
        g = [MPoly.var(PARAM_NAMES, n) for n in PARAM_NAMES]
        return cls(tuple(g[0:3]), tuple(g[3:6]), tuple(g[6:9]),
                   {I: g[9 + k] for k, I in enumerate(MULTI_INDICES)})


def _decode(v):
    if isinstance(v, str):
        if "mod" in v:
            return parse_padic(v).lift()
        return int(v)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParameterError(f"parameter values must be integers, got {v!r}")
    return v


def _to_int_mod(v, p: int) -> int:
    if isinstance(v, PadicNum):
        return v.mod_p()
    if isinstance(v, Fraction):
        return v.numerator * pow(v.denominator, -1, p) % p
    return int(v) % p


# ------------------------------------------------------------------ builders

@dataclass(frozen=True)
class FamilyPolys:
    F: MPoly
    G: MPoly
    H: MPoly
    L: tuple
    d: tuple   # d_0, d_1, d_2 as coefficient lists in w (low to high)
    e: tuple   # e_0, e_1, e_2 as coefficient lists in u


def curve_coefficients(params: FamilyParams):
    """Coefficient lists (low to high) of d_0, d_1, d_2 and e_0, e_1, e_2."""
    a0, a1, a2 = params.a
    b0, b1, b2 = params.b
    c0, c1, c2 = params.c
    d2 = [-(b0 + b2), -(c0 + c2), -(a0 + a2)]
    d1 = [-b1, b0 - c1, -(a1 - c0), a0]
    d0 = [0 * a0, b1 + b2, c1 + c2, a1 + a2]
    e2 = [-(a0 + a2), -(c0 + c2), -(b0 + b2)]
    e1 = [a0, -(a1 - c0), b0 - c1, -b1]
    e0 = [0 * a0, a1 + a2, c1 + c2, b1 + b2]
    return (d0, d1, d2), (e0, e1, e2)


def _pmul(f, g):
    out = [0 * f[0]] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] = out[i + j] + x * y
    return out


def weierstrass_f(params: FamilyParams) -> list:
    """Coefficients of f = d_1^2 - 4 d_0 d_2 (degree 6, low to high)."""
    (d0, d1, d2), _ = curve_coefficients(params)
    sq = _pmul(d1, d1)
    prod = _pmul(d0, d2)
    n = max(len(sq), len(prod))
    sq += [0 * sq[0]] * (n - len(sq))
    prod += [0 * sq[0]] * (n - len(prod))
    return [x - 4 * y for x, y in zip(sq, prod)]


def build_family(params: FamilyParams) -> FamilyPolys:
    x, y, z, w = (MPoly.var(XYZW, v) for v in XYZW)
    a0, a1, a2 = params.a
    b0, b1, b2 = params.b
    c0, c1, c2 = params.c
    L1 = x * a0 + y * a1 + z * a2
    L2 = x * b0 + y * b1 + z * b2
    L3 = x * c0 + y * c1 + z * c2
    G = (x**2 * (x - z) ** 2 * L1 + y**2 * (y - z) ** 2 * L2
         + x * y * (x - z) * (y - z) * L3)
    H = MPoly(XYZW)
    for I in MULTI_INDICES:
        v = params.dval(I)
        if not (v == 0):
            H = H + MPoly(XYZW, {I: v})
    F = G + w * H
    d, e = curve_coefficients(params)
    return FamilyPolys(F, G, H, (L1, L2, L3), d, e)


# ---------------------------------------------------------- normalization

@dataclass(frozen=True)
class NormalizationReport:
    ok: bool
    cofactors: tuple
    remainders: tuple


def _upoly_in(var: MPoly, coeffs) -> MPoly:
    acc = MPoly(var.names)
    for i, c in enumerate(coeffs):
        acc = acc + var**i * c
    return acc


def normalization_identity(params: FamilyParams) -> NormalizationReport:
    """Pull G back along both charts of the normalization and compare with
    cofactor times the chart equation.

    Chart (s, w): G(s(w-s), w-s, w-s^2) = s^2 (s-1)^2 (s-w)^2 Q(s, w) with
    Q = d_2 s^2 + d_1 s + d_0. Chart (t, u), t the ratio reciprocal to the one
    in which the nodes P_3, Q_3 sit at t = 0:
    G(t(1-t), u(1-t), u-t^2) = t^2 (t-1)^2 (t-u)^2 (e_2 t^2 + e_1 t + e_0).
    """
    fam = build_family(params)
    (d0, d1, d2), (e0, e1, e2) = fam.d, fam.e
    out_cof, out_rem = [], []
    for names, imgs, eq_parts in (
        (("s", "w"), lambda s, w: (s * (w - s), w - s, w - s**2), (d2, d1, d0)),
        (("t", "u"), lambda t, u: (t * (1 - t), u * (1 - t), u - t**2), (e2, e1, e0)),
    ):
        S, W = MPoly.var(names, names[0]), MPoly.var(names, names[1])
        xi, yi, zi = imgs(S, W)
        G3 = MPoly(("x", "y", "z"), {m[:3]: c for m, c in fam.G.terms.items()})
        pulled = substitute(G3, {"x": xi, "y": yi, "z": zi}, names)
        Q = (S**2 * _upoly_in(W, eq_parts[0]) + S * _upoly_in(W, eq_parts[1])
             + _upoly_in(W, eq_parts[2]))
        cof = S**2 * (S - 1) ** 2 * (S - W) ** 2
        rem = pulled - cof * Q
        out_cof.append(cof)
        out_rem.append(rem)
    return NormalizationReport(all(r.is_zero() for r in out_rem), tuple(out_cof), tuple(out_rem))


# ---------------------------------------------------------------- smoothness

@dataclass(frozen=True)
class SmoothnessResult:
    smooth: bool
    chart: int | None = None
    witness: tuple | None = None


def smoothness_check_Fp(F: MPoly, p: int) -> SmoothnessResult:
    """Decide smoothness of V(F) in P^3 over an algebraic closure of F_p.

    For each standard affine chart the dehomogenized F and its four partials
    must generate the unit ideal.
    """
    if not F.is_homogeneous(5) or F.is_zero():
        raise ParameterError("expected a nonzero quintic form")
    polys = [F] + [partial_derivative(F, i) for i in range(4)]
    for chart in range(4):
        dehom = []
        for g in polys:
            gd = groebner.from_mpoly(g, p)
            local: dict = {}
            for m, c in gd.items():
                mm = m[:chart] + m[chart + 1:]
                local[mm] = (local.get(mm, 0) + c) % p
            dehom.append({m: c for m, c in local.items() if c})
        if not groebner.contains_one(dehom, p):
            return SmoothnessResult(False, chart, _find_witness(polys, p, chart))
    return SmoothnessResult(True)


def _find_witness(polys: Sequence[MPoly], p: int, chart: int):
    """First F_p-rational singular point in the given chart, if any."""
    gd = [groebner.from_mpoly(g, p) for g in polys]
    for rest in product(range(p), repeat=3):
        pt = list(rest[:chart]) + [1] + list(rest[chart:])
        if all(_eval_int(g, pt, p) == 0 for g in gd):
            return tuple(pt)
    return None


def _eval_int(g: dict, pt, p: int) -> int:
    total = 0
    for m, c in g.items():
        t = c
        for x, e in zip(pt, m):
            if e:
                t = t * pow(x, e, p) % p
        total += t
    return total % p


# ------------------------------------------------ intersection on the plane

def plane_intersection_matrix(degrees: Sequence[int]):
    """Intersection matrix of a plane curve blown up at a point, with the
    closed-form determinant asserted.

    M_jj = e_j (1 - sum_{l != j} e_l), M_jk = e_j e_k.
    """
    e = [int(x) for x in degrees]
    if not e or any(x < 1 for x in e):
        raise ParameterError("degrees must be positive integers")
    total = sum(e)
    n = len(e)
    M = [[e[j] * e[k] if j != k else e[j] * (1 - (total - e[j])) for k in range(n)]
         for j in range(n)]
    det = _det_exact(M)
    closed = 1
    for x in e:
        closed *= x
    closed *= (1 - total) ** (n - 1)
    if det != closed:
        raise AssertionError(f"determinant {det} differs from closed form {closed}")
    return M, det


def _det_exact(M) -> int:
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        k = next((i for i in range(c, n) if A[i][c] != 0), None)
        if k is None:
            return 0
        if k != c:
            A[c], A[k] = A[k], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return int(det)


def specialize_family(fam_params: FamilyParams, p: int) -> MPoly:
    """The quintic F with coefficients in F_p."""
    return build_family(fam_params.mod(p)).F
