"""Genus-2 invariants: Weierstrass sextics, quintic models, Igusa's J_2..J_10,
absolute invariants and a rank probe of the moduli map on the a_0 = 0 slice."""

from __future__ import annotations

import random
from math import lcm
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DegenerateError, DomainError, ParameterError, PrecisionError
from .family import FamilyParams, curve_coefficients, weierstrass_f
from .kernels.fields import FFElem, GF
from .kernels.linalg import rank_mod_p
from .kernels.padic import PadicNum, hensel_quadratic_roots
from .kernels.upoly import roots_in_base, UPoly
from .multipoly import MPoly
from .reduction import NodeFibers, node_quadratics

SLICE_PARAMS = ("a_1", "a_2", "b_0", "b_1", "b_2", "c_0", "c_1", "c_2")


@dataclass(frozen=True)
class SexticData:
    coeffs: tuple   # f_0, ..., f_6

    @property
    def leading(self):
        return self.coeffs[6]

    @property
    def constant(self):
        return self.coeffs[0]


@dataclass(frozen=True)
class QuinticModel:
    """y^2 = v_0 x^5 - v_1 x^4 + v_2 x^3 - v_3 x^2 + v_4 x - v_5."""

    v: tuple

    def __post_init__(self):
        if len(self.v) != 6:
            raise ParameterError("a quintic model has six coefficients v_0..v_5")
        if _is_zero(self.v[0]):
            raise DegenerateError("v_0 = 0: not a quintic model")

    @classmethod
    def from_coeffs(cls, f: Sequence) -> "QuinticModel":
        """From f_0..f_5 (coefficient of x^k at index k)."""
        f = list(f) + [0] * (6 - len(f))
        if len(f) > 6:
            raise ParameterError("degree exceeds 5")
        return cls(tuple(f[5 - i] if i % 2 == 0 else -f[5 - i] for i in range(6)))

    def coeffs(self) -> list:
        return [self.v[5 - k] if (5 - k) % 2 == 0 else -self.v[5 - k] for k in range(6)]

    def translate(self, c) -> "QuinticModel":
        """The model of f(x + c)."""
        f = self.coeffs()
        out = [0 * c] * 6
        # Taylor shift by Horner
        for a in reversed(f):
            out = [out[k] * c + (out[k - 1] if k else 0) for k in range(6)]
            out[0] = out[0] + a
        return QuinticModel.from_coeffs(out)

    def scale(self, lam) -> "QuinticModel":
        return QuinticModel(tuple(x * lam for x in self.v))


@dataclass(frozen=True)
class IgusaInvariants:
    J2: object
    J4: object
    J6: object
    J8: object
    J10: object

    def as_tuple(self) -> tuple:
        return (self.J2, self.J4, self.J6, self.J8, self.J10)


def _is_zero(x) -> bool:
    return x.is_zero() if hasattr(x, "is_zero") else x == 0


# ------------------------------------------------------------ sextics

def _coeff_list(poly) -> list:
    if isinstance(poly, MPoly):
        if len(poly.names) != 1:
            raise ParameterError("expected a univariate polynomial")
        deg = max((m[0] for m in poly.terms), default=0)
        return [poly.terms.get((k,), 0) for k in range(deg + 1)]
    return list(poly)


def weierstrass_sextic(d0, d1, d2) -> SexticData:
    """f = d_1^2 - 4 d_0 d_2 as a degree-<=6 coefficient vector."""
    d0, d1, d2 = (_coeff_list(x) for x in (d0, d1, d2))
    f = [0] * 7
    for i, x in enumerate(d1):
        for j, y in enumerate(d1):
            f[i + j] = f[i + j] + x * y
    for i, x in enumerate(d0):
        for j, y in enumerate(d2):
            f[i + j] = f[i + j] - 4 * x * y
    if any(not _is_zero(c) for c in f[7:]):
        raise ParameterError("degree exceeds 6")
    return SexticData(tuple(f[:7]))


def sextic_from_params(params: FamilyParams) -> SexticData:
    return SexticData(tuple(weierstrass_f(params)))


def sextic_to_quintic(s: SexticData, root=None) -> QuinticModel:
    """Move a rational root r of f to infinity: x = 1/(w - r), y = Y x^3."""
    f = list(s.coeffs)
    if _is_zero(f[6]):
        return QuinticModel.from_coeffs(f[:6])
    if root is None:
        root = _rational_root(f)
    # g(x) = x^6 f(r + 1/x) = sum_k f_k (r x + 1)^k x^(6-k)
    g = [0 * root] * 7
    for k, fk in enumerate(f):
        term = [1]
        for _ in range(k):
            term = [a + root * b for a, b in zip(term + [0], [0] + term)]
        for i, t in enumerate(term):
            g[i + 6 - k] = g[i + 6 - k] + fk * t
    if not _is_zero(g[6]):
        raise ParameterError("supplied value is not a root of f")
    return QuinticModel.from_coeffs(g[:6])


def _rational_root(f: list):
    if any(isinstance(c, FFElem) for c in f):
        F = next(c.field for c in f if isinstance(c, FFElem))
        roots = roots_in_base(UPoly.over(F, f))
    else:
        import sympy

        x = sympy.Symbol("x")
        P = sympy.Poly([sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
                        for c in reversed(f)], x, domain="QQ")
        roots = [Fraction(int(r.p), int(r.q)) for r in P.ground_roots()]
    if not roots:
        raise DegenerateError("f has no rational root; no quintic model over the base")
    return sorted(roots, key=repr)[0]


# ------------------------------------------------------------ invariants

def _T(c, *idx):
    return (Fraction(c), idx)


J2_TERMS = (_T(5, 0, 4), _T(-2, 1, 3), _T(Fraction(3, 4), 2, 2))
J4_TERMS = (
    _T(25, 0, 0, 3, 5), _T(-15, 0, 0, 4, 4), _T(-15, 0, 1, 2, 5), _T(7, 0, 1, 3, 4),
    _T(Fraction(1, 2), 0, 2, 2, 4), _T(-1, 0, 2, 3, 3), _T(4, 1, 1, 1, 5),
    _T(-1, 1, 1, 2, 4), _T(-1, 1, 1, 3, 3), _T(1, 1, 2, 2, 3),
    _T(Fraction(-3, 16), 2, 2, 2, 2),
)
J4_SCALE = Fraction(-1, 8)
J6_TERMS = (
    _T(Fraction(125, 2), 0, 0, 0, 2, 5, 5), _T(-25, 0, 0, 0, 3, 4, 5), _T(5, 0, 0, 0, 4, 4, 4),
    _T(-25, 0, 0, 1, 1, 5, 5), _T(-10, 0, 0, 1, 2, 4, 5), _T(10, 0, 0, 1, 3, 3, 5),
    _T(-1, 0, 0, 1, 3, 4, 4), _T(Fraction(-5, 4), 0, 0, 2, 2, 3, 5),
    _T(Fraction(-11, 4), 0, 0, 2, 2, 4, 4), _T(Fraction(7, 2), 0, 0, 2, 3, 3, 4),
    _T(-1, 0, 0, 3, 3, 3, 3), _T(6, 0, 1, 1, 1, 4, 5), _T(-3, 0, 1, 1, 2, 3, 5),
    _T(Fraction(7, 2), 0, 1, 1, 2, 4, 4), _T(-2, 0, 1, 1, 3, 3, 4),
    _T(Fraction(3, 4), 0, 1, 2, 2, 2, 5), _T(Fraction(-7, 4), 0, 1, 2, 2, 3, 4),
    _T(1, 0, 1, 2, 3, 3, 3), _T(Fraction(7, 16), 0, 2, 2, 2, 2, 4),
    _T(Fraction(-1, 4), 0, 2, 2, 2, 3, 3), _T(-1, 1, 1, 1, 1, 4, 4), _T(1, 1, 1, 1, 2, 3, 4),
    _T(Fraction(-1, 4), 1, 1, 2, 2, 2, 4), _T(Fraction(-1, 4), 1, 1, 2, 2, 3, 3),
    _T(Fraction(1, 8), 1, 2, 2, 2, 2, 3), _T(Fraction(-1, 64), 2, 2, 2, 2, 2, 2),
)
J6_SCALE = Fraction(-1, 16)


def _char(x) -> int:
    if isinstance(x, FFElem):
        return x.field.p
    if isinstance(x, _Jet):
        return x.p
    return 0


def _eval_terms(terms, v, scale=Fraction(1)):
    acc = None
    for c, idx in terms:
        mon = v[idx[0]]
        for i in idx[1:]:
            mon = mon * v[i]
        t = mon * (c * scale)
        acc = t if acc is None else acc + t
    return acc


def sylvester_matrix(m: QuinticModel) -> list[list]:
    """The 9x9 matrix of f and f' in the signed coefficients v_i."""
    v = m.v
    zero = 0 * v[0]
    row_f = [v[0], -v[1], v[2], -v[3], v[4], -v[5]]
    row_d = [5 * v[0], -4 * v[1], 3 * v[2], -2 * v[3], v[4]]
    rows = []
    for k in range(4):
        rows.append([zero] * k + row_f + [zero] * (3 - k))
    for k in range(5):
        rows.append([zero] * k + row_d + [zero] * (4 - k))
    return rows


def det_division_free(M: Sequence[Sequence]):
    """Determinant over any commutative ring (Berkowitz)."""
    n = len(M)
    if n == 0:
        return 1
    # c: characteristic polynomial coefficients of the leading k x k block, highest first
    c = [1, -M[0][0]]
    for k in range(1, n):
        A = [row[:k] for row in M[:k]]
        R = M[k][:k]
        col = [M[i][k] for i in range(k)]
        s = []
        vec = col
        for _ in range(k):
            s.append(sum((r * x for r, x in zip(R, vec)), 0 * M[0][0]))
            vec = [sum((a * x for a, x in zip(row, vec)), 0 * M[0][0]) for row in A]
        new = [0 * M[0][0]] * (k + 2)
        for i, ci in enumerate(c):
            new[i] = new[i] + ci
            new[i + 1] = new[i + 1] - M[k][k] * ci
        for j in range(k):
            q = sum((c[i] * s[j - i] for i in range(j + 1)), 0 * M[0][0])
            new[j + 2] = new[j + 2] - q
        c = new
    return c[n] if n % 2 == 0 else -c[n]


def _det_bareiss(M: list[list[int]]) -> int:
    M = [list(r) for r in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _resultant_D(v: tuple):
    if all(isinstance(x, (int, Fraction)) for x in v):
        L = lcm(*(Fraction(x).denominator for x in v))
        iv = tuple(int(Fraction(x) * L) for x in v)
        return Fraction(_det_bareiss(sylvester_matrix(QuinticModel(iv))), L**9)
    return det_division_free(sylvester_matrix(QuinticModel(v)))


def igusa_invariants(m: QuinticModel) -> IgusaInvariants:
    """J_2, J_4, J_6, J_8 = (J_2 J_6 - J_4^2)/4 and J_10 = v_0 * D."""
    if any(_char(x) == 2 for x in m.v):
        raise DomainError("characteristic 2 is unsupported")
    v = m.v
    if all(isinstance(x, int) for x in v):
        v = tuple(Fraction(x) for x in v)
    J2 = _eval_terms(J2_TERMS, v)
    J4 = _eval_terms(J4_TERMS, v, J4_SCALE)
    J6 = _eval_terms(J6_TERMS, v, J6_SCALE)
    J8 = (J2 * J6 - J4 * J4) * Fraction(1, 4)
    D = _resultant_D(v)
    return IgusaInvariants(J2, J4, J6, J8, v[0] * D)


def absolute_invariants(J: IgusaInvariants) -> tuple:
    """(J_4/J_2^2, J_6/J_2^3, J_10/J_2^5)."""
    if _is_zero(J.J2):
        raise DegenerateError("J_2 = 0: non-generic point of the moduli coordinate chart")
    inv = 1 / J.J2 if not isinstance(J.J2, int) else Fraction(1, J.J2)
    return (J.J4 * inv**2, J.J6 * inv**3, J.J10 * inv**5)


# ------------------------------------------------------------ the a_0 = 0 slice

def t0_quintic_slice(params: FamilyParams) -> QuinticModel:
    """The quintic model y^2 = f_0(w) of the curve when a_0 = 0."""
    if not _is_zero(params.a[0]):
        raise ParameterError("the slice requires a_0 = 0")
    f = list(weierstrass_f(params))
    if not _is_zero(f[6]):
        raise AssertionError("a_0 = 0 must kill the w^6 coefficient")
    try:
        return QuinticModel.from_coeffs(f[:6])
    except DegenerateError:
        raise DegenerateError("degenerate slice: v_0 = 4 a_2 (a_1 + a_2) vanishes") from None


class _Jet:
    """First-order jet over F_p: value plus gradient."""

    __slots__ = ("p", "val", "grad")

    def __init__(self, p: int, val: int, grad):
        self.p = p
        self.val = val % p
        self.grad = np.asarray(grad, dtype=np.int64) % p

    def _c(self, o):
        if isinstance(o, _Jet):
            return o
        if isinstance(o, Fraction):
            return _Jet(self.p, o.numerator * pow(o.denominator, -1, self.p), np.zeros_like(self.grad))
        if isinstance(o, int):
            return _Jet(self.p, o, np.zeros_like(self.grad))
        return None

    def __add__(self, o):
        o = self._c(o)
        return NotImplemented if o is None else _Jet(self.p, self.val + o.val, self.grad + o.grad)

    __radd__ = __add__

    def __neg__(self):
        return _Jet(self.p, -self.val, -self.grad)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._c(o)
        if o is None:
            return NotImplemented
        return _Jet(self.p, self.val * o.val, self.grad * o.val + o.grad * self.val)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = _Jet(self.p, 1, np.zeros_like(self.grad))
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "_Jet":
        if self.val == 0:
            raise ZeroDivisionError("jet with zero value")
        iv = pow(self.val, -1, self.p)
        return _Jet(self.p, iv, -self.grad * (iv * iv % self.p))

    def __truediv__(self, o):
        o = self._c(o)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._c(o) * self.inverse()

    def is_zero(self) -> bool:
        return self.val == 0


def _slice_jets(params: FamilyParams, p: int) -> FamilyParams:
    vals = dict(zip(SLICE_PARAMS, (params.a[1], params.a[2], *params.b, *params.c)))
    n = len(SLICE_PARAMS)

    def jet(name):
        g = np.zeros(n, dtype=np.int64)
        g[SLICE_PARAMS.index(name)] = 1
        return _Jet(p, int(vals[name]), g)

    zero = _Jet(p, 0, np.zeros(n, dtype=np.int64))
    return FamilyParams((zero, jet("a_1"), jet("a_2")), tuple(jet(f"b_{i}") for i in range(3)),
                        tuple(jet(f"c_{i}") for i in range(3)), {})


@dataclass(frozen=True)
class ProbeReport:
    p: int
    params: dict
    indices: tuple
    matrix: list
    rank: int
    target: int

    @property
    def full_rank(self) -> bool:
        return self.rank == self.target

    def to_json(self) -> dict:
        return {"p": self.p, "params": self.params, "indices": list(self.indices),
                "rank": self.rank, "target": self.target, "full_rank": self.full_rank}


def _roots_mod_p(params: FamilyParams, p: int) -> NodeFibers:
    out = []
    for k, (A, B, C) in enumerate(node_quadratics(params), start=1):
        A, B, C = (PadicNum(p, 1, int(x)) for x in (A, B, C))
        if not A.is_unit():
            raise DegenerateError(f"probe point degenerate: node {k} quadratic drops degree")
        try:
            r = hensel_quadratic_roots(A, B, C)
        except PrecisionError:
            raise DegenerateError(f"probe point degenerate: node {k} has a double root") from None
        if r is None:
            raise DegenerateError(f"probe point degenerate: node {k} roots not in F_p")
        out.append(r)
    return NodeFibers(p, 1, tuple(out))


def _section_forms(params: FamilyParams, fibers: NodeFibers, p: int) -> list[tuple]:
    """Per section i, the parameter-gradients of f_i^* dw/Y and f_i^* w dw/Y."""
    J = _slice_jets(params, p)
    (d0, d1, d2), (e0, e1, e2) = curve_coefficients(params)
    quads = node_quadratics(J)
    n = len(SLICE_PARAMS)

    def ev(cs, x):
        acc = 0
        for c in reversed(cs):
            acc = (acc * x + int(c)) % p
        return acc

    forms = []
    for i, (pair, (A, B, C)) in enumerate(zip(fibers.roots, quads), start=1):
        om, om_w = np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64)
        for sign, r in ((1, pair[0]), (-1, pair[1])):
            r = r.residue % p
            dQ = (A.grad * (r * r % p) + B.grad * r + C.grad) % p
            dQdx = (2 * A.val * r + B.val) % p
            if dQdx == 0:
                raise DegenerateError("probe point degenerate: coincident node roots")
            dr = (-dQ * pow(dQdx, -1, p)) % p
            if i == 1:
                den = (2 * r * ev(d2, r) + ev(d1, r)) % p
            elif i == 2:
                den = ev(d1, r)
            elif i == 3:
                den = ev(e1, r)
            else:
                den = (2 * ev(d2, r) + ev(d1, r)) % p
            if den == 0:
                raise DegenerateError(f"probe point degenerate: pullback denominator vanishes at section {i}")
            base = dr * pow(den, -1, p) % p
            if i == 3:
                om = (om + sign * base * r) % p
                om_w = (om_w + sign * base) % p
            else:
                om = (om + sign * base) % p
                om_w = (om_w + sign * base * r) % p
        forms.append((om, om_w))
    return forms


def moduli_rank_probe(params: FamilyParams, p: int, fibers: NodeFibers | None = None,
                      indices: Sequence[int] = (1, 2, 3)) -> ProbeReport:
    """Rank over F_p of the four difference 1-forms plus the gradients of the
    three absolute invariants, as vectors in the eight slice parameters.

    The common scaling of all parameters lies in the kernel of every row, so
    full rank means rank 7.
    """
    if p <= 10**4:
        raise ParameterError("the probe needs a prime field of size > 10^4")
    if int(params.a[0]) % p:
        raise ParameterError("the probe lives on the a_0 = 0 slice")
    params = params.map(lambda x: int(x) % p)
    if fibers is None:
        fibers = _roots_mod_p(params, p)
    i1, i2, i3 = indices
    forms = _section_forms(params, fibers, p)
    rows = []
    for i in (i1, i2):
        for k in (0, 1):
            rows.append((forms[i - 1][k] - forms[i3 - 1][k]) % p)
    model = t0_quintic_slice(_slice_jets(params, p))
    for r in absolute_invariants(igusa_invariants(model)):
        rows.append(r.grad % p)
    M = np.array(rows, dtype=np.int64)
    return ProbeReport(p, params.to_json(), tuple(indices), M.tolist(),
                       rank_mod_p(M, p), len(SLICE_PARAMS) - 1)


def random_probe(seed: int, p: int = 31991, indices: Sequence[int] = (1, 2, 3),
                 max_tries: int = 10_000) -> ProbeReport:
    """Sample slice parameters from ``seed`` until the probe pre-conditions hold."""
    rng = random.Random(seed)
    for _ in range(max_tries):
        a1, a2, *rest = (rng.randrange(p) for _ in range(8))
        params = FamilyParams((0, a1, a2), tuple(rest[:3]), tuple(rest[3:]), {})
        try:
            return moduli_rank_probe(params, p, indices=indices)
        except (DegenerateError, ZeroDivisionError):
            continue
    raise DegenerateError("no admissible probe point found")
