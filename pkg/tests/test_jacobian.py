import random

import pytest
from hypothesis import given, settings, strategies as st

from nodalquintic.errors import ParameterError
from nodalquintic.family import weierstrass_f
from nodalquintic.jacobian.cantor import cantor_add, identity, negate, random_divisor, scalar_mul
from nodalquintic.jacobian.curve import HyperCurve, count_points, jacobian_order
from nodalquintic.jacobian.logs import (LogVector, aj_log, find_relation, independence_check,
                                        log_combination, relation_residual, tiny_log)
from nodalquintic.jacobian.toric import PointData, ToricLog, section_logs
from nodalquintic.kernels.fields import GF
from nodalquintic.kernels.padic import PadicNum, padic_sqrt
from nodalquintic.kernels.upoly import UPoly, is_squarefree
from nodalquintic.pipeline import sample_params
from nodalquintic.reduction import (node_fibers, reduction_pattern, section_points,
                                    special_fiber_split)


def _pad(p, n, v):
    return PadicNum(p, n, v % p**n)


def lv(p, n, a, b):
    return LogVector(_pad(p, n, a), _pad(p, n, b))


# ------------------------------------------------------------ curves and counts

def test_count_x5_plus_1_over_f5():
    F = GF(5)
    f = UPoly.over(F, [F(1), 0, 0, 0, 0, F(1)])
    assert count_points(f) == 6


def _brute_jacobian_order(coeffs, p):
    """Number of reduced Mumford pairs (u, v) for an odd-degree model."""
    f = lambda x: sum(c * pow(x, k, p) for k, c in enumerate(coeffs)) % p
    total = 1
    total += sum(1 for a in range(p) for v in range(p) if (v * v - f(a)) % p == 0)
    for u0 in range(p):
        for u1 in range(p):
            # u = x^2 + u1 x + u0; u | v^2 - f iff the remainder vanishes
            for v0 in range(p):
                for v1 in range(p):
                    # reduce v(x)^2 - f(x) modulo u by substituting x^2 = -u1 x - u0
                    poly = [0] * 6
                    poly[0] += v0 * v0
                    poly[1] += 2 * v0 * v1
                    poly[2] += v1 * v1
                    for k, c in enumerate(coeffs):
                        poly[k] -= c
                    for k in range(5, 1, -1):
                        c = poly[k] % p
                        poly[k] = 0
                        poly[k - 1] -= c * u1
                        poly[k - 2] -= c * u0
                    if poly[0] % p == 0 and poly[1] % p == 0:
                        total += 1
    return total


@pytest.mark.parametrize("coeffs", [[1, 0, 0, 0, 0, 1], [2, 3, 0, 1, 0, 1]])
def test_jacobian_order_matches_brute_force(coeffs):
    p = 7
    data = jacobian_order(HyperCurve.over_field(coeffs, GF(p)))
    assert data.jacobian_order == _brute_jacobian_order(coeffs, p)
    lp = data.lpoly()
    assert lp[3] == p * lp[1] and lp[4] == p * p


def test_weil_bounds_on_random_curves():
    p = 11
    rng = random.Random(20)
    done = 0
    while done < 20:
        coeffs = [rng.randrange(p) for _ in range(5)] + [1]
        F = GF(p)
        f = UPoly.over(F, [F(c) for c in coeffs])
        if not is_squarefree(f):
            continue
        data = jacobian_order(HyperCurve.over_field(coeffs, F))
        lo, hi = data.weil_bounds()
        assert lo <= data.jacobian_order <= hi
        done += 1


def test_jacobian_order_rejects_small_p():
    with pytest.raises(ParameterError):
        jacobian_order(HyperCurve.over_field([1, 1, 0, 0, 0, 1], GF(5)))


# ------------------------------------------------------------ group law

CURVE_1009 = HyperCurve.over_field([3, 1, 4, 1, 5, 1], GF(1009))


@settings(max_examples=40)
@given(st.integers(0, 10**9))
def test_group_laws(seed):
    rng = random.Random(seed)
    a, b, c = (random_divisor(CURVE_1009, rng) for _ in range(3))
    O = identity(CURVE_1009)
    assert a + O == a
    assert cantor_add(a, negate(a)).is_identity()
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a + b).check()


@pytest.mark.parametrize("p", [7, 11])
def test_order_annihilates(p):
    curve = HyperCurve.over_field([1, 0, 0, 0, 0, 1], GF(p))
    n = jacobian_order(curve).jacobian_order
    rng = random.Random(p)
    for _ in range(10):
        assert scalar_mul(n, random_divisor(curve, rng)).is_identity()


# ------------------------------------------------------------ logs

P7, N7 = 7, 10
COEFFS = [1, 3, 0, 0, 0, 1]
QCURVE = HyperCurve.over_padics(COEFFS, P7, N7)


def _point_near(x0, shift):
    x = _pad(P7, N7, x0 + shift)
    return x, padic_sqrt(QCURVE.f(x))


def _disc_points(x0):
    """Three points of one non-Weierstrass residue disc, on one sheet."""
    pts = [_point_near(x0, P7 * k) for k in (0, 1, 3)]
    base = pts[0][1]
    out = []
    for x, y in pts:
        if (y - base).valuation() < 1:
            y = -y
        out.append((x, y))
    return out


def test_tiny_log_trivial_and_antisymmetric():
    P, Q, _ = _disc_points(2)
    assert tiny_log(QCURVE, P, P).to_json() == LogVector.zero(P7, N7).to_json()
    assert tiny_log(QCURVE, Q, P).agrees(-tiny_log(QCURVE, P, Q), 8)


def test_tiny_log_additive_along_subdivided_path():
    P, Q, R = _disc_points(2)
    lhs = tiny_log(QCURVE, P, R)
    assert lhs.agrees(tiny_log(QCURVE, P, Q) + tiny_log(QCURVE, Q, R), 8)


def test_tiny_log_rejects_different_discs():
    P = _disc_points(2)[0]
    Q = _disc_points(3)[0]
    with pytest.raises(ParameterError):
        tiny_log(QCURVE, P, Q)


def _rational_points(count, rng):
    pts = []
    while len(pts) < count:
        x = rng.randrange(P7**6)
        fx = sum(c * x**k for k, c in enumerate(COEFFS))
        if fx % P7 and pow(fx, (P7 - 1) // 2, P7) == 1:
            X = _pad(P7, 8, x)
            y = padic_sqrt(HyperCurve.over_padics(COEFFS, P7, 8).f(X))
            pts.append((X, y if rng.random() < 0.5 else -y))
    return pts


def test_aj_log_trivial_and_antisymmetric():
    curve = HyperCurve.over_padics(COEFFS, P7, 8)
    P, Q = _rational_points(2, random.Random(1))
    assert aj_log(curve, P, P, 6).to_json() == LogVector.zero(P7, 6).to_json()
    assert aj_log(curve, Q, P, 6).agrees(-aj_log(curve, P, Q, 6), 6)


def test_aj_log_homomorphism():
    curve = HyperCurve.over_padics(COEFFS, P7, 8)
    P1, Q1, P2, Q2 = _rational_points(4, random.Random(11))
    a, b = aj_log(curve, P1, Q1, 6), aj_log(curve, P2, Q2, 6)
    s = log_combination(curve, [(1, P1, Q1), (1, P2, Q2)], 6)
    assert s.agrees(a + b, 4)
    assert log_combination(curve, [(P7, P1, Q1)], 6).agrees(a * P7, 4)


# ------------------------------------------------------------ relations

def test_find_relation_examples():
    p, n = 7, 4
    e1, e2 = lv(p, n + 2, 1, 0), lv(p, n + 2, 0, 1)
    assert find_relation(e1, e2, e1 + e2, n).r == (1, 1, -1)
    assert find_relation(e1, e2, LogVector.zero(p, n + 2), n).r == (0, 0, 1)


@given(st.integers(0, 7**6 - 1), st.integers(0, 7**6 - 1),
       st.integers(1, 6), st.integers(0, 6), st.integers(0, 6), st.integers(1, 6))
def test_planted_dependency_is_recovered(a, b, u1, x, y, u2):
    p, n = 7, 4
    det = (u1 * u2 - x * y) % p
    if det == 0:
        return
    l1, l2 = lv(p, 6, u1, x), lv(p, 6, y, u2)
    l3 = l1 * a + l2 * b
    rel = find_relation(l1, l2, l3, n)
    m = p**n
    # normalise so that r_3 = -1
    k = pow(-rel.r[2], -1, m)
    assert [(c * k) % m for c in rel.r] == [a % m, b % m, m - 1]
    assert relation_residual(rel.r, [l1, l2, l3], n) == [0, 0]


def test_independence_examples():
    p = 7
    ind = independence_check(lv(p, 8, 1, 0), lv(p, 8, 0, 1))
    assert ind.independent and ind.valuation == 0
    la = lv(p, 8, 3, 5)
    assert not independence_check(la, la * p).independent
    ind = independence_check(lv(p, 8, 1, 2), lv(p, 8, 3, 6 + 49))
    assert ind.independent and ind.valuation == 2
    ind = independence_check(lv(p, 4, 1, 0), lv(p, 4, 0, 0))
    assert ind.verdict == "dependent"


# ------------------------------------------------------------ toric logs at an accepted member

ACCEPTED = sample_params(1, 7, 6, 5146)


@pytest.fixture(scope="module")
def toric():
    return ToricLog(ACCEPTED, 7, 8)


def test_K_independent_of_auxiliary_function(toric):
    m = 7**8
    K = tuple(k % m for k in toric.K)
    for r in ([1, 2, 3], [5, 0, 1]):
        assert tuple(k % m for k in toric.K_alternative(r)) == K


def test_toric_phi_matches_tiny_log(toric):
    p, W = 7, 20
    curve = HyperCurve.over_padics(weierstrass_f(ACCEPTED), p, W)
    pairs = section_points(ACCEPTED, node_fibers(ACCEPTED, p, W))
    checked = 0
    for pt in (q for pair in pairs for q in pair):
        if pt.w is None or pt.w.valuation() < 0 or not pt.Y.is_unit():
            continue
        w2 = pt.w + p * 3
        Y2 = padic_sqrt(curve.f(w2))
        if (Y2 - pt.Y).valuation() < 1:
            Y2 = -Y2
        direct = tiny_log(curve, (w2, Y2), (pt.w, pt.Y), 8)
        d1 = toric.point_data(pt)
        d2 = PointData(d1.eps, w=w2.residue)
        f1, f2 = toric.phi(d1), toric.phi(d2)
        via = LogVector(*(_pad(p, 8, d1.eps * (b - a)) for a, b in zip(f1, f2)))
        assert direct.agrees(via, 8)
        checked += 1
    assert checked >= 2


def test_section_logs_relation_and_independence():
    sp = special_fiber_split(ACCEPTED, 7)
    chosen = reduction_pattern(ACCEPTED, node_fibers(ACCEPTED, 7, 6), sp).chosen()
    logs, eps, _ = section_logs(ACCEPTED, 7, 6, chosen)
    assert all(a == -b for a, b in eps)
    rel = find_relation(*logs, 4)
    assert relation_residual(rel.r, logs, 4) == [0, 0]
    assert any(c % 7 for c in rel.r)
    oriented = [lam * e[0] for lam, e in zip(logs, eps)]
    assert independence_check(oriented[0] - oriented[2], oriented[1] - oriented[2]).independent
