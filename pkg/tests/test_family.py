import itertools
import random
from fractions import Fraction

import pytest

from nodalquintic.errors import Reject
from nodalquintic.family import (XYZW, FamilyParams, _det_exact, _eval_int, build_family,
                                 curve_coefficients, normalization_identity,
                                 plane_intersection_matrix, smoothness_check_Fp,
                                 specialize_family, weierstrass_f)
from nodalquintic import groebner
from nodalquintic.kernels.fields import GF
from nodalquintic.kernels.padic import PadicNum
from nodalquintic.kernels.upoly import UPoly
from nodalquintic.multipoly import MPoly, evaluate, partial_derivative
from nodalquintic.pipeline import sample_params
from nodalquintic.reduction import (IntersectionData, b2_certificate, component_meeting_number,
                                    defect_polynomial, node_fibers, node_quadratics,
                                    reduction_pattern, regularity_check, section_points,
                                    solve_vertical_system, special_fiber_split)

ACCEPTED = (7, 6, 5146)   # (p, N, candidate index) of an accepted member, seed 1


def _accepted():
    p, N, i = ACCEPTED
    return sample_params(1, p, N, i), p, N


# ------------------------------------------------------------ construction

def test_F_restricts_to_G_and_w_coefficient_is_H():
    params = FamilyParams.symbolic()
    fam = build_family(params)
    at_w0 = MPoly(fam.F.names, {m: c for m, c in fam.F.terms.items() if m[3] == 0})
    assert at_w0 == fam.G
    w = MPoly.var(XYZW, "w")
    assert fam.F - fam.G == w * fam.H


def test_G_singular_at_the_four_nodes():
    F = GF(31)
    for seed in range(3):
        fam = build_family(FamilyParams.random(random.Random(seed), 31).mod(31))
        for node in ((0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)):
            pt = [F(c) for c in node] + [F(0)]
            assert evaluate(fam.G, pt) == 0
            assert all(evaluate(partial_derivative(fam.G, i), pt) == 0 for i in range(3))


def test_chart_coefficients_are_reversals():
    params = FamilyParams.symbolic()
    d, e = curve_coefficients(params)
    for i in range(3):
        width = 5 - i   # e_i(u) = u^(4-i) d_i(1/u)
        padded = list(d[i]) + [0 * d[i][0]] * (width - len(d[i]))
        assert list(e[i]) + [0] * (width - len(e[i])) == padded[::-1]


def test_weierstrass_f_leading_and_constant_terms():
    params = FamilyParams.symbolic()
    f = weierstrass_f(params)
    a0, b1 = params.a[0], params.b[1]
    assert f[6] == a0 * a0
    assert f[0] == b1 * b1


def test_normalization_identity_symbolic_numeric_and_zero():
    assert normalization_identity(FamilyParams.symbolic()).ok
    p = 101
    assert normalization_identity(FamilyParams.random(random.Random(2), p).mod(p)).ok
    assert normalization_identity(FamilyParams((0, 0, 0), (0, 0, 0), (0, 0, 0), {})).ok


# ------------------------------------------------------------ smoothness

def _form(d):
    return MPoly(XYZW, d)


def test_fermat_smooth_and_cone_singular():
    fermat = _form({tuple(5 * int(i == j) for j in range(4)): 1 for i in range(4)})
    assert smoothness_check_Fp(fermat, 7).smooth
    cone = _form({tuple(5 * int(i == j) for j in range(4)): 1 for i in range(3)})
    res = smoothness_check_Fp(cone, 7)
    assert not res.smooth and res.witness == (0, 0, 0, 1)


def _scan_singular(F, p):
    polys = [groebner.from_mpoly(g, p) for g in [F] + [partial_derivative(F, i) for i in range(4)]]
    for pt in itertools.product(range(p), repeat=4):
        nz = [c for c in pt if c]
        if not nz or nz[0] != 1:
            continue
        if all(_eval_int(g, pt, p) == 0 for g in polys):
            return pt
    return None


def test_singularity_only_over_f49():
    # (y^2 - 3 x^2)^2 vanishes to order two at (1 : +-sqrt(3) : 0 : 0), which are
    # conjugate over F_7; the z, w terms vanish to order two there as well.
    p = 7
    x, y, z, w = (MPoly.var(XYZW, v) for v in XYZW)
    rng = random.Random(11)
    for _ in range(20):
        cubic = lambda: sum((MPoly(XYZW, {m: rng.randrange(p)}) for m in
                             [(3, 0, 0, 0), (0, 3, 0, 0), (1, 1, 1, 0), (0, 0, 0, 3), (0, 0, 3, 0)]),
                            MPoly(XYZW))
        F = (y**2 - x**2 * 3) ** 2 * (x + z + w * 2) + z**2 * cubic() + w**2 * cubic() + z * w * cubic()
        if _scan_singular(F, p) is None:
            break
    else:
        pytest.skip("no candidate without F_7 singular points")
    assert not smoothness_check_Fp(F, p).smooth
    F49 = GF(7, 2)
    alpha = F49(3).sqrt()
    pt = [F49(1), alpha, F49(0), F49(0)]
    Fq = F.map_coeffs(lambda c: F49(c))
    assert evaluate(Fq, pt) == 0
    for i in range(4):
        assert evaluate(partial_derivative(F, i).map_coeffs(lambda c: F49(c)), pt) == 0


@pytest.mark.parametrize("p", [5, 7])
def test_smooth_verdicts_agree_with_scan(p):
    rng = random.Random(p)
    from nodalquintic.family import MULTI_INDICES
    from nodalquintic.multipoly import homogeneous_monomials
    monos = homogeneous_monomials(4, 5)
    for _ in range(10):
        F = _form({m: rng.randrange(p) for m in rng.sample(monos, 12)})
        if F.is_zero() or not F.is_homogeneous(5):
            continue
        verdict = smoothness_check_Fp(F, p)
        if verdict.smooth:
            assert _scan_singular(F, p) is None
        elif verdict.witness is not None:
            assert _scan_singular(F, p) is not None


# ------------------------------------------------------------ special fiber

SPLIT = FamilyParams((2, 1, -2), (2, 0, -2), (1, 0, -1), {})        # f = 4 (w^3 + w)^2 mod 7
REPEATED = FamilyParams((1, -1, -1), (0, 0, 0), (0, 0, 0), {})     # h = w^2 (w + 1)


def test_constructed_split():
    sp = special_fiber_split(SPLIT, 7)
    assert sp.h_ints() == [0, 1, 0, 1]
    F = GF(7)
    f = UPoly.over(F, [F(int(c)) for c in weierstrass_f(SPLIT)])
    assert sp.h * sp.h * sp.c * sp.c == f
    # hhat(u) = c u^3 h(1/u)
    expect = [int(sp.c * sp.h[3 - i]) % 7 for i in range(4)]
    got = [int(x) for x in sp.hhat.coeffs]
    assert got + [0] * (4 - len(got)) == expect


def test_repeated_roots_rejected():
    with pytest.raises(Reject, match="repeated"):
        special_fiber_split(REPEATED, 7)


def test_non_square_rejected():
    with pytest.raises(Reject) as exc:
        special_fiber_split(sample_params(1, 7, 6, 0), 7)
    assert exc.value.stage == "iii"


def _roots_in_extensions(h_ints, p):
    out = []
    for k in (1, 2, 3):
        F = GF(p, k)
        hp = UPoly.over(F, [F(c) for c in h_ints])
        out.extend((F, a) for a in F.elements() if hp(a).is_zero())
    return out


def test_regularity_matches_root_oracle_and_lift_choice():
    p = 7
    rng = random.Random(0)
    seen = 0
    for i in range(6000):
        params = sample_params(1, p, 6, i)
        try:
            sp = special_fiber_split(params, p)
        except Reject:
            continue
        seen += 1
        verdict = regularity_check(params, sp).regular
        g = defect_polynomial(params, sp)
        oracle = True
        for F, a in _roots_in_extensions(sp.h_ints(), p):
            gp = UPoly.over(F, [F(c % p) for c in g])
            if gp(a).is_zero():
                oracle = False
        assert verdict == oracle
        other = [c + p * rng.randrange(-50, 50) for c in sp.h_ints()[:3]] + [1]
        assert regularity_check(params, sp, lift=other).regular == verdict
        if seen >= 25:
            break
    assert seen >= 10


# ------------------------------------------------------------ node fibers

def _fiber_params():
    # a_2 = 1, c_2 = 0, b_2 = -1; search the free entries so that the other
    # three quadratics also split
    for b1, c0, c1 in itertools.product(range(7), repeat=3):
        params = FamilyParams((1, 0, 1), (2, b1, -1), (c0, c1, 0), {})
        try:
            node_fibers(params, 7, 3)
            return params
        except Reject:
            continue
    raise AssertionError("no admissible parameters")


def test_node_fiber_alpha_roots():
    fb = node_fibers(_fiber_params(), 7, 3)
    assert sorted(r.residue for r in fb.alpha) == [1, 342]


def test_node_fiber_non_residue_rejected():
    params = FamilyParams((1, 0, 1), (2, 0, 1), (0, 0, 0), {})
    with pytest.raises(Reject):
        node_fibers(params, 7, 3)


def test_fibers_satisfy_quadratics():
    params, p, N = _accepted()
    fb = node_fibers(params, p, N)
    for (A, B, C), roots in zip(node_quadratics(params), fb.roots):
        for r in roots:
            assert (r * r * A + r * B + C).is_zero()
        assert roots[0].mod_p() != roots[1].mod_p()


def test_sections_lie_on_the_curve():
    params, p, N = _accepted()
    fb = node_fibers(params, p, N)
    f = [PadicNum(p, N, c) for c in weierstrass_f(params)]
    for P, Q in section_points(params, fb):
        for pt in (P, Q):
            if pt.w is None:
                continue
            fw = sum((c * pt.w**k for k, c in enumerate(f)), PadicNum(p, N, 0))
            assert (pt.Y * pt.Y - fw).reduce(N - 3).is_zero()


def test_accepted_pattern_and_meeting_number():
    params, p, N = _accepted()
    sp = special_fiber_split(params, p)
    assert regularity_check(params, sp).regular
    data = reduction_pattern(params, node_fibers(params, p, N), sp)
    assert data.verdict and data.meeting_number == 3 == component_meeting_number(sp)
    assert all(abs(e) == 1 for pair in data.eps for e in pair)


def test_pattern_verdict_counts_split_pairs():
    assert not IntersectionData(3, ((1, -1), (1, 1), (-1, -1), (1, -1)), (1, 4)).verdict
    assert IntersectionData(3, ((1, -1), (1, 1), (-1, 1), (1, -1)), (1, 3, 4)).verdict
    p, N = 7, 6
    checked = 0
    for i in range(5200):
        params = sample_params(1, p, N, i)
        try:
            sp = special_fiber_split(params, p)
            data = reduction_pattern(params, node_fibers(params, p, N), sp)
        except Reject as exc:
            assert exc.stage in ("iii", "fibers", "v")
            continue
        checked += 1
        assert data.split_indices == tuple(k for k, (a, b) in enumerate(data.eps, 1) if a == -b)
        assert data.verdict == (len(data.split_indices) >= 3)
    assert checked > 0


# ------------------------------------------------------------ intersection numbers

def _compositions(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


def test_plane_intersection_examples():
    assert plane_intersection_matrix([2, 3]) == ([[-4, 6], [6, -3]], -24)
    assert plane_intersection_matrix([5]) == ([[5]], 5)
    assert plane_intersection_matrix([1, 1, 3])[1] == 48


def test_closed_form_for_all_compositions_up_to_8():
    for total in range(1, 9):
        for comp in _compositions(total):
            M, det = plane_intersection_matrix(comp)
            assert det == _det_exact(M)


# ------------------------------------------------------------ boundary certificate

def _data(n=3):
    return IntersectionData(3, tuple((1, -1) for _ in range(n)), tuple(range(1, n + 1)))


def test_certificate_examples():
    p, Np = 7, 4
    c = b2_certificate(_data(), (1, 1, -1), (1, 2, 3), p, Np)
    assert c.nonzero and c.signed_sum.residue == 1
    assert (c.n2 * 3 + 1).is_zero()
    c = b2_certificate(_data(), (1, 1, -2), (1, 2, 3), p, Np)
    assert not c.nonzero
    c = b2_certificate(_data(), (0, 0, 0), (1, 2, 3), p, Np)
    assert not c.nonzero


def test_vertical_system_incompatible_with_certificate():
    p, Np = 5, 2
    ED = [[1, 0], [0, 1], [1, 1]]
    b = [0, 0, 1]
    verdict = solve_vertical_system(ED, [], b, [], p, Np)
    assert not verdict.solvable
    y = verdict.certificate
    assert all(sum(y[k] * ED[k][l] for k in range(3)) == 0 for l in range(2))
    m = p**Np
    brute = [(x1, x2) for x1 in range(m) for x2 in range(m)
             if all((ED[k][0] * x1 + ED[k][1] * x2 + b[k]) % m == 0 for k in range(3))]
    assert brute == []
    assert solve_vertical_system(ED, [], [1, 2, 3], [], p, Np).solvable
