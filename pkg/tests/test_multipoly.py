import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from nodalquintic.errors import ParameterError
from nodalquintic.family import XYZW, FamilyParams, build_family
from nodalquintic.kernels.fields import GF
from nodalquintic.multipoly import (MPoly, divide, evaluate, format_mpoly, homogeneous_monomials,
                                    parse_mpoly, partial_derivative, specialize)

NAMES = ("x", "y", "z")

terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
    st.integers(-5, 5), max_size=5)


def poly(d) -> MPoly:
    return MPoly(NAMES, d)


@pytest.mark.parametrize("n,d,count", [(4, 5, 56), (4, 11, 364), (1, 3, 1), (3, 0, 1)])
def test_homogeneous_monomial_counts(n, d, count):
    ms = homogeneous_monomials(n, d)
    assert len(ms) == count == comb(d + n - 1, n - 1)
    assert len(set(ms)) == len(ms)
    assert all(sum(m) == d for m in ms)


def test_partial_derivative_examples():
    x, y, z, w = (MPoly.var(XYZW, v) for v in XYZW)
    assert partial_derivative(x**2 * y, 0) == x * y * 2
    assert partial_derivative(x**5, 3).is_zero()
    fermat = x**5 + y**5 + z**5 + w**5
    assert partial_derivative(fermat, 0) == x**4 * 5


@given(terms, terms, terms)
def test_ring_axioms(a, b, c):
    f, g, h = poly(a), poly(b), poly(c)
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert (f - f).is_zero()


@given(terms, terms)
def test_homogeneous_products(a, b):
    f = poly({m: c for m, c in a.items() if sum(m) == 2})
    g = poly({m: c for m, c in b.items() if sum(m) == 3})
    if f.is_zero() or g.is_zero():
        return
    assert (f * g).is_homogeneous(5)


def test_euler_identity_on_family_quintic():
    params = FamilyParams.symbolic()
    F = build_family(params).F
    total = MPoly(F.names)
    for i, v in enumerate(XYZW):
        total = total + MPoly.var(F.names, v) * partial_derivative(F, i)
    assert total == F * 5


def test_specialize_examples():
    names = ("a_0", "a_1", "x", "y")
    f = MPoly.var(names, "a_0") * MPoly.var(names, "x") + MPoly.var(names, "a_1") * MPoly.var(names, "y")
    F7 = GF(7)
    g = specialize(f, {"a_0": F7(1), "a_1": F7(0)}, ("x", "y"))
    assert g == MPoly(("x", "y"), {(1, 0): F7(1)})
    with pytest.raises(ParameterError, match="a_1"):
        specialize(f, {"a_0": 1}, ("x", "y"))


@given(terms, terms, st.integers(0, 30), st.integers(0, 30))
def test_specialize_is_homomorphism(a, b, s, t):
    f, g = poly(a), poly(b)
    asg = {"x": s, "y": t}
    lhs = specialize(f + g, asg, ("z",))
    rhs = specialize(f, asg, ("z",)) + specialize(g, asg, ("z",))
    assert lhs == rhs
    assert specialize(f * g, asg, ("z",)) == specialize(f, asg, ("z",)) * specialize(g, asg, ("z",))


def test_G_vanishes_at_nodes_over_F31():
    F = GF(31)
    params = FamilyParams.random(random.Random(3), 31).mod(31)
    fam = build_family(params)
    for node in ((0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)):
        pt = [F(c) for c in node] + [F(0)]
        assert evaluate(fam.G, pt) == 0
        for i in range(3):
            assert evaluate(partial_derivative(fam.G, i), pt) == 0


def test_parse_format_round_trip():
    f = parse_mpoly("3*x^2*y - 2y z + 7", NAMES)
    assert f == poly({(2, 1, 0): 3, (0, 1, 1): -2, (0, 0, 0): 7})
    assert parse_mpoly(format_mpoly(f), NAMES) == f


@given(terms)
def test_parse_format_property(a):
    f = poly(a)
    assert parse_mpoly(format_mpoly(f), NAMES) == f


def test_division_reconstructs():
    x, y, z = (MPoly.var(NAMES, v) for v in NAMES)
    f = x**3 * y + y**2 * z + x
    gs = [x * y - z, y**2 - 1]
    q, r = divide(f, gs)
    assert q[0] * gs[0] + q[1] * gs[1] + r == f
