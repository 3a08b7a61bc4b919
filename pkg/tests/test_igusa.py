import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from nodalquintic.errors import DegenerateError, ParameterError
from nodalquintic.family import FamilyParams, weierstrass_f
from nodalquintic.igusa import (QuinticModel, absolute_invariants, igusa_invariants,
                                random_probe, sextic_to_quintic, t0_quintic_slice,
                                weierstrass_sextic, SexticData)
from nodalquintic.kernels.fields import GF

X = sympy.Symbol("x")

coeff = st.integers(-6, 6)
models = st.tuples(st.integers(1, 5), coeff, coeff, coeff, coeff, coeff).map(
    lambda v: QuinticModel(tuple(Fraction(c) for c in v)))


def _disc(m: QuinticModel) -> Fraction:
    f = sum(sympy.Rational(c.numerator, c.denominator) * X**k for k, c in enumerate(m.coeffs()))
    return Fraction(int(sympy.discriminant(f, X)))


def test_x5_minus_x():
    J = igusa_invariants(QuinticModel((1, 0, 0, 0, -1, 0)))
    assert J.J2 == -5
    assert 4 * J.J8 == J.J2 * J.J6 - J.J4**2


def test_x5_minus_1_has_vanishing_low_invariants():
    # extra automorphism of order 5 forces J_2 = J_4 = J_6 = J_8 = 0
    J = igusa_invariants(QuinticModel.from_coeffs([-1, 0, 0, 0, 0, 1]))
    assert J.as_tuple()[:4] == (0, 0, 0, 0) and J.J10 != 0
    with pytest.raises(DegenerateError):
        absolute_invariants(J)


@given(models)
def test_J10_is_discriminant_times_v0_squared(m):
    assert igusa_invariants(m).J10 == m.v[0] ** 2 * _disc(m)


@given(models, st.integers(-4, 4).filter(bool))
def test_weight_law(m, lam):
    J = igusa_invariants(m).as_tuple()
    Js = igusa_invariants(m.scale(Fraction(lam))).as_tuple()
    for k, (a, b) in enumerate(zip(J, Js), start=1):
        assert b == a * Fraction(lam) ** (2 * k)


@given(models, st.integers(-3, 3))
def test_translation_invariance(m, c):
    assert igusa_invariants(m.translate(Fraction(c))).as_tuple() == igusa_invariants(m).as_tuple()


def test_repeated_root_kills_J10():
    # (x - 1)^2 (x^3 + 2)
    m = QuinticModel.from_coeffs([2, -4, 2, 1, -2, 1])
    assert igusa_invariants(m).J10 == 0


def test_finite_field_agrees_with_reduction():
    p = 101
    F = GF(p)
    m = QuinticModel(tuple(Fraction(c) for c in (3, 1, -4, 1, 5, -9)))
    Jq = igusa_invariants(m).as_tuple()
    Jp = igusa_invariants(QuinticModel(tuple(F(int(c)) for c in m.v))).as_tuple()
    for a, b in zip(Jq, Jp):
        assert F(a.numerator) / F(a.denominator) == b


def test_weierstrass_sextic_examples():
    # d_0 = w, d_1 = 1, d_2 = w^2: f = 1 - 4 w^3
    assert weierstrass_sextic([0, 1], [1], [0, 0, 1]).coeffs == (1, 0, 0, -4, 0, 0, 0)
    s = weierstrass_sextic([1], [0, 0, 0, 2], [0])
    assert s.leading == 4 and s.constant == 0


def test_sextic_to_quintic_moves_root_to_infinity():
    # f = w (w - 1)(w - 2)(w - 3)(w - 4)(w - 5): the root 0 goes to infinity
    w = sympy.Symbol("w")
    f = sympy.Poly(sympy.prod([w - k for k in range(6)]), w)
    s = SexticData(tuple(Fraction(int(c)) for c in reversed(f.all_coeffs())))
    m = sextic_to_quintic(s, Fraction(0))
    # Igusa invariants are projective invariants of the six branch points: compare
    # with the quintic model through x -> 1/x on the remaining roots
    ref = QuinticModel.from_coeffs([Fraction(int(c)) for c in reversed(
        sympy.Poly(sympy.prod([1 - k * X for k in range(1, 6)]), X).all_coeffs())])
    a, b = absolute_invariants(igusa_invariants(m)), absolute_invariants(igusa_invariants(ref))
    assert a == b


def test_t0_slice():
    params = FamilyParams((0, 2, 3), (1, -1, 4), (2, 5, -3), {})
    m = t0_quintic_slice(params)
    assert m.v[0] == 4 * 3 * (2 + 3)
    assert m.coeffs() == list(weierstrass_f(params))[:6]
    with pytest.raises(ParameterError):
        t0_quintic_slice(FamilyParams((1, 2, 3), (1, -1, 4), (2, 5, -3), {}))
    with pytest.raises(DegenerateError):
        t0_quintic_slice(FamilyParams((0, 2, -2), (1, -1, 4), (2, 5, -3), {}))


def test_moduli_probe_full_rank():
    rep = random_probe(7)
    assert rep.target == 7
    assert rep.full_rank
    assert rep.to_json()["full_rank"] is True
