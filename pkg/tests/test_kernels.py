import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nodalquintic.errors import DegenerateError, DomainError, ParameterError, PrecisionError
from nodalquintic.kernels.fields import GF
from nodalquintic.kernels.linalg import ExactMatrix, howell_form, kernel_mod_pn, matrix_rank_kernel
from nodalquintic.kernels.padic import (PadicNum, format_padic, hensel_quadratic_roots,
                                         padic_sqrt, parse_padic)
from nodalquintic.kernels.upoly import UPoly, poly_square_root, squarefree_decomposition


def fpoly(F, coeffs):
    return UPoly.over(F, [F(c) for c in coeffs])


# ---------------------------------------------------------------- fields

@pytest.mark.parametrize("p,k", [(7, 1), (5, 2), (3, 3), (101, 1)])
def test_field_axioms_on_random_triples(p, k):
    F = GF(p, k)
    rng = random.Random(p * 10 + k)
    for _ in range(1000):
        a, b, c = F.random(rng), F.random(rng), F.random(rng)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if not a.is_zero():
            assert a * a.inverse() == F.one()


def test_field_rejects_composite_modulus():
    with pytest.raises(ParameterError):
        GF(9)


def test_mixed_fields_do_not_mix():
    with pytest.raises(DomainError):
        GF(7, 2)(GF(5)(1))


def test_square_roots_in_f49():
    F = GF(7, 2)
    for a in F.elements():
        if not a.is_zero() and a.is_square():
            r = a.sqrt()
            assert r * r == a
    # every element of F_7 is a square in F_49
    assert all(F(x).is_square() for x in range(1, 7))


# ---------------------------------------------------------------- p-adics

@given(st.integers(0, 10**12), st.integers(0, 10**12), st.integers(1, 6))
def test_padic_truncation_is_ring_homomorphism(x, y, M):
    p, N = 7, 8
    a, b = PadicNum(p, N, x), PadicNum(p, N, y)
    m = p**M
    assert (a + b).reduce(M).residue % m == (x + y) % m
    assert (a * b).reduce(M).residue % m == (x * y) % m


def test_padic_valuation_and_zero():
    a = PadicNum(5, 6, 250)
    assert a.valuation() == 3 and not a.is_unit()
    z = PadicNum(5, 6, 5**6)
    assert z.is_zero()


def test_padic_division_by_unit_round_trip():
    p, N = 11, 7
    rng = random.Random(1)
    for _ in range(200):
        a = PadicNum(p, N, rng.randrange(p**N))
        u = PadicNum(p, N, rng.randrange(1, p) + p * rng.randrange(p**N))
        assert ((a / u) * u - a).is_zero()


def test_format_and_parse_round_trip():
    x = PadicNum(7, 6, 3 * 49)
    text = format_padic(x)
    assert parse_padic(text) == x
    assert text.endswith("mod 7^6")


def test_hensel_roots_of_x2_minus_1():
    one = PadicNum(5, 3, 1)
    r = hensel_quadratic_roots(one, PadicNum(5, 3, 0), PadicNum(5, 3, -1))
    assert sorted(x.residue for x in r) == [1, 124]


def test_hensel_roots_of_x2_minus_2():
    one = PadicNum(7, 3, 1)
    r = hensel_quadratic_roots(one, PadicNum(7, 3, 0), PadicNum(7, 3, -2))
    assert sorted(x.residue for x in r) == [108, 235]
    # brute-force oracle over residues mod 343
    assert [x for x in range(343) if (x * x - 2) % 343 == 0] == [108, 235]


def test_hensel_no_root_for_non_residue():
    one = PadicNum(5, 3, 1)
    assert hensel_quadratic_roots(one, PadicNum(5, 3, 0), PadicNum(5, 3, -3)) is None


def test_hensel_non_unit_leading_coefficient():
    with pytest.raises(DegenerateError):
        hensel_quadratic_roots(PadicNum(5, 3, 5), PadicNum(5, 3, 1), PadicNum(5, 3, 1))


def test_hensel_positive_even_valuation_is_flagged():
    p = 7
    one = PadicNum(p, 6, 1)
    # x^2 - 49*2: discriminant valuation 2
    with pytest.raises(PrecisionError):
        hensel_quadratic_roots(one, PadicNum(p, 6, 0), PadicNum(p, 6, -98))
    r = hensel_quadratic_roots(one, PadicNum(p, 6, 0), PadicNum(p, 6, -98), allow_reduced=True)
    assert r is not None


@given(st.integers(1, 10**9), st.integers(0, 10**9), st.sampled_from([7, 11, 13]))
def test_hensel_roots_square_back(a, b, p):
    N = 6
    A = PadicNum(p, N, a * p + 1)
    B, C = PadicNum(p, N, b), PadicNum(p, N, -(b + 1) * 3)
    try:
        roots = hensel_quadratic_roots(A, B, C)
    except PrecisionError:
        return
    if roots is None:
        return
    for r in roots:
        assert (A * r * r + B * r + C).is_zero()


def test_padic_sqrt_round_trip():
    p = 13
    rng = random.Random(5)
    for _ in range(100):
        x = PadicNum(p, 8, rng.randrange(1, p) + p * rng.randrange(p**7))
        s = padic_sqrt(x * x)
        assert (s * s - x * x).is_zero()


# ---------------------------------------------------------------- polynomials

def test_poly_square_root_examples():
    F3 = GF(3)
    h, _ = poly_square_root(fpoly(F3, [1, 0, 1]) ** 2)
    assert h == fpoly(F3, [1, 0, 1])
    assert poly_square_root(fpoly(GF(5), [0, 1])) is None
    F7 = GF(7)
    h, c = poly_square_root(fpoly(F7, [0, 1, 0, 1]) ** 2 * F7(4))
    assert h == fpoly(F7, [0, 1, 0, 1]) and c * c == F7(4)
    assert int(c) == 2
    with pytest.raises(DegenerateError):
        poly_square_root(fpoly(F7, []))


@given(st.lists(st.integers(0, 10), min_size=1, max_size=5), st.integers(1, 10))
def test_poly_square_root_round_trip(coeffs, c):
    F = GF(11)
    g = fpoly(F, coeffs + [1])
    f = g * g * F(c * c)
    h, s = poly_square_root(f)
    assert h * h * s * s == f


def test_squarefree_decomposition_reassembles():
    F = GF(7)
    f = fpoly(F, [1, 1]) ** 3 * fpoly(F, [2, 0, 1]) * fpoly(F, [0, 1]) ** 2
    prod = fpoly(F, [1])
    for g, e in squarefree_decomposition(f):
        prod = prod * g**e
    assert prod == f.monic()


# ---------------------------------------------------------------- linear algebra

def test_rank_kernel_examples():
    F7 = GF(7)
    rank, ker = matrix_rank_kernel(ExactMatrix.of([[F7(int(i == j)) for j in range(3)]
                                                   for i in range(3)]))
    assert rank == 3 and ker == []
    F5 = GF(5)
    rank, ker = matrix_rank_kernel(ExactMatrix.of([[F5(0)] * 5] * 2))
    assert rank == 0 and len(ker) == 5
    F = GF(101)
    rank, ker = matrix_rank_kernel(ExactMatrix.of([[F(1), F(0), F(1)], [F(0), F(1), F(1)]]))
    assert rank == 2 and len(ker) == 1
    v = ker[0]
    assert v[0] == v[1] == -v[2]


def test_mixed_domain_matrix_rejected():
    with pytest.raises(DomainError):
        matrix_rank_kernel(ExactMatrix.of([[GF(5)(1), GF(7)(1)]]))


@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_plus_nullity(rows):
    M = ExactMatrix.of([[Fraction(x) for x in r] for r in rows])
    rank, ker = matrix_rank_kernel(M)
    assert rank + len(ker) == 4
    for v in ker:
        for r in rows:
            assert sum(Fraction(a) * b for a, b in zip(r, v)) == 0


def test_kernel_mod_pn_examples():
    p = 7
    M = [[1, 0, 1], [0, 1, 1]]
    gens = kernel_mod_pn(M, p, 3)
    m = p**3
    assert any(sorted([g[0] % m, g[1] % m]) == [1, 1] and g[2] % m == m - 1 for g in gens)
    assert kernel_mod_pn([[p]], p, 2) == [[p]]
    with pytest.raises(ParameterError):
        kernel_mod_pn([[1]], p, 0)


def test_kernel_of_unit_matrix_is_trivial():
    p, N = 11, 4
    rng = random.Random(3)
    while True:
        M = [[rng.randrange(p**N) for _ in range(2)] for _ in range(2)]
        if (M[0][0] * M[1][1] - M[0][1] * M[1][0]) % p:
            break
    assert kernel_mod_pn(M, p, N) == []


def test_kernel_mod_p2_brute_force_downscale():
    p, N = 3, 2
    m = p**N
    rng = random.Random(8)
    for _ in range(20):
        M = [[rng.randrange(m) for _ in range(3)] for _ in range(2)]
        gens = kernel_mod_pn(M, p, N)
        span = set()
        for coeffs in itertools.product(range(m), repeat=len(gens)):
            span.add(tuple(sum(c * g[j] for c, g in zip(coeffs, gens)) % m for j in range(3)))
        brute = {v for v in itertools.product(range(m), repeat=3)
                 if all(sum(a * b for a, b in zip(r, v)) % m == 0 for r in M)}
        assert span == brute


def test_howell_form_is_canonical():
    p, N = 5, 3
    m = p**N
    rng = random.Random(4)
    for _ in range(30):
        rows = [[rng.randrange(m) for _ in range(4)] for _ in range(3)]
        # unimodular row operations give the same row span
        U = [[1, 2, 0], [0, 1, 0], [3, 0, 1]]
        mixed = [[sum(U[i][k] * rows[k][j] for k in range(3)) % m for j in range(4)]
                 for i in range(3)]
        assert howell_form(rows, p, N) == howell_form(mixed, p, N)
