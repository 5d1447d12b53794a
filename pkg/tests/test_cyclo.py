from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlkit.cyclo import (
    CycloElement,
    IntPolynomial,
    cyc_inverse,
    cyclo_const,
    cyclotomic_poly,
    cyclotomic_product,
    divisors,
    embed_real,
    euler_phi,
    factor_into_cyclotomics,
    field_norm,
    from_p1_coordinates,
    galois_apply,
    is_unit,
    lift,
    parse_element,
    poly_at,
    real_embeddings,
    real_p,
    real_sign,
    sqrt_minus_xi_times,
    to_p1_coordinates,
    units_mod,
    zeta,
)

MODULI = [3, 4, 5, 7, 8, 9, 10, 12, 14, 18]


def poly(*coeffs: int) -> IntPolynomial:
    return IntPolynomial(tuple(coeffs))


def element_strategy(m: int):
    phi = euler_phi(m)
    return st.lists(st.integers(-5, 5), min_size=phi, max_size=phi).map(lambda cs: CycloElement.from_poly(m, cs))


# --- integer polynomials -------------------------------------------------------


def test_cyclotomic_polynomials_small_indices():
    assert cyclotomic_poly(1) == poly(-1, 1)
    assert cyclotomic_poly(10) == poly(1, -1, 1, -1, 1)
    assert cyclotomic_poly(12) == poly(1, 0, -1, 0, 1)


@pytest.mark.parametrize("n", range(1, 40))
def test_product_over_divisors_is_t_power_minus_one(n):
    # t^n - 1 = prod_{d | n} Phi_d, computed with sympy as an outside reference as well
    sympy = pytest.importorskip("sympy")
    t = sympy.Symbol("t")
    assert cyclotomic_product(divisors(n)) == IntPolynomial.from_roots_of_unity_power(n)
    reference = sympy.Poly(sympy.cyclotomic_poly(n, t), t).all_coeffs()[::-1]
    assert cyclotomic_poly(n).coefficients == tuple(int(c) for c in reference)
    assert cyclotomic_poly(n).degree == euler_phi(n)


def test_factor_into_cyclotomics_examples():
    assert sorted(factor_into_cyclotomics(poly(1, 0, 0, 0, 0, 1))) == [2, 10]
    assert factor_into_cyclotomics(poly(-1, 1)) == (1,)
    quotient = IntPolynomial.from_roots_of_unity_power(12).exact_div(cyclotomic_poly(1))
    factors = factor_into_cyclotomics(quotient)
    assert sorted(factors) == [2, 3, 4, 6, 12]
    assert cyclotomic_product(factors) == quotient


def test_factor_rejects_non_cyclotomic():
    assert factor_into_cyclotomics(poly(-2, 1)) is None
    assert factor_into_cyclotomics(poly(1, 1, 1, 1)) is not None  # Phi_2 Phi_4
    assert factor_into_cyclotomics(poly(1, 3, 1)) is None


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=1, max_size=6))
def test_factorization_roundtrip(indices):
    product = cyclotomic_product(indices)
    assert sorted(factor_into_cyclotomics(product)) == sorted(indices)


def test_polynomial_division():
    quotient, remainder = poly(-1, 0, 0, 1).divmod_monic(poly(-1, 1))
    assert quotient == poly(1, 1, 1) and remainder.is_zero()
    assert poly(1, 1).divides(poly(-1, 0, 1))
    with pytest.raises(ValueError):
        poly(1, 0, 1).exact_div(poly(1, 1))


# --- cyclotomic field arithmetic ------------------------------------------------


def test_zeta_relations():
    for m in MODULI:
        z = zeta(m)
        assert (z**m - 1).is_zero()
        assert poly_at(cyclotomic_poly(m), z).is_zero()
        assert z * z.conj() == cyclo_const(m, 1)


def test_inverse_examples():
    assert cyc_inverse(zeta(12)) == zeta(12, 11)
    p1 = real_p(10)
    assert cyc_inverse(p1) == p1 - 1
    inverse = cyc_inverse(zeta(12) - 1)
    assert inverse.is_integral
    assert is_unit(zeta(12) - 1)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        cyc_inverse(cyclo_const(7, 0))


@pytest.mark.parametrize("m", MODULI)
def test_field_axioms(m):
    strategy = element_strategy(m)

    @settings(max_examples=25, deadline=None)
    @given(strategy, strategy, strategy)
    def check(x, y, z):
        assert (x + y) * z == x * z + y * z
        assert (x * y) * z == x * (y * z)
        if not x.is_zero():
            assert (x / x) == cyclo_const(m, 1)
            assert (y / x) * x == y
        assert (x * y).conj() == x.conj() * y.conj()

    check()


def test_galois_action():
    assert galois_apply(zeta(10), 9) == zeta(10, 9)
    assert galois_apply(real_p(10), 3) == real_p(10, 3)
    x = CycloElement.from_poly(12, [1, 2, 3])
    assert galois_apply(x, 1) == x
    with pytest.raises(ValueError):
        galois_apply(x, 2)


def test_field_norm_examples():
    p1 = real_p(12)
    assert field_norm(1 + p1) == -2
    assert field_norm(cyclo_const(12, 1)) == 1
    assert field_norm(2 * p1 * (p1 + 2)) == -12
    p1_ten = real_p(10)
    assert field_norm(2 * p1_ten**3) == -4


def test_field_norm_is_product_of_embeddings():
    for m in (10, 12, 14, 18):
        x = 3 + real_p(m) - real_p(m) ** 2
        numeric = math.prod(float(v.real) for v in real_embeddings(x))
        assert abs(numeric - float(field_norm(x))) < 1e-9


def test_real_embeddings_of_p1():
    vals = sorted(float(v.real) for v in real_embeddings(real_p(10)))
    assert vals == pytest.approx([(1 - 5**0.5) / 2, (1 + 5**0.5) / 2])
    vals = sorted(float(v.real) for v in real_embeddings(real_p(12)))
    assert vals == pytest.approx([-(3**0.5), 3**0.5])
    # one value per complex embedding, each real embedding hit twice
    assert len(embed_real(real_p(12))) == euler_phi(12)
    assert all(v == 0 for v in embed_real(cyclo_const(12, 0)))


def test_sqrt_minus_xi_normalizers_are_positive():
    for m in (10, 12, 14, 18):
        for k in units_mod(m):
            xi = zeta(m, k)
            assert sqrt_minus_xi_times(1 - xi.conj(), k) > 0
            assert sqrt_minus_xi_times(1 / (1 - xi), k) > 0
    assert sqrt_minus_xi_times(cyclo_const(12, 0), 1) == 0


def test_p1_coordinates_roundtrip():
    for m in (10, 12, 14, 18):
        x = 2 - 3 * real_p(m) + real_p(m) ** 2
        coords = to_p1_coordinates(x)
        assert from_p1_coordinates(m, coords) == x
    with pytest.raises(ValueError):
        to_p1_coordinates(zeta(12))


def test_lift_between_moduli():
    x = zeta(9) + 2
    lifted = lift(x, 18)
    assert lifted == zeta(18, 2) + 2
    assert real_sign(lift(real_p(9), 18)) == 1


def test_parse_element():
    m = 12
    assert parse_element("2*p1*(p1+2)", m) == 2 * real_p(m) * (real_p(m) + 2)
    assert parse_element("z^3 - 1/2", m) == zeta(m, 3) - Fraction(1, 2)
    with pytest.raises(ValueError):
        parse_element("q + 1", m)
    with pytest.raises(ValueError):
        parse_element("__import__('os')", m)
