from __future__ import annotations

import random

import pytest

from mlkit import families as fam
from mlkit import herm
from mlkit.cyclo import (
    BranchError,
    CycloElement,
    cyclo_const,
    cyclotomic_poly,
    euler_phi,
    is_unit,
    real_sign,
    units_mod,
    zeta,
)
from mlkit.orlik import make_orlik_block

SUBSERIES = [(key, r) for key in fam.SERIES_KEYS for r in (1, 2)]


def subseries_spec(key: str, r: int) -> fam.FamilySpec:
    return fam.family_spec(key, fam.family_spec(key, 1).m * r)


def test_divide_by_linear_matches_listed_cofactor():
    m = 12
    xi = zeta(m)
    quotient = herm.divide_by_linear(cyclotomic_poly(12), xi)
    assert quotient == [xi**3 - xi, xi**2 - 1, xi, cyclo_const(m, 1)]
    with pytest.raises(herm.NotAnEigenvalueError):
        herm.divide_by_linear(cyclotomic_poly(10), zeta(12))


def test_eigenvectors_of_blocks():
    spec = subseries_spec("Wsharp", 1)
    lat = fam.family_lattice(spec)
    block = make_orlik_block(lat, spec.betas[0])
    for k in units_mod(12):
        v = herm.eigenvector_of_block(block, k, 12)
        assert v.is_eigenvector(lat)
        # Galois equivariance: conj(v(beta, xi)) = v(beta, conj xi)
        assert v.conj() == herm.eigenvector_of_block(block, -k, 12)


def test_rank_one_block_eigenvector_is_generator():
    spec = fam.family_spec("Z", 2)
    lat = fam.family_lattice(spec)
    block = make_orlik_block(lat, spec.betas[2])
    v = herm.eigenvector_of_block(block, 1, 2)
    assert [c.coords[0] for c in v.coords] == list(spec.betas[2])


def test_cross_terms_vanish_and_branch_errors():
    spec = subseries_spec("S", 1)
    data = herm.eigen_data(spec, 3)
    assert data.h12.u.is_zero()
    lat = fam.family_lattice(spec)
    vec = [cyclo_const(10, 0)] * spec.mu
    with pytest.raises(BranchError):
        herm.herm_value_of(lat, vec, vec, 10, 5)
    with pytest.raises(BranchError):
        herm.herm_value_of(lat, vec, vec, 10, 0)
    assert herm.herm_sign(herm.HermValue(cyclo_const(10, 0), 1)) == 0


def test_eigen_data_requires_subseries():
    with pytest.raises(ValueError):
        herm.eigen_data(fam.family_spec("W", 5), 1)
    with pytest.raises(ValueError):
        herm.eigen_data(subseries_spec("W", 1), 2)


def test_hermitian_symmetry_on_random_eigenspace_vectors():
    rng = random.Random(17)
    for key, r in [("Wsharp", 1), ("E3", 1), ("Q2", 1)]:
        spec = subseries_spec(key, r)
        lat = fam.family_lattice(spec)
        m = spec.m
        for k in units_mod(m)[:3]:
            data = herm.eigen_data(spec, k)
            basis = [data.v1.coords, data.v2.coords]

            def combo():
                weights = [CycloElement.from_poly(m, [rng.randint(-3, 3) for _ in range(euler_phi(m))]) for _ in basis]
                return [sum((w * vec[i] for w, vec in zip(weights, basis)), cyclo_const(m, 0)) for i in range(spec.mu)]

            a, b = combo(), combo()
            hab = herm.herm_value_of(lat, a, b, m, k)
            hba = herm.herm_value_of(lat, b, a, m, k)
            assert abs(complex(hab) - complex(hba).conjugate()) < 1e-20 * max(1, abs(complex(hab)))
            haa = complex(herm.herm_value_of(lat, a, a, m, k))
            assert abs(haa.imag) < 1e-20 * max(1, abs(haa))


@pytest.mark.parametrize("key, r", SUBSERIES)
def test_closed_forms_and_signs(key, r):
    spec = subseries_spec(key, r)
    m = spec.m
    for k in units_mod(m):
        data = herm.eigen_data(spec, k)
        assert data.h11.u == herm.closed_form_h11(key, k, m)
        assert data.h22.u == herm.closed_form_h22(spec.r_I, m, r, k)
        assert data.L_v1_beta1 == herm.closed_form_L_v1_beta1(key, k, m)
        assert data.L_v2_beta2 == herm.closed_form_L_v2_beta2(spec.r_I, m, k)
        assert is_unit(data.L_v1_beta1)
        w = herm.w_of_xi(spec, k)
        assert w == herm.closed_form_w(key, k, m, r)
        special = k in (1, m - 1)
        assert herm.herm_sign(data.h11) == (-1 if special else 1)
        assert herm.herm_sign(data.h22) == 1
        assert real_sign(w) == (1 if special else -1)


@pytest.mark.parametrize("key", fam.QUADRANGLE_KEYS)
def test_quadrangle_w_values(key):
    spec = fam.family_spec(key)
    for k in units_mod(spec.m):
        assert herm.w_of_xi(spec, k) == herm.closed_form_w(spec.series, k, spec.m, 0)


def test_e3_special_sign():
    data = herm.eigen_data(subseries_spec("E3", 1), 1)
    assert herm.herm_sign(data.h11) == -1
