from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from mlkit import families as fam
from mlkit.cyclo import cyclo_const, cyclotomic_product, factor_into_cyclotomics, zeta


def unit(mu: int, *terms: tuple[int, int]) -> list[int]:
    vec = [0] * mu
    for k, c in terms:
        vec[k - 1] += c
    return vec


def image(spec: fam.FamilySpec, k: int) -> list[int]:
    lat = fam.family_lattice(spec)
    return [lat.M[i][k - 1] for i in range(spec.mu)]


def test_action_spot_values():
    spec = fam.family_spec("Ssharp", 2)
    assert image(spec, 8) == unit(spec.mu, (3, -1), (8, -1))
    assert image(spec, 9) == unit(spec.mu, (10, 1))
    spec = fam.family_spec("E3", 1)
    assert image(spec, 9) == unit(spec.mu, (1, 1), (2, 1), (10, 1))


def test_invariants_from_catalog():
    spec = fam.family_spec("Wsharp", 5)
    assert (spec.mu, spec.m, spec.r_I) == (20, 12, 1)
    z = fam.family_spec("Z", 3)
    assert z.betas[2] == tuple(unit(z.mu, (3, 1), (4, -1), (9, -1)))
    q = fam.family_spec("Q2_0")
    assert cyclotomic_product(q.b[1]) == cyclotomic_product([12, 4])
    assert fam.family_spec("U1_0").mu == 14


@pytest.mark.parametrize("series", fam.SERIES_KEYS)
def test_series_char_poly_matches_blocks(series):
    for p in range(1, 2 * fam.family_spec(series, 1).m + 1):
        spec = fam.family_spec(series, p)
        lat = fam.family_lattice(spec)
        expected = sorted(n for ind in spec.b for n in ind)
        assert sorted(factor_into_cyclotomics(lat.char_poly())) == expected
        assert lat.rank == spec.mu
        invariants = fam.expected_invariants(spec)
        assert invariants["m2"] == spec.m + spec.r_I * p


def test_unknown_names_and_parameters():
    with pytest.raises(KeyError):
        fam.family_spec("X9")
    with pytest.raises(ValueError):
        fam.family_spec("W")
    assert fam.canonical_name("W#") == "Wsharp"


def test_catalog_mismatch_is_detected(tmp_path):
    catalog = json.loads(fam.catalog_text())
    rule = next(r for r in catalog["series"]["E3"]["action"] if "to" in r)
    key = next(iter(rule["to"]))
    rule["to"][key] += 1
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps(catalog))
    fam.set_catalog_path(path)
    try:
        with pytest.raises(fam.CatalogMismatchError):
            fam.family_lattice(fam.family_spec("E3", 3))
    finally:
        fam.set_catalog_path(None)
    fam.family_lattice(fam.family_spec("E3", 3))


# --- spectra --------------------------------------------------------------------


def test_spectrum_from_weights_examples():
    a2 = fam.spectrum_from_weights(["1/3", "1/2", "1/2"])
    assert a2.as_strings() == ["1/3", "2/3"]
    w10 = fam.spectrum_from_weights(fam.family_spec("W1_0").weights)
    assert w10.values[0] == Fraction(-1, 12)
    assert w10.is_symmetric()


def test_spectrum_from_weights_brute_force():
    # expand prod (t - t^w)/(t^w - 1) by enumerating monomial exponents directly
    weights = [Fraction(1, 3), Fraction(1, 4), Fraction(1, 2)]
    expected = []
    ranges = [range(1, int(1 / w)) for w in weights]
    for i in ranges[0]:
        for j in ranges[1]:
            for k in ranges[2]:
                expected.append(i * weights[0] + j * weights[1] + k * weights[2] - 1)
    assert list(fam.spectrum_from_weights(weights).values) == sorted(expected)


def test_spectrum_weight_errors():
    with pytest.raises(fam.SpectrumError):
        fam.spectrum_from_weights(["3/2", "1/2", "1/2"])


def test_spectrum_from_charpoly_examples():
    spec = fam.family_spec("Wsharp", 1)
    values = fam.spectrum_from_charpoly(spec).values
    assert values[0] == Fraction(-1, 12) and values[1] == Fraction(1, 13)
    z = fam.spectrum_from_charpoly(fam.family_spec("Z1_0")).values
    # m = 14 for this family, so the extremes are -1/14 and 1/14
    assert (z[0], z[1]) == (Fraction(-1, 14), Fraction(1, 14))


@pytest.mark.parametrize("key", fam.QUADRANGLE_KEYS)
def test_quadrangle_spectra_two_methods(key):
    spec = fam.family_spec(key)
    by_weights = fam.spectrum_from_weights(spec.weights)
    by_charpoly = fam.spectrum_from_charpoly(spec)
    assert by_weights == by_charpoly
    assert by_weights.is_symmetric() and by_weights.in_range()
    assert len(by_weights) == spec.mu


# --- arithmetic layer -------------------------------------------------------------


def test_hypergeometric_parameters():
    assert fam.hypergeom_params(12, 12, 6) == (Fraction(1, 2), Fraction(1, 3), Fraction(11, 12))
    assert fam.hypergeom_params(*fam.family_spec("Q2_0").triangle) == (Fraction(5, 12), Fraction(1, 4), Fraction(5, 6))
    rng = random.Random(2)
    for _ in range(20):
        m0, m1, minf = (rng.randint(2, 30) for _ in range(3))
        a, b, c = fam.hypergeom_params(m0, m1, minf)
        assert (1 - c, c - a - b, a - b) == (Fraction(1, m0), Fraction(1, m1), Fraction(1, minf))


def test_j_invariant_values():
    assert fam.j_invariant(Fraction(-1)) == 1
    t = zeta(6)  # root of t^2 - t + 1
    assert fam.j_invariant(t) == cyclo_const(6, 0)
    with pytest.raises(fam.PoleError):
        fam.j_invariant(Fraction(1))
    with pytest.raises(fam.PoleError):
        fam.j_invariant(Fraction(0))


def test_j_invariant_constant_on_orbits():
    rng = random.Random(4)
    for _ in range(50):
        t = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        if t in (0, 1):
            continue
        values = {fam.j_invariant(fam.apply_word(word, t)) for word in fam.G3_ELEMENTS.values()}
        assert len(values) == 1


def test_kappa_examples():
    t = Fraction(3, 7)
    assert fam.kappa(fam.family_spec("S1_0"), "1-t", t) == -1
    assert fam.kappa(fam.family_spec("E3_0"), "id", t) == 1
    assert fam.kappa(fam.family_spec("E3_0"), "1/t", t) == t**-12
    with pytest.raises(fam.GroupMismatchError):
        fam.kappa(fam.family_spec("W1_0"), "1/t", t)


@pytest.mark.parametrize("key", fam.QUADRANGLE_KEYS)
def test_kappa_cocycle_independent_of_factorization(key):
    spec = fam.family_spec(key)
    rng = random.Random(8)
    # relations of S_3 (and of the subgroup of order 2): sigma^2 = tau^2 = (sigma tau)^3 = id
    relations = [("sigma", "sigma")]
    if spec.group == "G3":
        relations += [("tau", "tau"), ("sigma", "tau") * 3, ("sigma", "tau", "sigma", "tau", "sigma", "tau", "sigma", "tau", "sigma", "tau", "sigma", "tau")]
        # two words for the same element t/(t-1)
        alternatives = [(("sigma", "tau", "sigma"), ("tau", "sigma", "tau"))]
    else:
        alternatives = []
    for _ in range(20):
        t = Fraction(rng.randint(2, 40), rng.randint(41, 90))
        for word in relations:
            assert fam.apply_word(word, t) == t
            assert fam.kappa_word(spec, word, t) == 1
        for left, right in alternatives:
            assert fam.apply_word(left, t) == fam.apply_word(right, t)
            assert fam.kappa_word(spec, left, t) == fam.kappa_word(spec, right, t)
