from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlkit import families as fam
from mlkit import matrices as mx
from mlkit import orlik
from mlkit.cyclo import IntPolynomial, cyclotomic_poly, cyclotomic_product
from mlkit.lattice import lattice_from_stokes


def unit(mu: int, k: int) -> list[int]:
    vec = [0] * mu
    vec[k - 1] = 1
    return vec


def test_block_examples():
    spec = fam.family_spec("Ssharp", 2)
    lat = fam.family_lattice(spec)
    block = orlik.make_orlik_block(lat, unit(spec.mu, 8))
    assert block.rank == 5
    assert block.block_poly == cyclotomic_product([10, 2])

    a1 = lattice_from_stokes([[1]])
    whole = orlik.make_orlik_block(a1, [1])
    assert whole.block_poly == cyclotomic_poly(2)

    spec = fam.family_spec("Wsharp", 2)
    lat = fam.family_lattice(spec)
    block = orlik.make_orlik_block(lat, unit(spec.mu, 3))
    assert block.rank == 4 and block.block_poly == cyclotomic_poly(12)


def test_block_errors():
    spec = fam.family_spec("Wsharp", 2)
    lat = fam.family_lattice(spec)
    with pytest.raises(orlik.BlockError):
        orlik.make_orlik_block(lat, [0] * spec.mu)
    with pytest.raises(orlik.BlockError):
        orlik.make_orlik_block(lat, [1])
    with pytest.raises(orlik.NonPrimitiveError):
        orlik.make_orlik_block(lat, [2 * x for x in unit(spec.mu, 3)])


def test_block_polynomial_and_companion():
    spec = fam.family_spec("E3", 2)
    lat = fam.family_lattice(spec)
    block = orlik.make_orlik_block(lat, spec.betas[0])
    restricted = orlik.block_monodromy(lat, block)
    assert restricted == orlik.companion_matrix(block.block_poly)
    v = lat.apply(block.generator, 3)
    assert block.polynomial_of(v) == IntPolynomial.monomial(3)


@pytest.mark.parametrize(
    "name, p, r_I, blocks",
    [("Wsharp", 2, 1, 2), ("E3", 1, 2, 2), ("Z", 2, 2, 3)],
)
def test_verify_decomposition_examples(name, p, r_I, blocks):
    spec = fam.family_spec(name, p)
    lat = fam.family_lattice(spec)
    results = orlik.verify_decomposition(lat, spec.betas, fam.expected_invariants(spec))
    assert all(r.passed for r in results), [r.as_dict() for r in results if not r.passed]
    assert spec.r_I == r_I and len(spec.betas) == blocks
    if name == "Z":
        assert orlik.make_orlik_block(lat, spec.betas[2]).block_poly == cyclotomic_poly(2)


def test_verify_decomposition_reports_wrong_expectations():
    spec = fam.family_spec("E3", 1)
    lat = fam.family_lattice(spec)
    expected = dict(fam.expected_invariants(spec), r_I=1)
    results = orlik.verify_decomposition(lat, spec.betas, expected)
    assert any(not r.passed for r in results)


def test_eigenlattice_splits_over_first_two_blocks():
    for name in ("Wsharp", "Ssharp", "E3", "Q2"):
        spec = fam.family_spec(name, fam.family_spec(name, 1).m)
        lat = fam.family_lattice(spec)
        blocks = [orlik.make_orlik_block(lat, b) for b in spec.betas[:2]]
        assert orlik.eigen_index(lat, blocks, cyclotomic_poly(spec.m)) == 1


# --- automorphism decomposition ---------------------------------------------------


def test_identity_and_monodromy_decompositions():
    spec = fam.family_spec("Wsharp", 12)
    lat = fam.family_lattice(spec)
    decomposition = orlik.decompose(lat, spec.betas)
    ident = orlik.decompose_automorphism(lat, mx.identity(spec.mu), decomposition)
    one, zero = IntPolynomial((1,)), IntPolynomial(())
    assert ident.entries == ((one, zero), (zero, one))
    mono = orlik.decompose_automorphism(lat, [list(r) for r in lat.M], decomposition)
    t = IntPolynomial.monomial(1)
    assert mono.entries == ((t, zero), (zero, t))


def test_decomposition_rejects_non_commuting_matrix():
    spec = fam.family_spec("Wsharp", 1)
    lat = fam.family_lattice(spec)
    decomposition = orlik.decompose(lat, spec.betas)
    g = mx.identity(spec.mu)
    g[0][1] = 1
    with pytest.raises(orlik.BlockError):
        orlik.decompose_automorphism(lat, g, decomposition)


# --- prime-power chains -----------------------------------------------------------


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


def _prime_power_base(ratio: int) -> int | None:
    for prime in range(2, ratio + 1):
        if _is_prime(prime):
            k = prime
            while k <= ratio:
                if k == ratio:
                    return prime
                k *= prime
    return None


def brute_force_chain(orders: set[int]) -> bool:
    """Try every ordering, every parent choice and every 2-range; no search pruning."""
    values = sorted(orders, reverse=True)
    n = len(values)
    if n == 1:
        return True
    for perm in itertools.permutations(values):
        if perm[0] != max(values):
            continue
        for i1 in range(1, n + 1):
            for i2 in range(i1, n + 1):
                ok = True
                for i in range(2, n + 1):
                    in_range = i1 + 1 <= i <= i2
                    if in_range:
                        ratio, rem = divmod(perm[i - 2], perm[i - 1])
                        if rem or _prime_power_base(ratio) != 2:
                            ok = False
                            break
                    else:
                        found = False
                        for parent in range(1, i):
                            ratio, rem = divmod(perm[parent - 1], perm[i - 1])
                            base = _prime_power_base(ratio) if not rem else None
                            if base is not None and base != 2:
                                found = True
                                break
                        if not found:
                            ok = False
                            break
                if ok:
                    return True
    return False


def test_lemma28_examples():
    assert orlik.lemma28_applicable({12})[0]
    ok, witness = orlik.lemma28_applicable({10, 5, 2})
    assert ok and orlik.check_witness(witness, {10, 5, 2})
    assert not orlik.lemma28_applicable({4, 9})[0]


def test_lemma28_matches_brute_force():
    rng = random.Random(28)
    pool = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 15, 16, 18, 20, 24, 30, 36]
    for _ in range(150):
        orders = set(rng.sample(pool, rng.randint(1, 4)))
        ok, witness = orlik.lemma28_applicable(orders)
        assert ok == brute_force_chain(orders), orders
        if ok:
            assert orlik.check_witness(witness, orders)


def test_lemma28_on_every_catalog_block():
    for spec in fam.all_series_specs(range(1, 25)) + fam.all_quadrangle_specs():
        for indices in spec.b:
            ok, witness = orlik.lemma28_applicable(indices)
            assert ok, (spec.name, indices)
            assert orlik.check_witness(witness, indices)


# --- parity of cyclotomic products at t = 1 ----------------------------------------


def test_phi_product_parity_examples():
    assert orlik.phi_product_parity([2]) == "even"
    assert orlik.phi_product_parity([10, 5]) == "odd"
    assert orlik.phi_product_parity([12]) == "odd"
    with pytest.raises(ValueError):
        orlik.phi_product_parity([0])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 60), min_size=1, max_size=5))
def test_phi_product_parity_matches_evaluation(indices):
    value = sum(cyclotomic_product(indices).coefficients)  # the product evaluated at t = 1
    assert orlik.phi_product_parity(indices) == ("even" if value % 2 == 0 else "odd")
