"""Monodromy eigenvectors over Z[zeta] and the hermitian forms on eigenspaces.

For an eigenvalue xi of M the form h_xi(a, b) = sqrt(-xi) * L(a, conj(b)) is
hermitian.  On a block with generator beta and polynomial b, the vector
v = (b / (t - xi))(M)(beta) spans the xi-eigenline.  The quotient

    w(xi) = -h_xi(v_2, v_2) / h_xi(v_1, v_1)

of the two block eigenvectors is the parameter of the Fuchsian group
attached to a series with m | p.  :func:`w_of_xi` computes it from the
lattice; :func:`closed_form_w` and :func:`closed_form_h11` give the same
quantities as explicit expressions in xi, and the tests compare the two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Sequence

from .cyclo import (
    DEFAULT_DIGITS,
    BranchError,
    CycloElement,
    IntPolynomial,
    cyclo_const,
    evaluate,
    galois_apply,
    poly_at,
    sign_of_value,
    sqrt_minus_xi,
    sqrt_minus_xi_times,
    zeta,
)
from . import matrices as mx
from .families import FamilySpec, family_lattice
from .lattice import SeifertLattice
from .orlik import OrlikBlock, make_orlik_block


class NotAnEigenvalueError(ValueError):
    """xi is not a root of the block polynomial."""


class DegenerateFormError(ZeroDivisionError):
    """h_xi(v_1, v_1) vanishes, so w(xi) is undefined."""


# ---------------------------------------------------------------------------
# Eigenvectors


def _zero(m: int) -> CycloElement:
    return cyclo_const(m, 0)


def divide_by_linear(poly: IntPolynomial, xi: CycloElement) -> list[CycloElement]:
    """Ascending coefficients of poly / (t - xi); raises unless xi is a root."""
    m = xi.modulus
    coeffs = [cyclo_const(m, c) for c in poly.coefficients]
    n = len(coeffs) - 1
    if n < 1:
        raise NotAnEigenvalueError("constant polynomial has no roots")
    quotient = [_zero(m)] * n
    carry = _zero(m)
    for k in range(n, 0, -1):
        carry = coeffs[k] + carry * xi
        quotient[k - 1] = carry
    remainder = coeffs[0] + carry * xi
    if not remainder.is_zero():
        raise NotAnEigenvalueError(f"zeta^k is not a root of {poly}")
    return quotient


@dataclass(frozen=True)
class EigenVector:
    coords: tuple[CycloElement, ...]
    xi_exponent: int
    modulus: int

    @property
    def xi(self) -> CycloElement:
        return zeta(self.modulus, self.xi_exponent)

    def conj(self) -> EigenVector:
        return EigenVector(
            tuple(c.conj() for c in self.coords), (-self.xi_exponent) % self.modulus, self.modulus
        )

    def galois(self, k: int) -> EigenVector:
        return EigenVector(
            tuple(galois_apply(c, k) for c in self.coords), (self.xi_exponent * k) % self.modulus, self.modulus
        )

    def is_eigenvector(self, lat: SeifertLattice) -> bool:
        image = _matvec_cyclo(lat.M, self.coords, self.modulus)
        xi = self.xi
        return all(a == xi * b for a, b in zip(image, self.coords))


def _lin_comb(rows: Sequence[Sequence[int]], weights: Sequence[CycloElement], m: int) -> list[CycloElement]:
    """sum_k weights[k] * rows[k] for integer rows, coordinatewise."""
    phi = len(cyclo_const(m, 0).coords)
    n = len(rows[0])
    acc = [[Fraction(0)] * phi for _ in range(n)]
    for row, weight in zip(rows, weights):
        if weight.is_zero():
            continue
        for i, entry in enumerate(row):
            if entry:
                target = acc[i]
                for j, c in enumerate(weight.coords):
                    if c:
                        target[j] += entry * c
    return [CycloElement(m, tuple(vals)) for vals in acc]


def _matvec_cyclo(matrix: Sequence[Sequence[int]], v: Sequence[CycloElement], m: int) -> list[CycloElement]:
    phi = len(cyclo_const(m, 0).coords)
    out = []
    for row in matrix:
        vals = [Fraction(0)] * phi
        for entry, elem in zip(row, v):
            if entry:
                for j, c in enumerate(elem.coords):
                    if c:
                        vals[j] += entry * c
        out.append(CycloElement(m, tuple(vals)))
    return out


def eigenvector_of_block(block: OrlikBlock, xi_exponent: int, modulus: int) -> EigenVector:
    """v = (block_poly / (t - xi))(M)(beta) with xi = zeta_modulus^xi_exponent."""
    xi = zeta(modulus, xi_exponent)
    cofactor = divide_by_linear(block.block_poly, xi)
    coords = _lin_comb(block.basis, cofactor, modulus)
    return EigenVector(tuple(coords), xi_exponent % modulus, modulus)


def seifert_value(lat: SeifertLattice, v: Sequence[CycloElement], w: Sequence[CycloElement]) -> CycloElement:
    """L(v, w) extended bilinearly over Q(zeta)."""
    m = v[0].modulus
    lw = _matvec_cyclo(lat.L, w, m)
    total = _zero(m)
    for a, b in zip(v, lw):
        if not a.is_zero() and not b.is_zero():
            total = total + a * b
    return total


def seifert_with_lattice_vector(lat: SeifertLattice, v: Sequence[CycloElement], beta: Sequence[int]) -> CycloElement:
    """L(v, beta) for an integral vector beta."""
    total = _zero(v[0].modulus)
    for a, c in zip(v, mx.matvec(lat.L, beta)):
        if c:
            total = total + a * c
    return total


# ---------------------------------------------------------------------------
# Hermitian values


@dataclass(frozen=True)
class HermValue:
    """The real number sqrt(-xi) * u, with u kept exactly."""

    u: CycloElement
    xi_exponent: int

    def value(self, digits: int = DEFAULT_DIGITS):
        return sqrt_minus_xi_times(self.u, self.xi_exponent, digits)


def _check_branch(m: int, xi_exponent: int) -> None:
    k = xi_exponent % m
    if k == 0:
        raise BranchError("sqrt(-xi) is undefined for xi = 1")
    if 2 * k == m:
        raise BranchError("xi = -1 is excluded from hermitian computations")


def herm_pair(lat: SeifertLattice, v: EigenVector, w: EigenVector) -> HermValue:
    """h_xi(v, w) = sqrt(-xi) * L(v, conj(w))."""
    if v.xi_exponent != w.xi_exponent or v.modulus != w.modulus:
        raise ValueError("eigenvectors must share the eigenvalue")
    _check_branch(v.modulus, v.xi_exponent)
    u = seifert_value(lat, v.coords, w.conj().coords)
    return HermValue(u, v.xi_exponent)


def herm_value_of(lat: SeifertLattice, a: Sequence[CycloElement], b: Sequence[CycloElement], m: int, xi_exponent: int):
    """Numeric sqrt(-xi) * L(a, conj b) for arbitrary vectors of the xi-eigenspace."""
    _check_branch(m, xi_exponent)
    u = seifert_value(lat, a, [x.conj() for x in b])
    return sqrt_minus_xi(m, xi_exponent) * evaluate(u)


def herm_sign(h: HermValue, digits: int = DEFAULT_DIGITS) -> int:
    if h.u.is_zero():
        return 0
    return sign_of_value(h.value(digits))


# ---------------------------------------------------------------------------
# The parameter w(xi)


@dataclass(frozen=True)
class EigenData:
    """Block eigenvectors and the exact pieces of h on them for one xi."""

    spec: FamilySpec
    xi_exponent: int
    v1: EigenVector
    v2: EigenVector
    h11: HermValue
    h22: HermValue
    h12: HermValue
    L_v1_beta1: CycloElement
    L_v2_beta2: CycloElement


def _check_subseries(spec: FamilySpec) -> int:
    if not spec.quadrangle and spec.p % spec.m:
        raise ValueError(f"w(xi) needs m | p; got m = {spec.m}, p = {spec.p}")
    return spec.p // spec.m


def eigen_data(spec: FamilySpec, xi_exponent: int) -> EigenData:
    m = spec.m
    if gcd(xi_exponent, m) != 1:
        raise ValueError(f"xi = zeta^{xi_exponent} is not a primitive {m}-th root of unity")
    _check_subseries(spec)
    lat = family_lattice(spec)
    blocks = [make_orlik_block(lat, beta) for beta in spec.betas[:2]]
    v1 = eigenvector_of_block(blocks[0], xi_exponent, m)
    v2 = eigenvector_of_block(blocks[1], xi_exponent, m)
    return EigenData(
        spec=spec,
        xi_exponent=xi_exponent % m,
        v1=v1,
        v2=v2,
        h11=herm_pair(lat, v1, v1),
        h22=herm_pair(lat, v2, v2),
        h12=herm_pair(lat, v1, v2),
        L_v1_beta1=seifert_with_lattice_vector(lat, v1.coords, spec.betas[0]),
        L_v2_beta2=seifert_with_lattice_vector(lat, v2.coords, spec.betas[1]),
    )


def w_of_xi(spec: FamilySpec, xi_exponent: int) -> CycloElement:
    """-h_xi(v_2, v_2) / h_xi(v_1, v_1), exact in Q(zeta_m) (the square roots cancel)."""
    data = eigen_data(spec, xi_exponent)
    if data.h11.u.is_zero():
        raise DegenerateFormError(f"h(v1, v1) vanishes for {spec.name} at zeta^{xi_exponent}")
    return -data.h22.u / data.h11.u


# ---------------------------------------------------------------------------
# Closed forms as functions of xi


def _re2(xi: CycloElement, k: int) -> CycloElement:
    """xi^k + conj(xi)^k."""
    return xi**k + xi.conj() ** k


def _one(xi: CycloElement) -> CycloElement:
    return cyclo_const(xi.modulus, 1)


# h_xi(v_1, v_1) = F(xi) * N(xi) * sqrt(-xi); the map returns (F, kind of N)
# where N = 1 - conj(xi) ("bar") or N = (1 - xi)^(-1) ("inv").
_H11: dict[str, tuple[Callable[[CycloElement], CycloElement], str]] = {
    "Wsharp": (lambda x: -2 * _re2(x, 1), "bar"),
    "Ssharp": (lambda x: 5 * _re2(x, 2) * (_re2(x, 2) - 1), "inv"),
    "U": (lambda x: 3 * (_re2(x, 4) + 1), "bar"),
    "E3": (lambda x: -3 * (1 + x) * (1 + x.conj()) * (_re2(x, 1) - 1), "inv"),
    "Z": (lambda x: -7 * _re2(x, 2), "bar"),
    "Q2": (lambda x: -6 * (_re2(x, 1) + 1), "inv"),
    "W": (lambda x: -4 * _re2(x, 1), "bar"),
    "S": (lambda x: -10 * _re2(x, 2), "bar"),
}

_L_V1_BETA1: dict[str, Callable[[CycloElement], CycloElement]] = {
    "Wsharp": lambda x: x**3 * (1 - x),
    "Ssharp": lambda x: -x * (_re2(x, 2) - 1),
    "U": lambda x: -(x**6) * _re2(x, 2),
    "E3": lambda x: x**2 * _re2(x, 1) * _re2(x, 2),
    "Z": lambda x: x**2 * (_re2(x, 4) + 1),
    "Q2": lambda x: x**2 * (x + 1),
    "W": lambda x: x**3 * (x - 1) * (x.conj() - 1),
    "S": lambda x: -1 + x + x**2 - 2 * x**3 + x**4,
}

_W_TABLE: dict[str, Callable[[CycloElement, int], CycloElement]] = {
    "Wsharp": lambda x, r: (1 + r) * 6 / ((1 - x) * (1 - x.conj()) * _re2(x, 1)),
    "Ssharp": lambda x, r: (1 + r) * -2 / (_re2(x, 2) * (_re2(x, 2) - 1)),
    "U": lambda x, r: (1 + r) * -3 / ((1 - x) * (1 - x.conj()) * (_re2(x, 4) + 1)),
    "E3": lambda x, r: (1 + 2 * r) * 3 * (1 - x) * (1 - x.conj()) / ((1 + x) * (1 + x.conj()) * (_re2(x, 1) - 1)),
    "Z": lambda x, r: (1 + 2 * r) / _re2(x, 2),
    "Q2": lambda x, r: (1 + 2 * r) * (1 - x) * (1 - x.conj()) / (_re2(x, 1) + 1),
    "W": lambda x, r: (1 + 2 * r) * Fraction(3, 2) / _re2(x, 1),
    "S": lambda x, r: (1 + 2 * r) * Fraction(1, 2) / _re2(x, 2),
}


def positive_normalizer(xi: CycloElement, kind: str) -> CycloElement:
    """1 - conj(xi) or (1 - xi)^(-1); both times sqrt(-xi) are positive reals."""
    if kind == "bar":
        return 1 - xi.conj()
    if kind == "inv":
        return 1 / (1 - xi)
    raise ValueError(kind)


def closed_form_h11(series: str, xi_exponent: int, m: int) -> CycloElement:
    """The exact part u of h_xi(v_1, v_1) = sqrt(-xi) * u from the closed form."""
    xi = zeta(m, xi_exponent)
    factor, kind = _H11[series]
    return factor(xi) * positive_normalizer(xi, kind)


def closed_form_h22(r_I: int, m: int, r: int, xi_exponent: int) -> CycloElement:
    """The exact part of h_xi(v_2, v_2): m(1+r)(1-xi)^(-1) or (m/2)(1+2r)(1-conj xi)."""
    xi = zeta(m, xi_exponent)
    if r_I == 1:
        return m * (1 + r) / (1 - xi)
    return Fraction(m, 2) * (1 + 2 * r) * (1 - xi.conj())


def closed_form_L_v2_beta2(r_I: int, m: int, xi_exponent: int) -> CycloElement:
    xi = zeta(m, xi_exponent)
    if r_I == 1:
        return xi.conj() ** 2
    return -xi.conj() * (1 - xi.conj())


def closed_form_L_v1_beta1(series: str, xi_exponent: int, m: int) -> CycloElement:
    return _L_V1_BETA1[series](zeta(m, xi_exponent))


def closed_form_w(series: str, xi_exponent: int, m: int, r: int) -> CycloElement:
    return _W_TABLE[series](zeta(m, xi_exponent), r)


def cofactor_at_conjugate(block_poly: IntPolynomial, xi_exponent: int, m: int) -> CycloElement:
    """(b / (t - conj xi))(conj xi), the derivative of b at conj(xi)."""
    xi_bar = zeta(m, -xi_exponent)
    return poly_at(IntPolynomial(tuple(k * c for k, c in enumerate(block_poly.coefficients))[1:]), xi_bar)
