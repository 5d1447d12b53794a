"""Integer lattices with a unimodular Seifert form and the induced monodromy.

The convention throughout is that of surface singularities: the Seifert form
L and monodromy M satisfy L(M a, b) = -L(b, a), the intersection form is
I(a, b) = L((M - id) a, b) = -L(a, b) - L(b, a), and the reflection along a
vanishing cycle is s(b) = b + I(delta, b) delta.  Matrices act on column
vectors, so column j of M is the image of the j-th basis vector, and
L[i][j] = L(e_i, e_j).

A lattice also records the sign ``seifert_sign`` in M^T L = sign * L^T.  It
is -1 for surfaces; one suspension negates M and flips it to +1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from . import matrices as mx
from .cyclo import IntPolynomial, euler_phi, factor_into_cyclotomics

MAX_RANK = 256


class LatticeError(ValueError):
    """A constructed lattice violates one of the Seifert-form relations."""


def _freeze(a: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in a)


def char_poly(m: Sequence[Sequence[int]]) -> IntPolynomial:
    """det(t id - M) as an integer polynomial."""
    n = len(m)
    if n == 0:
        return IntPolynomial((1,))
    dm = DomainMatrix([[ZZ(int(x)) for x in row] for row in m], (n, n), ZZ)
    descending = dm.charpoly()
    return IntPolynomial(tuple(int(c) for c in reversed(descending)))


@dataclass(frozen=True)
class SeifertLattice:
    """Z^mu with Seifert form L, monodromy M and intersection form I."""

    L: tuple[tuple[int, ...], ...]
    M: tuple[tuple[int, ...], ...]
    I: tuple[tuple[int, ...], ...]
    seifert_sign: int = -1
    _charpoly: list = field(default_factory=list, compare=False, repr=False)

    @property
    def rank(self) -> int:
        return len(self.L)

    def seifert(self, a: Sequence[int], b: Sequence[int]) -> int:
        return mx.bilinear(self.L, a, b)

    def intersection(self, a: Sequence[int], b: Sequence[int]) -> int:
        return mx.bilinear(self.I, a, b)

    def apply(self, v: Sequence[int], power: int = 1) -> list[int]:
        """M^power v (power >= 0)."""
        out = list(v)
        for _ in range(power):
            out = mx.matvec(self.M, out)
        return out

    def apply_poly(self, poly: IntPolynomial, v: Sequence[int]) -> list[int]:
        return mx.poly_apply(poly.coefficients, self.M, v)

    def char_poly(self) -> IntPolynomial:
        if not self._charpoly:
            self._charpoly.append(char_poly(self.M))
        return self._charpoly[0]

    def invariant_failures(self) -> list[str]:
        """Names of the defining relations that fail (empty when valid)."""
        L, M, I = self.L, self.M, self.I
        n = self.rank
        failures = []
        if abs(mx.determinant(L)) != 1:
            failures.append("det L = +-1")
        mtl = mx.matmul(mx.transpose(M), L)
        if mtl != [[self.seifert_sign * L[j][i] for j in range(n)] for i in range(n)]:
            failures.append("M^T L = sign L^T")
        if mx.matmul(mtl, M) != [list(r) for r in L]:
            failures.append("M^T L M = L")
        expected_i = mx.matsub(mtl, L)
        if expected_i != [list(r) for r in I]:
            failures.append("I = (M - id)^T L")
        if self.seifert_sign == -1:
            if any(I[i][j] != I[j][i] for i in range(n) for j in range(n)):
                failures.append("I symmetric")
        if factor_into_cyclotomics(self.char_poly()) is None:
            failures.append("char poly is a product of cyclotomic polynomials")
        return failures

    def validate(self) -> SeifertLattice:
        failures = self.invariant_failures()
        if failures:
            raise LatticeError("lattice invariants fail: " + ", ".join(failures))
        return self


def _check_stokes(stokes: Sequence[Sequence[int]]) -> int:
    n = len(stokes)
    if n == 0 or n > MAX_RANK:
        raise ValueError(f"Stokes matrix rank must be in 1..{MAX_RANK}")
    for i, row in enumerate(stokes):
        if len(row) != n:
            raise ValueError("Stokes matrix must be square")
        if row[i] != 1 or any(row[j] != 0 for j in range(i)):
            raise ValueError("Stokes matrix must be upper triangular with unit diagonal")
    return n


def seifert_from_stokes(stokes: Sequence[Sequence[int]]) -> list[list[int]]:
    """L with L(e_i, e_i) = 1, L(e_j, e_i) = S_ij and L(e_i, e_j) = 0 for i < j."""
    _check_stokes(stokes)
    return mx.transpose(stokes)


def monodromy_from_seifert(L: Sequence[Sequence[int]], seifert_sign: int = -1) -> list[list[int]]:
    """Solve M^T L = sign L^T for M, i.e. M = sign (L^-1)^T L."""
    inv = mx.inverse_integral(L)
    return mx.scale(mx.matmul(mx.transpose(inv), L), seifert_sign)


def lattice_from_stokes(stokes: Sequence[Sequence[int]], seifert_sign: int = -1) -> SeifertLattice:
    L = seifert_from_stokes(stokes)
    M = monodromy_from_seifert(L, seifert_sign)
    I = mx.matsub(mx.matmul(mx.transpose(M), L), L)
    lat = SeifertLattice(_freeze(L), _freeze(M), _freeze(I), seifert_sign).validate()
    if seifert_sign == -1:
        if [list(r) for r in lat.M] != monodromy_from_reflections(stokes):
            raise LatticeError("reflection product disagrees with the Seifert-form monodromy")
        if any(I[i][i] != -2 for i in range(lat.rank)):
            raise LatticeError("I(e_i, e_i) != -2 for a distinguished basis")
    return lat


def monodromy_from_reflections(stokes: Sequence[Sequence[int]]) -> list[list[int]]:
    """s_{e_1} o ... o s_{e_mu} with s_d(b) = b + I(d, b) d and I(e_i, e_j) = -S_ij."""
    n = _check_stokes(stokes)
    inter = [[0] * n for _ in range(n)]
    for i in range(n):
        inter[i][i] = -2
        for j in range(i + 1, n):
            inter[i][j] = inter[j][i] = -stokes[i][j]
    result = mx.identity(n)
    for k in range(n):
        # right-multiplying by the reflection matrix of e_k: R = id + e_k (row k of I)
        # (result R)[i][j] = result[i][j] + result[i][k] * inter[k][j]
        for row in result:
            factor = row[k]
            if factor:
                for j in range(n):
                    row[j] += factor * inter[k][j]
    return result


@dataclass(frozen=True)
class Sublattice:
    parent_rank: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)


def make_sublattice(parent_rank: int, vectors: Sequence[Sequence[int]]) -> Sublattice:
    if vectors and mx.rank(vectors) != len(vectors):
        raise ValueError("sublattice generators must be linearly independent")
    return Sublattice(parent_rank, _freeze(vectors))


def saturation_index(sub: Sublattice) -> int:
    """[saturation : sub], the product of the elementary divisors of the basis."""
    if not sub.basis:
        return 1
    divs = mx.elementary_divisors(sub.basis)
    if len(divs) != sub.rank:
        raise ValueError("basis is not independent")
    out = 1
    for d in divs:
        out *= d
    return out


def eigen_sublattice(lat: SeifertLattice, poly: IntPolynomial) -> Sublattice:
    """The primitive sublattice ker p(M), for p a product of cyclotomic polynomials."""
    cp = lat.char_poly()
    if not poly.divides(cp):
        raise ValueError(f"{poly} does not divide the characteristic polynomial")
    kernel = mx.integer_kernel(mx.poly_of_matrix(poly.coefficients, [list(r) for r in lat.M]))
    sub = Sublattice(lat.rank, _freeze(kernel))
    factors = factor_into_cyclotomics(poly) or ()
    cp_factors = factor_into_cyclotomics(cp) or ()
    expected = sum(euler_phi(n) * cp_factors.count(n) for n in set(factors))
    if sub.rank != expected:
        raise LatticeError(f"eigen-sublattice has rank {sub.rank}, expected {expected}")
    return sub


def is_form_automorphism(lat: SeifertLattice, g: Sequence[Sequence[int]]) -> bool:
    n = lat.rank
    if len(g) != n or any(len(row) != n for row in g):
        return False
    if abs(mx.determinant(g)) != 1:
        return False
    return mx.matmul(mx.matmul(mx.transpose(g), lat.L), g) == [list(r) for r in lat.L]


def thom_sebastiani_stokes(sf: Sequence[Sequence[int]], sg: Sequence[Sequence[int]]) -> list[list[int]]:
    """Kronecker product S_f (x) S_g with lexicographically ordered basis."""
    _check_stokes(sf)
    _check_stokes(sg)
    ng = len(sg)
    n = len(sf) * ng
    if n > MAX_RANK:
        raise ValueError("tensor product exceeds the rank cap")
    out = [[0] * n for _ in range(n)]
    for i1, row_f in enumerate(sf):
        for j1, a in enumerate(row_f):
            if a:
                for i2, row_g in enumerate(sg):
                    for j2, b in enumerate(row_g):
                        out[i1 * ng + i2][j1 * ng + j2] = a * b
    return out


def suspend(lat: SeifertLattice) -> SeifertLattice:
    """Add a square: L stays, M changes sign, I is recomputed."""
    M = mx.scale(lat.M, -1)
    I = mx.matsub(mx.matmul(mx.transpose(M), lat.L), lat.L)
    return SeifertLattice(lat.L, _freeze(M), _freeze(I), -lat.seifert_sign).validate()


def matrix_to_json(a: Sequence[Sequence[int]]) -> str:
    return json.dumps({"rank": len(a), "rows": [list(map(int, r)) for r in a]})


def matrix_from_json(text: str) -> list[list[int]]:
    data = json.loads(text)
    n = int(data["rank"])
    rows = data["rows"]
    if n > MAX_RANK:
        raise ValueError(f"rank {n} exceeds the cap {MAX_RANK}")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError("matrix JSON rows do not match the declared rank")
    return [[int(x) for x in r] for r in rows]
