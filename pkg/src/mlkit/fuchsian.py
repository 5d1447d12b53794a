"""Arithmetic Fuchsian groups over Z[zeta], Pell equations and lattice automorphisms.

For a real parameter w in Q(zeta_m) that is positive at zeta and negative at
every other real embedding, the group

    Gamma(w) = {A in GL(2, Z[zeta]) : A^T diag(-1, w) conj(A) = diag(-1, w)}

acts on the circle |z|^2 = w.  Every member has the shape
[[a, w conj(c) delta], [c, conj(a) delta]] with delta = det A a root of unity.

This module provides membership tests and the (a, c, delta) coordinates,
a bounded Pell solver over Z[p_1], the five triangle-group cases with
their elliptic data and the word reduction into A_1, A_2, and the map
from Pell solutions to integral automorphisms of a Milnor lattice.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from . import matrices as mx
from .cyclo import (
    DEFAULT_DIGITS,
    CycloElement,
    IntPolynomial,
    cyclo_const,
    cyclotomic_product,
    evaluate,
    field_norm,
    from_p1_coordinates,
    lift,
    poly_at,
    real_embedding_exponents,
    real_p,
    to_p1_coordinates,
    zeta,
)
from .families import FamilySpec, b5_indices, b6_indices, family_lattice
from .lattice import SeifertLattice, is_form_automorphism

MAX_REDUCTION_STEPS = 200


class NotInGammaError(ValueError):
    """The matrix does not preserve diag(-1, w)."""


class PreconditionError(ValueError):
    """The parameter w violates the sign conditions at the real embeddings."""


class DivisibilityError(ValueError):
    """A required divisibility in Z[zeta] fails."""


class NonEllipticError(ValueError):
    """The eigenvalue ratio does not lie on the unit circle."""


class InvariantViolationError(RuntimeError):
    """A step of the word reduction failed to shrink |c|."""


class AutomorphismError(ValueError):
    """The constructed map is not an integral automorphism of the lattice."""


# ---------------------------------------------------------------------------
# The group Gamma(w)


Matrix2 = tuple[tuple[CycloElement, CycloElement], tuple[CycloElement, CycloElement]]


@dataclass(frozen=True)
class FuchsianElement:
    """A 2x2 matrix over Q(zeta_m) together with the parameter w of its group."""

    a: CycloElement
    b: CycloElement
    c: CycloElement
    d: CycloElement
    w: CycloElement

    @property
    def modulus(self) -> int:
        return self.w.modulus

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[CycloElement | int]], w: CycloElement) -> FuchsianElement:
        m = w.modulus
        (a, b), (c, d) = [[_as_element(x, m) for x in row] for row in rows]
        return cls(a, b, c, d, w)

    @classmethod
    def identity(cls, w: CycloElement) -> FuchsianElement:
        one, zero = cyclo_const(w.modulus, 1), cyclo_const(w.modulus, 0)
        return cls(one, zero, zero, one, w)

    def rows(self) -> Matrix2:
        return ((self.a, self.b), (self.c, self.d))

    def det(self) -> CycloElement:
        return self.a * self.d - self.b * self.c

    def trace(self) -> CycloElement:
        return self.a + self.d

    def __mul__(self, other: FuchsianElement) -> FuchsianElement:
        return FuchsianElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.w,
        )

    def scaled(self, factor: CycloElement | int) -> FuchsianElement:
        return FuchsianElement(self.a * factor, self.b * factor, self.c * factor, self.d * factor, self.w)

    def inverse(self) -> FuchsianElement:
        delta = self.det()
        return FuchsianElement(self.d / delta, -self.b / delta, -self.c / delta, self.a / delta, self.w)

    def __pow__(self, exponent: int) -> FuchsianElement:
        base = self if exponent >= 0 else self.inverse()
        out = FuchsianElement.identity(self.w)
        for _ in range(abs(exponent)):
            out = out * base
        return out

    def is_integral(self) -> bool:
        return all(x.is_integral for x in (self.a, self.b, self.c, self.d))


def _as_element(x: CycloElement | int | Fraction, m: int) -> CycloElement:
    return x if isinstance(x, CycloElement) else cyclo_const(m, x)


def gamma_membership(element: FuchsianElement) -> bool:
    """True iff A^T diag(-1, w) conj(A) = diag(-1, w) holds exactly."""
    if not element.is_integral():
        raise ValueError("gamma_membership expects integral entries")
    a, b, c, d, w = element.a, element.b, element.c, element.d, element.w
    top_left = -a * a.conj() + w * c * c.conj()
    off = -a * b.conj() + w * c * d.conj()
    bottom_right = -b * b.conj() + w * d * d.conj()
    return (top_left + 1).is_zero() and off.is_zero() and (bottom_right - w).is_zero()


def root_of_unity_exponent(x: CycloElement) -> tuple[int, int] | None:
    """(sign, k) with x = sign * zeta^k, or None."""
    m = x.modulus
    for k in range(m):
        z = zeta(m, k)
        if x == z:
            return 1, k
        if x == -z:
            return -1, k
    return None


@dataclass(frozen=True)
class Triple:
    a: CycloElement
    c: CycloElement
    delta: CycloElement


def to_triple(element: FuchsianElement) -> Triple:
    if not gamma_membership(element):
        raise NotInGammaError("matrix is not in Gamma(w)")
    delta = element.det()
    if root_of_unity_exponent(delta) is None:
        raise NotInGammaError(f"determinant {delta} is not a root of unity")
    return Triple(element.a, element.c, delta)


def from_triple(triple: Triple, w: CycloElement) -> FuchsianElement:
    a, c, delta = triple.a, triple.c, triple.delta
    return FuchsianElement(a, w * c.conj() * delta, c, a.conj() * delta, w)


def triple_roundtrip(element: FuchsianElement) -> tuple[Triple, FuchsianElement]:
    triple = to_triple(element)
    rebuilt = from_triple(triple, element.w)
    if rebuilt != element:
        raise NotInGammaError("rebuilt matrix differs from the input")
    return triple, rebuilt


def rescale_parameter(w: CycloElement, unit: CycloElement) -> CycloElement:
    """w * u * conj(u)."""
    return w * unit * unit.conj()


def rescale_triple(triple: Triple, unit: CycloElement) -> Triple:
    """The triple for the parameter w * u * conj(u): (a, c / u, delta)."""
    return Triple(triple.a, triple.c / unit, triple.delta)


# ---------------------------------------------------------------------------
# Pell equations a^2 - 1 = w c^2 over Z[p_1]


@dataclass(frozen=True)
class PellSolution:
    a: CycloElement
    c: CycloElement
    w: CycloElement

    def __post_init__(self) -> None:
        if self.a * self.a - 1 != self.w * self.c * self.c:
            raise ValueError("a^2 - 1 != w c^2")

    def coordinates(self) -> dict[str, list[str]]:
        return {
            "a": [str(x) for x in to_p1_coordinates(self.a)],
            "c": [str(x) for x in to_p1_coordinates(self.c)],
        }

    def is_trivial(self) -> bool:
        return self.c.is_zero()


def _real_values(x: CycloElement) -> list[float]:
    return [float(evaluate(x, k, 20).real) for k in real_embedding_exponents(x.modulus)]


def check_pell_parameter(w: CycloElement) -> list[float]:
    """Embeddings of w after checking w(zeta) > 0 and w < 0 elsewhere."""
    if not w.is_real():
        raise PreconditionError("w must be real")
    values = _real_values(w)
    if values[0] <= 0 or any(v >= 0 for v in values[1:]):
        raise PreconditionError(f"w has embeddings {values}; need + at zeta and - elsewhere")
    return values


@lru_cache(maxsize=None)
def _p1_vandermonde(m: int) -> tuple[tuple[float, ...], ...]:
    points = [2 * math.cos(2 * math.pi * k / m) for k in real_embedding_exponents(m)]
    size = len(points)
    return tuple(tuple(x**i for i in range(size)) for x in points)


def _solve_coordinates(m: int, values: Sequence[float]) -> list[float]:
    """p_1-coordinates of the element with the given real embeddings (floating point)."""
    return _gauss([list(r) for r in _p1_vandermonde(m)], list(values))


def _slab_points(m: int, bounds: Sequence[float], top: int, height: int) -> list[tuple[int, ...]]:
    """Coordinate vectors with last coordinate top and |sigma_j(c)| <= bounds[j-1] for j >= 1."""
    vander = _p1_vandermonde(m)
    size = len(vander)
    if size == 1:
        return [(top,)]
    free = size - 1
    # sigma_j(c) = sum_{i < free} x_i P_j^i + top P_j^free for j = 1, ..., free
    rows = [[vander[j][i] for i in range(free)] for j in range(1, size)]
    shift = [top * vander[j][free] for j in range(1, size)]
    inverse = _float_inverse(rows)
    center = [-sum(inverse[i][j] * shift[j] for j in range(free)) for i in range(free)]
    spread = [sum(abs(inverse[i][j]) * bounds[j] for j in range(free)) for i in range(free)]
    ranges = [
        range(max(-height, math.ceil(center[i] - spread[i] - 1e-9)), min(height, math.floor(center[i] + spread[i] + 1e-9)) + 1)
        for i in range(free)
    ]
    out = []
    for coords in itertools.product(*ranges):
        ok = all(
            abs(sum(coords[i] * rows[j][i] for i in range(free)) + shift[j]) <= bounds[j] + 1e-9 for j in range(free)
        )
        if ok:
            out.append(tuple(coords) + (top,))
    return out


def _float_inverse(rows: Sequence[Sequence[float]]) -> list[list[float]]:
    size = len(rows)
    columns = [_gauss([list(r) for r in rows], [1.0 if i == j else 0.0 for i in range(size)]) for j in range(size)]
    return [[columns[j][i] for j in range(size)] for i in range(size)]


def _gauss(rows: list[list[float]], rhs: list[float]) -> list[float]:
    size = len(rows)
    aug = [rows[i] + [rhs[i]] for i in range(size)]
    for col in range(size):
        pivot = max(range(col, size), key=lambda r: abs(aug[r][col]))
        aug[col], aug[pivot] = aug[pivot], aug[col]
        for r in range(size):
            if r != col:
                factor = aug[r][col] / aug[col][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][size] / aug[i][i] for i in range(size)]


def pell_solve(w: CycloElement, height: int) -> list[PellSolution]:
    """All (a, c) in Z[p_1]^2 with a^2 - 1 = w c^2 and p_1-coordinates bounded by height.

    Away from zeta the embeddings satisfy |c|^2 <= 1/(-w), so for each value
    of the top coordinate of c the remaining coordinates lie in a small
    parallelepiped.  For each c the embeddings of a are square roots of
    1 + w c^2; every sign pattern is rounded to coordinates and checked exactly.
    """
    if height < 0:
        raise ValueError("height must be nonnegative")
    m = w.modulus
    w_values = check_pell_parameter(w)
    vander = _p1_vandermonde(m)
    size = len(vander)
    bounds = [1.0 / math.sqrt(-v) for v in w_values[1:]]
    found: dict[tuple, PellSolution] = {}
    for top in range(-height, height + 1):
        for coords in _slab_points(m, bounds, top, height):
            c_values = [sum(coords[i] * vander[j][i] for i in range(size)) for j in range(size)]
            targets = [1 + wv * cv * cv for wv, cv in zip(w_values, c_values)]
            if any(t < -1e-9 for t in targets):
                continue
            roots = [math.sqrt(max(t, 0.0)) for t in targets]
            c = None
            for signs in itertools.product((1, -1), repeat=size - 1):
                values = [roots[0]] + [sgn * r for sgn, r in zip(signs, roots[1:])]
                a_coords = [round(x) for x in _gauss([list(r) for r in vander], values)]
                if any(abs(x) > height for x in a_coords):
                    continue
                if c is None:
                    c = from_p1_coordinates(m, coords)
                a = from_p1_coordinates(m, a_coords)
                if a * a - 1 != w * c * c:
                    continue
                for sol_a in (a, -a):
                    key = (sol_a.coords, c.coords)
                    if key not in found:
                        found[key] = PellSolution(sol_a, c, w)
    return [found[k] for k in sorted(found)]


def pell_divisibility_lift(solution: PellSolution) -> PellSolution:
    """(a, c) -> (a^2 + w c^2, 2 a c); the new a satisfies w | a - 1."""
    if solution.c.is_zero():
        raise ValueError("the lift needs c != 0")
    a, c, w = solution.a, solution.c, solution.w
    lifted = PellSolution(a * a + w * c * c, 2 * a * c, w)
    if not ((lifted.a - 1) / w).is_integral:
        raise DivisibilityError("w does not divide a - 1 after the lift")
    return lifted


def pell_power(solution: PellSolution, exponent: int) -> PellSolution:
    """(a + c sqrt(w))^k = a_k + c_k sqrt(w), again a solution."""
    if exponent < 0:
        return pell_power(PellSolution(solution.a, -solution.c, solution.w), -exponent)
    w = solution.w
    a, c = cyclo_const(w.modulus, 1), cyclo_const(w.modulus, 0)
    for _ in range(exponent):
        a, c = a * solution.a + w * c * solution.c, a * solution.c + c * solution.a
    return PellSolution(a, c, w)


def square_divisors(w: CycloElement, bound: int = 3) -> list[CycloElement]:
    """Non-unit u in Z[p_1] with small coordinates such that w / u^2 is integral, largest norm first."""
    m = w.modulus
    size = len(real_embedding_exponents(m))
    found: dict[tuple, tuple[Fraction, CycloElement]] = {}
    for coords in itertools.product(range(-bound, bound + 1), repeat=size):
        u = from_p1_coordinates(m, coords)
        if u.is_zero():
            continue
        norm = abs(field_norm(u))
        if norm > 1 and (w / (u * u)).is_integral:
            key = to_p1_coordinates(w / (u * u))
            if key not in found or norm > found[key][0]:
                found[key] = (norm, u)
    ordered = sorted(found.values(), key=lambda item: (-item[0], to_p1_coordinates(item[1])))
    return [u for _, u in ordered]


def pell_solve_descent(w: CycloElement, height: int, max_power: int = 64) -> list[PellSolution]:
    """Nontrivial solutions for w found through w = s u^2.

    A solution (a, c) for s whose power has u | c_k gives (a_k, c_k / u) for w.
    This covers parameters whose own fundamental solution is far outside the box.
    """
    check_pell_parameter(w)
    out: dict[tuple, PellSolution] = {}
    for u in square_divisors(w):
        reduced = w / (u * u)
        for seed in pell_solve(reduced, height):
            if seed.is_trivial():
                continue
            current = seed
            for _ in range(max_power):
                quotient = current.c / u
                if quotient.is_integral:
                    sol = PellSolution(current.a, quotient, w)
                    out.setdefault((sol.a.coords, sol.c.coords), sol)
                    break
                current = PellSolution(
                    current.a * seed.a + reduced * current.c * seed.c, current.a * seed.c + current.c * seed.a, reduced
                )
        if out:
            break
    return [out[k] for k in sorted(out)]


def divisible_solutions(w: CycloElement, height: int, count: int) -> tuple[list[PellSolution], str]:
    """Up to count distinct solutions with w | a - 1 and c != 0, and the search method used.

    Seeds come from the box search, or from the descent through w = s u^2
    when the box holds no nontrivial solution; each seed is lifted, and
    lifts are lifted again until enough distinct pairs are collected.
    """
    seeds = [sol for sol in pell_solve(w, height) if not sol.is_trivial()]
    method = "box"
    if not seeds:
        seeds = pell_solve_descent(w, height)
        method = "descent"
    out: dict[tuple, PellSolution] = {}
    layer = seeds
    while layer and len(out) < count:
        lifted = [pell_divisibility_lift(sol) for sol in layer]
        for sol in lifted:
            out.setdefault((sol.a.coords, sol.c.coords), sol)
        layer = lifted
    ordered = sorted(out.values(), key=lambda sol: (_height_of(sol), sol.a.coords, sol.c.coords))
    return ordered[:count], method


def _height_of(solution: PellSolution) -> int:
    return max(abs(x) for x in to_p1_coordinates(solution.a) + to_p1_coordinates(solution.c))


# ---------------------------------------------------------------------------
# Lattice automorphisms from Pell solutions


def _poly_from_element(x: CycloElement, name: str) -> IntPolynomial:
    if not x.is_integral:
        raise DivisibilityError(f"{name} = {x} is not in Z[zeta]")
    return IntPolynomial(tuple(int(c) for c in x.coords))


@dataclass(frozen=True)
class PellData:
    """The parameters w, b_5(zeta) and w_0 = w b_5(zeta) b_5(conj zeta) of a subseries."""

    spec: FamilySpec
    w: CycloElement
    b5: IntPolynomial
    b6: IntPolynomial
    w0: CycloElement


def pell_data(spec: FamilySpec) -> PellData:
    from .herm import w_of_xi

    if spec.quadrangle or spec.p % spec.m:
        raise ValueError(f"{spec.name}: the G_Z construction needs a series member with m | p")
    m = spec.m
    w = w_of_xi(spec, 1)
    b5 = cyclotomic_product(b5_indices(spec))
    b6 = cyclotomic_product(b6_indices(spec))
    w0 = w * poly_at(b5, zeta(m)) * poly_at(b5, zeta(m, -1))
    return PellData(spec, w, b5, b6, w0)


@dataclass(frozen=True)
class GZElement:
    matrix: tuple[tuple[int, ...], ...]
    q: tuple[tuple[IntPolynomial, IntPolynomial], tuple[IntPolynomial, IntPolynomial]]
    p: tuple[tuple[IntPolynomial, IntPolynomial], tuple[IntPolynomial, IntPolynomial]]


def gz_from_pell(spec: FamilySpec, solution: PellSolution) -> GZElement:
    """The integral automorphism g attached to a Pell solution (a, f) for w_0.

    q_11 = (a-1)/b_5, q_12 = f w b_5(conj zeta)/b_6, q_21 = f, q_22 = (a-1)/b_6,
    p_11 = 1 + b_5 q_11, p_12 = b_5 q_12, p_21 = b_6 q_21, p_22 = 1 + b_6 q_22,
    and g(beta_j) = p_1j(M)(beta_1) + p_2j(M)(beta_2), extended to commute with M.
    Any further generator (beta_3 of Z) is fixed.
    """
    data = pell_data(spec)
    m = spec.m
    if solution.w != data.w0:
        raise ValueError("the Pell solution must be for w_0 = w b_5 conj(b_5)")
    a, f = solution.a, solution.c
    if not ((a - 1) / data.w0).is_integral:
        raise DivisibilityError("w_0 does not divide a - 1")
    b5_at = poly_at(data.b5, zeta(m))
    b6_at = poly_at(data.b6, zeta(m))
    b5_bar = poly_at(data.b5, zeta(m, -1))
    q11 = _poly_from_element((a - 1) / b5_at, "q_11")
    q12 = _poly_from_element(f * data.w * b5_bar / b6_at, "q_12")
    q21 = _poly_from_element(f, "q_21")
    q22 = _poly_from_element((a - 1) / b6_at, "q_22")
    one = IntPolynomial((1,))
    p11, p12 = one + data.b5 * q11, data.b5 * q12
    p21, p22 = data.b6 * q21, one + data.b6 * q22
    lat = family_lattice(spec)
    matrix = _assemble(lat, spec, ((p11, p12), (p21, p22)))
    g = tuple(tuple(row) for row in matrix)
    if not is_form_automorphism(lat, matrix):
        raise AutomorphismError(f"{spec.name}: g does not preserve L")
    return GZElement(g, ((q11, q12), (q21, q22)), ((p11, p12), (p21, p22)))


def _assemble(lat: SeifertLattice, spec: FamilySpec, p: Sequence[Sequence[IntPolynomial]]) -> list[list[int]]:
    betas = [list(beta) for beta in spec.betas]
    degrees = [cyclotomic_product(ind).degree for ind in spec.b]
    basis: list[list[int]] = []
    images: list[list[int]] = []
    for j, beta in enumerate(betas):
        for k in range(degrees[j]):
            basis.append(lat.apply(beta, k))
            if j < 2:
                image = [0] * lat.rank
                for i in range(2):
                    term = lat.apply_poly(p[i][j] * IntPolynomial.monomial(k), betas[i])
                    image = [x + y for x, y in zip(image, term)]
                images.append(image)
            else:
                images.append(lat.apply(beta, k))
    if len(basis) != lat.rank:
        raise AutomorphismError("the block bases do not span a full-rank sublattice")
    # g S = T for S, T with the basis vectors and their images as columns,
    # so S^T g^T = T^T, and the rows of S^T are the basis vectors
    matrix = mx.transpose(mx.solve_matrix(basis, images))
    if any(x.denominator != 1 for row in matrix for x in row):
        raise AutomorphismError(f"{spec.name}: g is not integral on the Milnor lattice")
    out = [[int(x) for x in row] for row in matrix]
    if mx.matmul(out, [list(r) for r in lat.M]) != mx.matmul([list(r) for r in lat.M], out):
        raise AutomorphismError("g does not commute with the monodromy")
    return out


def monodromy_powers(lat: SeifertLattice, bound: int | None = None) -> list[list[list[int]]]:
    """The finite list of +-M^k (M has finite order on these lattices up to bound)."""
    n = lat.rank
    ident = mx.identity(n)
    M = [list(r) for r in lat.M]
    out = [ident, mx.scale(ident, -1)]
    current = M
    limit = bound or 4 * n * n + 64
    for _ in range(limit):
        if current == ident:
            break
        out.extend([current, mx.scale(current, -1)])
        current = mx.matmul(current, M)
    return out


def is_plus_minus_monodromy_power(lat: SeifertLattice, g: Sequence[Sequence[int]], search: int = 2000) -> bool:
    """True iff g = +-M^k for some 0 <= k < search (M may have infinite order)."""
    M = [list(r) for r in lat.M]
    target = [list(r) for r in g]
    current = mx.identity(lat.rank)
    for _ in range(search):
        if current == target or mx.scale(current, -1) == target:
            return True
        current = mx.matmul(current, M)
        if current == mx.identity(lat.rank):
            return False
    return False


# ---------------------------------------------------------------------------
# The five triangle-group cases


@dataclass(frozen=True)
class TriangleCase:
    name: str
    m: int
    w: CycloElement
    a2: FuchsianElement
    product_eigen_turns: tuple[Fraction, Fraction]
    triangle_type: tuple[int, int, int]
    step2_candidates: tuple[tuple[int, ...], ...]
    norm_w: Fraction

    @property
    def a1(self) -> FuchsianElement:
        return FuchsianElement.from_rows([[zeta(self.m), 0], [0, 1]], self.w)


def _build_case(name: str) -> TriangleCase:
    if name == "W10":
        m = 12
        z, p1 = zeta(m), real_p(m)
        w = 2 * p1 * (p1 + 2)
        a2 = [[p1 + 2, -2 * p1 * (p1 + 2)], [1, -(p1 + 2)]]
        turns = (Fraction(4, 12), Fraction(3, 12))
        tri, cands, norm = (2, 12, 12), ((2, 1), (4, 2), (6, 3)), -12
    elif name == "S10":
        m = 10
        z, p1 = zeta(m), real_p(m)
        w = 2 * p1**3
        a2 = [[(z + 1) * p1, -2 * p1**3 * z], [1, -(z + 1) * p1]]
        turns = (Fraction(4, 10), Fraction(3, 10))
        tri, cands, norm = (2, 10, 10), ((2, 2), (2, 3)), -4
    elif name == "E30":
        m = 18
        z, p1 = zeta(m), real_p(m)
        w = p1 * (p1 + 2)
        a2 = [[p1 + 1, -p1 * (p1 + 2)], [1, -(p1 + 1)]]
        turns = (Fraction(8, 18), Fraction(2, 18))
        tri, cands, norm = (2, 3, 18), (), None
    elif name == "Z10":
        m = 14
        z, p1 = zeta(m), real_p(m)
        w = 1 / (-real_p(m, 5))
        scale = p1 * (1 - z**3)
        a2 = [[scale, -scale * w], [scale, -scale]]
        turns = (Fraction(1, 6) + Fraction(2, 14), Fraction(-1, 6) + Fraction(2, 14))
        tri, cands, norm = (2, 3, 14), (), None
    elif name == "Q20":
        m = 12
        z, p1 = zeta(m), real_p(m)
        w = 1 / (p1 + 1)
        a2 = [[z + 1, -z], [p1 + 1, -(z + 1)]]
        turns = (Fraction(6, 12), Fraction(2, 12))
        tri, cands, norm = (2, 3, 12), (), None
    else:
        raise KeyError(f"unknown triangle case {name!r}; choose from {', '.join(TRIANGLE_CASES)}")
    element = FuchsianElement.from_rows(a2, w)
    turns = tuple(t % 1 for t in turns)
    norm_w = field_norm(w)
    if norm is not None and norm_w != norm:
        raise AssertionError(f"{name}: Norm(w) = {norm_w}, expected {norm}")
    return TriangleCase(name, m, w, element, turns, tri, cands, norm_w)  # type: ignore[arg-type]


TRIANGLE_CASES = ("W10", "S10", "E30", "Z10", "Q20")
_CASE_ALIASES = {"U10": "E30", "W1_0": "W10", "S1_0": "S10", "E3_0": "E30", "U1_0": "E30", "Z1_0": "Z10", "Q2_0": "Q20"}


@lru_cache(maxsize=None)
def triangle_case(name: str) -> TriangleCase:
    key = _CASE_ALIASES.get(name, name)
    return _build_case(key)


# ---------------------------------------------------------------------------
# Elliptic data


@dataclass(frozen=True)
class EllipticData:
    fixed_point: complex
    other_fixed_point: complex | None
    angle_turns: Fraction
    order: int
    eigen_turns: tuple[Fraction | None, Fraction | None]

    @property
    def angle(self) -> float:
        return float(2 * math.pi * self.angle_turns)


def _snap_turn(value, denominator: int) -> Fraction:
    turn = mpmath.arg(value) / (2 * mpmath.pi)
    return Fraction(int(mpmath.nint(turn * denominator)), denominator) % 1


def _certify_root(poly_coeffs: Sequence[CycloElement], turn: Fraction, m: int) -> bool:
    """Exact check that exp(2 pi i turn) is a root of sum coeffs[i] t^i (coefficients in Q(zeta_m))."""
    big = math.lcm(m, turn.denominator)
    root = zeta(big, turn.numerator * (big // turn.denominator))
    total = cyclo_const(big, 0)
    for i, coeff in enumerate(poly_coeffs):
        total = total + lift(coeff, big) * root**i
    return total.is_zero()


def elliptic_data(element: FuchsianElement, digits: int = DEFAULT_DIGITS) -> EllipticData:
    """Fixed point inside |z|^2 = w, rotation angle arg(lambda_2/lambda_1) and order."""
    m = element.modulus
    trace, det = element.trace(), element.det()
    # the eigenvalue ratio r satisfies r + 1/r = tr^2/det - 2
    ratio_sum = trace * trace / det - 2
    with mpmath.workdps(digits + 10):
        tr_v, det_v = evaluate(trace, 1, digits), evaluate(det, 1, digits)
        disc = mpmath.sqrt(tr_v * tr_v - 4 * det_v)
        lams = [(tr_v + disc) / 2, (tr_v - disc) / 2]
        if abs(abs(lams[0]) - abs(lams[1])) > mpmath.mpf(10) ** (-digits // 2):
            raise NonEllipticError("eigenvalues have different absolute values")
        a, b, c, d = (evaluate(x, 1, digits) for x in (element.a, element.b, element.c, element.d))
        tol = mpmath.mpf(10) ** (-digits // 2)
        fixed: list = []
        for lam in lams:
            if abs(c) > tol:
                fixed.append((lam - d) / c)
            elif abs(a - lam) > tol:
                fixed.append(-b / (a - lam))
            else:
                fixed.append(None)
        if fixed[0] is None or (fixed[1] is not None and abs(fixed[1]) < abs(fixed[0])):
            lams.reverse()
            fixed.reverse()
        ratio = lams[1] / lams[0]
        denominator = 12 * m
        turn = _snap_turn(ratio, denominator)
        eigen_turns = []
        for lam in lams:
            t = _snap_turn(lam, denominator)
            ok = abs(lam - mpmath.expjpi(2 * mpmath.mpf(t.numerator) / t.denominator)) < tol
            eigen_turns.append(t if ok and _certify_root([det, -trace, cyclo_const(m, 1)], t, m) else None)
    big = math.lcm(m, turn.denominator)
    certified = lift(ratio_sum, big) == zeta(big, turn.numerator * big // turn.denominator) + zeta(
        big, -turn.numerator * big // turn.denominator
    )
    if not certified:
        raise NonEllipticError("eigenvalue ratio is not a root of unity of small order")
    signed = turn if turn <= Fraction(1, 2) else turn - 1
    order = signed.denominator
    z1 = complex(fixed[0]) if fixed[0] is not None else None
    z2 = complex(fixed[1]) if fixed[1] is not None else None
    return EllipticData(z1, z2, signed, order, (eigen_turns[0], eigen_turns[1]))  # type: ignore[arg-type]


def triangle_type(case: TriangleCase) -> tuple[int, int, int]:
    orders = [elliptic_data(x).order for x in (case.a1, case.a2, case.a1 * case.a2)]
    return tuple(sorted(orders))  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# Step 2: the candidate audit


@dataclass(frozen=True)
class CandidateAudit:
    coordinates: tuple[int, ...]
    norm_f_minus_one: Fraction
    quotient: Fraction
    excluded: bool


def _abs2(x: CycloElement) -> CycloElement:
    return x * x.conj()


def step2_candidates(case: TriangleCase) -> list[tuple[int, ...]]:
    """f in Z[p_1] with f(zeta) in (1, |a_2|^2) and f in (0, 1) at the other real embeddings."""
    m = case.m
    upper = float(evaluate(_abs2(case.a2.a), 1, 30).real)
    boxes = [(1.0, upper)] + [(0.0, 1.0)] * (len(real_embedding_exponents(m)) - 1)
    vander = _p1_vandermonde(m)
    size = len(vander)
    inv = [_solve_coordinates(m, [1.0 if r == j else 0.0 for r in range(size)]) for j in range(size)]
    limits = []
    for i in range(size):
        span = sum(abs(inv[j][i]) * max(abs(lo), abs(hi)) for j, (lo, hi) in enumerate(boxes))
        limits.append(int(math.ceil(span)) + 1)
    out = []
    for coords in itertools.product(*(range(-lim, lim + 1) for lim in limits)):
        values = [sum(coords[i] * vander[j][i] for i in range(size)) for j in range(size)]
        if all(lo + 1e-12 < v < hi - 1e-12 for v, (lo, hi) in zip(values, boxes)):
            out.append(tuple(coords))
    return sorted(out)


def verify_step2_minimality(case: TriangleCase) -> tuple[bool, list[CandidateAudit]]:
    """Every candidate f for |a|^2 must fail Norm(f - 1) = Norm(w) * (positive integer)."""
    m = case.m
    norm_w = field_norm(case.w)
    audits = []
    for coords in step2_candidates(case):
        f = from_p1_coordinates(m, coords)
        norm = field_norm(f - 1)
        quotient = norm / norm_w
        excluded = not (quotient.denominator == 1 and quotient > 0)
        audits.append(CandidateAudit(coords, norm, quotient, excluded))
    return all(x.excluded for x in audits), audits


def star_margin(case: TriangleCase) -> float:
    """1 - |a_2|^2 ((sin pi/m)^2 + (1 - sqrt(1 - |a_2|^-2))^2); positive in all five cases."""
    a2sq = float(evaluate(_abs2(case.a2.a), 1, 30).real)
    bound = a2sq * (math.sin(math.pi / case.m) ** 2 + (1 - math.sqrt(1 - 1 / a2sq)) ** 2)
    return 1 - bound


# ---------------------------------------------------------------------------
# Step 3: word reduction


@dataclass(frozen=True)
class GeneratorWord:
    """scalar * product of letters, each one of "A1", "A1^-1", "A2"."""

    letters: tuple[str, ...]
    scalar: CycloElement
    c_history: tuple[float, ...] = field(default=(), compare=False)

    def evaluate(self, case: TriangleCase) -> FuchsianElement:
        table = {"A1": case.a1, "A1^-1": case.a1.inverse(), "A2": case.a2}
        out = FuchsianElement.identity(case.w)
        for letter in self.letters:
            out = out * table[letter]
        return out.scaled(self.scalar)

    def a2_count(self) -> int:
        return self.letters.count("A2")

    def __str__(self) -> str:
        body = " ".join(self.letters) if self.letters else "1"
        return f"({self.scalar}) * {body}"


def _a1_letters(exponent: int, m: int) -> list[str]:
    exponent %= m
    if exponent <= m // 2:
        return ["A1"] * exponent
    return ["A1^-1"] * (m - exponent)


def _simplify(letters: Sequence[str], m: int) -> tuple[str, ...]:
    out: list[str] = []
    run = 0

    def flush() -> None:
        out.extend(_a1_letters(run, m))

    for letter in letters:
        if letter == "A2":
            flush()
            run = 0
            out.append(letter)
        else:
            run += 1 if letter == "A1" else -1
    flush()
    return tuple(out)


def _complex_value(x: CycloElement) -> complex:
    """x at zeta = exp(2 pi i / m) in double precision (a numeric guard only)."""
    root = cmath.exp(2j * math.pi / x.modulus)
    acc = 0j
    for coeff in reversed(x.coords):
        acc = acc * root + float(coeff)
    return acc


def _angle_distance(u: complex, v: complex) -> float:
    diff = cmath.phase(u) - cmath.phase(v)
    return abs((diff + math.pi) % (2 * math.pi) - math.pi)


@lru_cache(maxsize=None)
def _a2_conjugates(case: TriangleCase) -> tuple[FuchsianElement, ...]:
    """A1^-k A2 A1^k = [[a_2, zeta^-k b_2], [zeta^k c_2, d_2]] for k = 0, ..., m-1."""
    a2, m = case.a2, case.m
    return tuple(
        FuchsianElement(a2.a, a2.b * zeta(m, -k), a2.c * zeta(m, k), a2.d, case.w) for k in range(m)
    )


def reduce_word(element: FuchsianElement, case: TriangleCase) -> GeneratorWord:
    """Write element as scalar * word in A1, A1^-1, A2 by shrinking |c| step by step.

    Each step right-multiplies by A1^-k A2 A1^k, with k chosen so that the two
    summands of the new lower-left entry c_3 a_2 + zeta^k d_3 c_2 point in
    nearly opposite directions.
    """
    if element.w != case.w or not gamma_membership(element):
        raise NotInGammaError("element is not in the group of this case")
    m = case.m
    a2 = case.a2
    conjugates = _a2_conjugates(case)
    roots = [cmath.exp(2j * math.pi * k / m) for k in range(m)]
    a2_v, c2_v = _complex_value(a2.a), _complex_value(a2.c)
    current = element
    ks: list[int] = []
    history = [abs(_complex_value(current.c))]
    while not current.c.is_zero():
        if len(ks) >= MAX_REDUCTION_STEPS:
            raise InvariantViolationError(f"no termination after {MAX_REDUCTION_STEPS} steps")
        target = _complex_value(current.c) * a2_v
        partner = _complex_value(current.d) * c2_v
        best = min(range(m), key=lambda k: (_angle_distance(target, -roots[k] * partner), k))
        nxt = current * conjugates[best]
        size = abs(_complex_value(nxt.c))
        if not size < history[-1]:
            raise InvariantViolationError(f"|c| did not decrease: {history[-1]} -> {size}")
        history.append(size)
        ks.append(best)
        current = nxt
    # current = diag(a, d) with a, d roots of unity, so current = d * A1^e
    found = root_of_unity_exponent(current.a / current.d)
    if found is None or (found[0] == -1 and m % 2):
        raise InvariantViolationError("diagonal remainder is not a power of A1 up to scalar")
    sign, e = found
    if sign == -1:
        e += m // 2
    # A2^-1 = s A2 with s = -1/det(A2), since tr A2 = 0
    s = -1 / a2.det()
    scalar = current.d * s ** len(ks)
    letters: list[str] = list(_a1_letters(e, m))
    for k in reversed(ks):
        letters += ["A1^-1"] * k + ["A2"] + ["A1"] * k
    word = GeneratorWord(_simplify(letters, m), scalar, tuple(history))
    if word.evaluate(case) != element:
        raise InvariantViolationError("word does not evaluate back to the element")
    return word


def random_word(case: TriangleCase, length: int, rng) -> FuchsianElement:
    """A product of `length` random letters A1, A1^-1, A2."""
    table = [case.a1, case.a1.inverse(), case.a2]
    out = FuchsianElement.identity(case.w)
    for _ in range(length):
        out = out * table[rng.randrange(3)]
    return out
