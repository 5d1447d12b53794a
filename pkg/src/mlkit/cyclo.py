"""Exact arithmetic in Z[t], in cyclotomic fields Q(zeta_m) and their real subfields.

Elements of Q(zeta_m) are stored in the power basis 1, zeta, ..., zeta^(phi(m)-1)
with exact rational coordinates.  Every product is reduced modulo the cyclotomic
polynomial, so equality of elements is equality of coordinate tuples.

Numeric work (signs of real algebraic numbers, embeddings) goes through mpmath
at a configurable precision, and a sign that is too close to zero raises
:class:`IndeterminateSignError` instead of being guessed.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath

DEFAULT_DIGITS = 40
SIGN_TOLERANCE = 1e-6
MAX_PHI = 64

Rational = Union[int, Fraction]


class IndeterminateSignError(ArithmeticError):
    """A real algebraic number is numerically too close to zero to sign."""


class BranchError(ValueError):
    """The square root branch is undefined (the argument is -1)."""


class NotRealError(ValueError):
    """A quantity expected to be real has a noticeable imaginary part."""


# ---------------------------------------------------------------------------
# Integer polynomials


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, ascending degree."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = list(self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(int(c) for c in coeffs))

    # construction helpers
    @classmethod
    def constant(cls, value: int) -> IntPolynomial:
        return cls((value,))

    @classmethod
    def monomial(cls, degree: int, coefficient: int = 1) -> IntPolynomial:
        return cls((0,) * degree + (coefficient,))

    @classmethod
    def from_roots_of_unity_power(cls, n: int, sign: int = -1) -> IntPolynomial:
        """Return t^n + sign."""
        return cls((sign,) + (0,) * (n - 1) + (1,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def is_monic(self) -> bool:
        return self.leading() == 1

    def __getitem__(self, index: int) -> int:
        return self.coefficients[index] if 0 <= index < len(self.coefficients) else 0

    def _coerce(self, other: object) -> IntPolynomial:
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, int):
            return IntPolynomial((other,))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> IntPolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coefficients), len(other.coefficients))
        return IntPolynomial(tuple(self[i] + other[i] for i in range(n)))

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: object) -> IntPolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> IntPolynomial:
        return (-self) + other

    def __mul__(self, other: object) -> IntPolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> IntPolynomial:
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = IntPolynomial((1,))
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def divmod_monic(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Division with remainder by a polynomial with leading coefficient +-1."""
        if divisor.is_zero() or abs(divisor.leading()) != 1:
            raise ValueError("divisor must have leading coefficient +-1")
        rem = list(self.coefficients)
        dd = divisor.degree
        lead = divisor.leading()
        quot = [0] * max(len(rem) - dd, 0)
        for shift in range(len(rem) - dd - 1, -1, -1):
            c = rem[shift + dd] * lead
            if c:
                quot[shift] = c
                for k, dc in enumerate(divisor.coefficients):
                    rem[shift + k] -= c * dc
        return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem[:dd]))

    def __floordiv__(self, divisor: IntPolynomial) -> IntPolynomial:
        return self.divmod_monic(divisor)[0]

    def __mod__(self, divisor: IntPolynomial) -> IntPolynomial:
        return self.divmod_monic(divisor)[1]

    def exact_div(self, divisor: IntPolynomial) -> IntPolynomial:
        quot, rem = self.divmod_monic(divisor)
        if not rem.is_zero():
            raise ValueError(f"{divisor} does not divide {self}")
        return quot

    def divides(self, other: IntPolynomial) -> bool:
        return (other % self).is_zero()

    def __call__(self, x):
        """Horner evaluation at anything supporting + and * with ints."""
        acc = 0 * x if not isinstance(x, int) else 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = "t" if k == 1 else f"t^{k}"
                body = power if mag == 1 else f"{mag}*{power}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


T = IntPolynomial((0, 1))
ONE_POLY = IntPolynomial((1,))


def euler_phi(n: int) -> int:
    result = n
    k = 2
    rest = n
    while k * k <= rest:
        if rest % k == 0:
            while rest % k == 0:
                rest //= k
            result -= result // k
        k += 1
    if rest > 1:
        result -= result // rest
    return result


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPolynomial:
    """The n-th cyclotomic polynomial, built as (t^n - 1) / prod_{d | n, d < n} Phi_d."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    poly = IntPolynomial.from_roots_of_unity_power(n)
    for d in divisors(n)[:-1]:
        poly = poly.exact_div(cyclotomic_poly(d))
    return poly


def cyclotomic_product(indices: Iterable[int]) -> IntPolynomial:
    out = ONE_POLY
    for n in indices:
        out = out * cyclotomic_poly(n)
    return out


def _index_bound(degree: int) -> int:
    # phi(n) >= sqrt(n / 2), so phi(n) <= degree forces n <= 2 * degree^2
    return max(2, 2 * degree * degree)


def factor_into_cyclotomics(poly: IntPolynomial) -> tuple[int, ...] | None:
    """Write a monic polynomial as a product of cyclotomic polynomials.

    Returns the indices in descending order with repetition, or None when the
    polynomial is not such a product.
    """
    if not poly.is_monic():
        return None
    remaining = poly
    found: list[int] = []
    for n in range(_index_bound(max(poly.degree, 1)), 0, -1):
        if euler_phi(n) > remaining.degree:
            continue
        phi_n = cyclotomic_poly(n)
        while remaining.degree >= phi_n.degree:
            quot, rem = remaining.divmod_monic(phi_n)
            if not rem.is_zero():
                break
            found.append(n)
            remaining = quot
        if remaining.degree == 0:
            break
    if remaining != ONE_POLY:
        return None
    return tuple(found)


# ---------------------------------------------------------------------------
# Rational polynomial helpers (private; ascending lists of Fractions)


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _rp_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _rp_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _rp_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    rem = list(a)
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    for shift in range(len(a) - len(b), -1, -1):
        c = rem[shift + len(b) - 1] / lead
        if c:
            quot[shift] = c
            for k, bc in enumerate(b):
                rem[shift + k] -= c * bc
    return _trim(quot), _trim(rem[: len(b) - 1])


# ---------------------------------------------------------------------------
# Cyclotomic field elements


@lru_cache(maxsize=None)
def _modulus_data(m: int) -> tuple[int, tuple[int, ...]]:
    phi = euler_phi(m)
    if phi > MAX_PHI:
        raise ValueError(f"phi({m}) = {phi} exceeds the supported bound {MAX_PHI}")
    return phi, cyclotomic_poly(m).coefficients


@lru_cache(maxsize=None)
def _zeta_power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Coordinates of zeta^j for j = 0..m-1 in the power basis."""
    phi, poly = _modulus_data(m)
    rows = []
    current = [0] * phi
    current[0] = 1
    for _ in range(m):
        rows.append(tuple(current))
        shifted = [0] + current
        top = shifted.pop()
        if top:
            for k in range(phi):
                shifted[k] -= top * poly[k]
        current = shifted
    return tuple(rows)


def _reduce(m: int, coeffs: Sequence[Rational]) -> tuple[Fraction, ...]:
    phi, poly = _modulus_data(m)
    work = [Fraction(c) for c in coeffs]
    for top in range(len(work) - 1, phi - 1, -1):
        c = work[top]
        if c:
            base = top - phi
            for k in range(phi):
                work[base + k] -= c * poly[k]
        work[top] = Fraction(0)
    work.extend([Fraction(0)] * (phi - len(work)))
    return tuple(work[:phi])


@dataclass(frozen=True)
class CycloElement:
    """An element of Q(zeta_m) with zeta = exp(2 pi i / m)."""

    modulus: int
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        phi, _ = _modulus_data(self.modulus)
        if len(self.coords) != phi:
            object.__setattr__(self, "coords", _reduce(self.modulus, self.coords))
        else:
            object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    # constructors
    @classmethod
    def from_poly(cls, m: int, coeffs: Sequence[Rational]) -> CycloElement:
        """The value at zeta of the polynomial with the given ascending coefficients."""
        return cls(m, _reduce(m, coeffs))

    @classmethod
    def constant(cls, m: int, value: Rational) -> CycloElement:
        return cls.from_poly(m, [value])

    @classmethod
    def zeta(cls, m: int, power: int = 1) -> CycloElement:
        return cls(m, _zeta_power_table(m)[power % m])

    # predicates
    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def is_real(self) -> bool:
        return self.conj() == self

    # arithmetic
    def _coerce(self, other: object) -> CycloElement:
        if isinstance(other, CycloElement):
            if other.modulus != self.modulus:
                raise ValueError(f"moduli differ: {self.modulus} vs {other.modulus}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElement.constant(self.modulus, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> CycloElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloElement(self.modulus, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> CycloElement:
        return CycloElement(self.modulus, tuple(-a for a in self.coords))

    def __sub__(self, other: object) -> CycloElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloElement(self.modulus, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other: object) -> CycloElement:
        return (-self) + other

    def __mul__(self, other: object) -> CycloElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coords, other.coords
        out = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return CycloElement(self.modulus, _reduce(self.modulus, out))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> CycloElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * cyc_inverse(other)

    def __rtruediv__(self, other: object) -> CycloElement:
        return self._coerce(other) * cyc_inverse(self)

    def __pow__(self, exponent: int) -> CycloElement:
        if exponent < 0:
            return cyc_inverse(self) ** (-exponent)
        result = CycloElement.constant(self.modulus, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conj(self) -> CycloElement:
        return galois_apply(self, self.modulus - 1)

    def divides(self, other: CycloElement) -> bool:
        """Divisibility in Z[zeta]: the quotient is integral."""
        if self.is_zero():
            return other.is_zero()
        return (other / self).is_integral

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z^{k}")
        return " + ".join(terms) if terms else "0"


def zeta(m: int, power: int = 1) -> CycloElement:
    return CycloElement.zeta(m, power)


def cyclo_const(m: int, value: Rational) -> CycloElement:
    return CycloElement.constant(m, value)


def real_p(m: int, k: int = 1) -> CycloElement:
    """p_k = zeta^k + zeta^-k, a generator of the real subfield when gcd(k, m) = 1."""
    return zeta(m, k) + zeta(m, -k)


def poly_at(poly: IntPolynomial, x: CycloElement) -> CycloElement:
    acc = cyclo_const(x.modulus, 0)
    for c in reversed(poly.coefficients):
        acc = acc * x + c
    return acc


def cyc_inverse(x: CycloElement) -> CycloElement:
    """Inverse in Q(zeta_m) via the extended Euclidean algorithm modulo Phi_m."""
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero in a cyclotomic field")
    m = x.modulus
    modulus_poly = [Fraction(c) for c in cyclotomic_poly(m).coefficients]
    r0, r1 = modulus_poly, _trim(list(x.coords))
    s0: list[Fraction] = []
    s1: list[Fraction] = [Fraction(1)]
    while len(r1) > 1:
        q, r = _rp_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _rp_sub(s0, _rp_mul(q, s1))
    # r1 is a nonzero constant because Phi_m is irreducible
    inv_const = 1 / r1[0]
    return CycloElement.from_poly(m, [c * inv_const for c in s1])


def galois_apply(x: CycloElement, k: int) -> CycloElement:
    """Image of x under the automorphism zeta -> zeta^k."""
    m = x.modulus
    if math.gcd(k, m) != 1:
        raise ValueError(f"gcd({k}, {m}) != 1: not a Galois automorphism")
    table = _zeta_power_table(m)
    out = [Fraction(0)] * len(x.coords)
    for i, c in enumerate(x.coords):
        if c:
            row = table[(i * k) % m]
            for j, r in enumerate(row):
                if r:
                    out[j] += c * r
    return CycloElement(m, tuple(out))


def units_mod(m: int) -> list[int]:
    return [k for k in range(1, m + 1) if math.gcd(k, m) == 1]


def real_embedding_exponents(m: int) -> list[int]:
    """One exponent k per real embedding of Q(p_1), starting with k = 1."""
    if m <= 2:
        return [1]
    return [k for k in range(1, m // 2 + 1) if math.gcd(k, m) == 1]


def field_norm(x: CycloElement) -> Fraction:
    """Norm from Q(p_1) to Q of a real element."""
    if not x.is_real():
        raise NotRealError("field_norm expects a conjugation-fixed element")
    prod = cyclo_const(x.modulus, 1)
    for k in real_embedding_exponents(x.modulus):
        prod = prod * galois_apply(x, k)
    return prod.rational_value()


def absolute_norm(x: CycloElement) -> Fraction:
    """Norm from Q(zeta_m) to Q."""
    prod = cyclo_const(x.modulus, 1)
    for k in units_mod(x.modulus):
        prod = prod * galois_apply(x, k)
    return prod.rational_value()


def is_unit(x: CycloElement) -> bool:
    return x.is_integral and not x.is_zero() and abs(absolute_norm(x)) == 1


def lift(x: CycloElement, target_modulus: int) -> CycloElement:
    """View x inside Q(zeta_M) for a multiple M of its modulus."""
    m = x.modulus
    if target_modulus % m:
        raise ValueError(f"{m} does not divide {target_modulus}")
    step = target_modulus // m
    coeffs = [Fraction(0)] * (step * (len(x.coords) - 1) + 1)
    for i, c in enumerate(x.coords):
        coeffs[i * step] = c
    return CycloElement.from_poly(target_modulus, coeffs)


# ---------------------------------------------------------------------------
# Real subring Z[p_1] coordinates


@lru_cache(maxsize=None)
def _p1_basis(m: int) -> tuple[CycloElement, ...]:
    degree = max(euler_phi(m) // 2, 1)
    p1 = real_p(m) if m > 2 else cyclo_const(m, 0)
    basis = [cyclo_const(m, 1)]
    for _ in range(degree - 1):
        basis.append(basis[-1] * p1)
    return tuple(basis)


def from_p1_coordinates(m: int, coeffs: Sequence[Rational]) -> CycloElement:
    basis = _p1_basis(m)
    out = cyclo_const(m, 0)
    for c, b in zip(coeffs, basis):
        if c:
            out = out + b * c
    return out


def to_p1_coordinates(x: CycloElement) -> tuple[Fraction, ...]:
    """Coordinates of a real element in the basis 1, p_1, ..., p_1^(d-1)."""
    from .matrices import solve_rational

    if not x.is_real():
        raise NotRealError("only real elements have p_1 coordinates")
    basis = _p1_basis(x.modulus)
    columns = [b.coords for b in basis]
    matrix = [[columns[j][i] for j in range(len(basis))] for i in range(len(x.coords))]
    return tuple(solve_rational(matrix, list(x.coords)))


# ---------------------------------------------------------------------------
# Numerics


def _mp_zeta(m: int, k: int):
    return mpmath.expjpi(mpmath.mpf(2 * k) / m)


def evaluate(x: CycloElement, k: int = 1, digits: int = DEFAULT_DIGITS):
    """Complex value of x under zeta -> exp(2 pi i k / m)."""
    with mpmath.workdps(digits + 10):
        z = _mp_zeta(x.modulus, k)
        acc = mpmath.mpc(0)
        for c in reversed(x.coords):
            acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
        return +acc


def embed_real(x: CycloElement, digits: int = DEFAULT_DIGITS) -> list:
    """Values of x under all embeddings zeta -> exp(2 pi i k / m), k coprime to m."""
    if digits < 1:
        raise ValueError("digits must be positive")
    return [evaluate(x, k, digits) for k in units_mod(x.modulus)]


def real_embeddings(x: CycloElement, digits: int = DEFAULT_DIGITS) -> list:
    """Real values of a real element, one per embedding of Q(p_1)."""
    values = []
    for k in real_embedding_exponents(x.modulus):
        value = evaluate(x, k, digits)
        if abs(value.imag) > SIGN_TOLERANCE:
            raise NotRealError(f"embedding {k} of {x} is not real")
        values.append(value.real)
    return values


def sign_of_value(value) -> int:
    if abs(value) < SIGN_TOLERANCE:
        raise IndeterminateSignError(f"value {mpmath.nstr(value, 10)} too close to zero")
    return 1 if value > 0 else -1


def real_sign(x: CycloElement, k: int = 1, digits: int = DEFAULT_DIGITS) -> int:
    """Sign of a real element under the embedding zeta -> exp(2 pi i k / m)."""
    if x.is_zero():
        return 0
    value = evaluate(x, k, digits)
    if abs(value.imag) > SIGN_TOLERANCE:
        raise NotRealError(f"{x} is not real under embedding {k}")
    return sign_of_value(value.real)


def sqrt_minus_xi(m: int, xi_exponent: int, digits: int = DEFAULT_DIGITS):
    """The principal square root of -xi, xi = zeta^k, with argument in (-pi/2, pi/2)."""
    # -xi = exp(2 pi i alpha) with alpha = k/m + 1/2 taken in [-1/2, 1/2)
    alpha = Fraction(xi_exponent, m) + Fraction(1, 2)
    alpha -= math.floor(alpha + Fraction(1, 2))
    if alpha == Fraction(-1, 2):
        raise BranchError("square root of -xi undefined for xi = 1")
    with mpmath.workdps(digits + 10):
        return mpmath.expjpi(mpmath.mpf(alpha.numerator) / alpha.denominator)


def sqrt_minus_xi_times(u: CycloElement, xi_exponent: int, digits: int = DEFAULT_DIGITS):
    """The real number sqrt(-xi) * u, where u is evaluated at zeta = exp(2 pi i / m)."""
    root = sqrt_minus_xi(u.modulus, xi_exponent, digits)
    if u.is_zero():
        return mpmath.mpf(0)
    with mpmath.workdps(digits + 10):
        value = root * evaluate(u, 1, digits)
        if abs(value.imag) > SIGN_TOLERANCE * max(1, abs(value)):
            raise NotRealError(f"sqrt(-xi) * u has imaginary part {mpmath.nstr(value.imag, 8)}")
        return +value.real


# ---------------------------------------------------------------------------
# Expression parsing for the command line


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_element(expr: str, m: int) -> CycloElement:
    """Parse an arithmetic expression in z (zeta) and p1, p3, ... (zeta^k + zeta^-k)."""

    def walk(node: ast.AST):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return cyclo_const(m, node.value)
        if isinstance(node, ast.Name):
            if node.id in ("z", "zeta"):
                return zeta(m)
            if node.id.startswith("p") and node.id[1:].isdigit():
                return real_p(m, int(node.id[1:]))
            raise ValueError(f"unknown symbol {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError("exponents must be integer literals")
                return left ** node.right.value
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            return left / right
        raise ValueError(f"unsupported syntax in {expr!r}")

    return walk(ast.parse(expr.replace("^", "**"), mode="eval"))
