"""Orlik blocks: cyclic, primitive, monodromy-invariant sublattices.

A block is generated by a single vector beta under the monodromy, and its
characteristic polynomial has distinct cyclotomic factors.  This module
builds blocks, checks the decompositions of the bimodal Milnor lattices into
two or three blocks, and hosts the structural lemmas used around them: the
polynomial matrix of an automorphism that respects a block sum, the
prime-power chain criterion on eigenvalue orders, and the parity of a
cyclotomic product at t = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

from . import matrices as mx
from .cyclo import IntPolynomial, cyclotomic_product, factor_into_cyclotomics
from .lattice import SeifertLattice, Sublattice, saturation_index


class NonPrimitiveError(ValueError):
    """The cyclic span of a generator is not saturated in the lattice."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"cyclic span is not primitive: saturation index {index}")


class BlockError(ValueError):
    """A generator or automorphism is incompatible with the block structure."""


# ---------------------------------------------------------------------------
# Blocks


@dataclass(frozen=True)
class OrlikBlock:
    generator: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]
    block_poly: IntPolynomial
    factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence[int]) -> list[Fraction]:
        """Coefficients of v in the cyclic basis beta, M beta, ..."""
        return mx.solve_rational(mx.transpose(self.basis), v)

    def polynomial_of(self, v: Sequence[int]) -> IntPolynomial:
        """The unique q with deg q < rank and q(M) beta = v."""
        coords = self.coordinates(v)
        if any(c.denominator != 1 for c in coords):
            raise BlockError("vector lies in the rational span but not in the block")
        return IntPolynomial(tuple(int(c) for c in coords))


def cyclic_orbit(lat: SeifertLattice, beta: Sequence[int]) -> tuple[list[list[int]], IntPolynomial]:
    """The cyclic basis of beta and the monic minimal relation M^d beta = sum c_k M^k beta."""
    vectors = [list(beta)]
    echelon = mx.IncrementalEchelon(len(beta))
    echelon.add(vectors[0])
    while True:
        nxt = mx.matvec(lat.M, vectors[-1])
        if not echelon.add(nxt):
            coords = mx.solve_rational(mx.transpose(vectors), nxt)
            if any(c.denominator != 1 for c in coords):
                raise BlockError("cyclic relation has non-integral coefficients")
            poly = IntPolynomial.monomial(len(vectors)) - IntPolynomial(tuple(int(c) for c in coords))
            return vectors, poly
        vectors.append(nxt)


def make_orlik_block(lat: SeifertLattice, beta: Sequence[int]) -> OrlikBlock:
    if len(beta) != lat.rank:
        raise BlockError(f"generator has length {len(beta)}, lattice rank is {lat.rank}")
    if not any(beta):
        raise BlockError("generator must be nonzero")
    vectors, poly = cyclic_orbit(lat, beta)
    factors = factor_into_cyclotomics(poly)
    if factors is None or len(set(factors)) != len(factors):
        raise BlockError(f"block polynomial {poly} is not a product of distinct cyclotomic polynomials")
    index = saturation_index(Sublattice(lat.rank, tuple(tuple(v) for v in vectors)))
    if index != 1:
        raise NonPrimitiveError(index)
    return OrlikBlock(tuple(beta), tuple(tuple(v) for v in vectors), poly, factors)


def companion_matrix(poly: IntPolynomial) -> list[list[int]]:
    """Matrix of multiplication by t on Z[t]/(poly) in the basis 1, t, ..."""
    d = poly.degree
    out = [[0] * d for _ in range(d)]
    for k in range(d - 1):
        out[k + 1][k] = 1
    for k in range(d):
        out[k][d - 1] = -poly[k]
    return out


def block_monodromy(lat: SeifertLattice, block: OrlikBlock) -> list[list[int]]:
    """M restricted to the block, in the cyclic basis (columns are images)."""
    cols = []
    for v in block.basis:
        image = mx.matvec(lat.M, v)
        coords = block.coordinates(image)
        cols.append([int(c) for c in coords])
    return mx.transpose(cols)


def sub_block_generator(lat: SeifertLattice, block: OrlikBlock, divisor: Iterable[int]) -> list[int]:
    """(block_poly / prod Phi_n)(M)(beta), the cyclic generator of the eigen-part for prod Phi_n."""
    divisor_poly = cyclotomic_product(tuple(divisor))
    return lat.apply_poly(block.block_poly.exact_div(divisor_poly), block.generator)


def gamma_vector(lat: SeifertLattice, beta: Sequence[int], cofactor: Iterable[int]) -> list[int]:
    """prod Phi_n (M) applied to beta, for a multiset of cyclotomic indices."""
    return lat.apply_poly(cyclotomic_product(tuple(cofactor)), beta)


def gram_matrix(lat: SeifertLattice, vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[lat.seifert(u, v) for v in vectors] for u in vectors]


def orbit_gram(lat: SeifertLattice, v: Sequence[int], length: int) -> list[list[int]]:
    """Seifert matrix on v, M v, ..., M^(length-1) v."""
    orbit = [list(v)]
    for _ in range(length - 1):
        orbit.append(mx.matvec(lat.M, orbit[-1]))
    return gram_matrix(lat, orbit)


# ---------------------------------------------------------------------------
# Decompositions


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[OrlikBlock, ...]
    r_I: int

    def stacked_basis(self) -> list[list[int]]:
        return [list(v) for block in self.blocks for v in block.basis]


@dataclass(frozen=True)
class CheckResult:
    check: str
    status: str
    expected: Any
    actual: Any

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict[str, Any]:
        return {"check": self.check, "status": self.status, "expected": self.expected, "actual": self.actual}


def _result(check: str, expected: Any, actual: Any) -> CheckResult:
    return CheckResult(check, "pass" if expected == actual else "fail", expected, actual)


def decompose(lat: SeifertLattice, generators: Sequence[Sequence[int]]) -> BlockDecomposition:
    blocks = tuple(make_orlik_block(lat, beta) for beta in generators)
    stacked = [list(v) for block in blocks for v in block.basis]
    if mx.rank(stacked) != len(stacked):
        raise BlockError("block sum is not direct")
    return BlockDecomposition(blocks, saturation_index(Sublattice(lat.rank, tuple(map(tuple, stacked)))))


def _orthogonal(lat: SeifertLattice, left: Sequence[Sequence[int]], right: Sequence[Sequence[int]]) -> bool:
    return all(lat.seifert(u, v) == 0 for u in left for v in right)


def verify_decomposition(
    lat: SeifertLattice,
    generators: Sequence[Sequence[int]],
    expected: Mapping[str, Any],
) -> list[CheckResult]:
    """Check block polynomials, directness, primitivity, index and L-orthogonality.

    ``expected`` carries ``b`` (cyclotomic index lists per block) and ``r_I``.
    The first block together with any third block forms the enlarged first
    block, which must be L-orthogonal to the second from both sides.
    """
    results: list[CheckResult] = []
    blocks: list[OrlikBlock] = []
    for j, beta in enumerate(generators, start=1):
        try:
            block = make_orlik_block(lat, beta)
        except NonPrimitiveError as exc:
            results.append(CheckResult(f"B{j} primitive", "fail", 1, exc.index))
            vectors, poly = cyclic_orbit(lat, beta)
            block = OrlikBlock(tuple(beta), tuple(map(tuple, vectors)), poly, factor_into_cyclotomics(poly) or ())
        except BlockError as exc:
            results.append(CheckResult(f"B{j} block", "fail", "Orlik block", str(exc)))
            continue
        else:
            results.append(CheckResult(f"B{j} primitive", "pass", 1, 1))
        blocks.append(block)
        want = sorted(expected["b"][j - 1], reverse=True) if j - 1 < len(expected["b"]) else None
        results.append(_result(f"B{j} block polynomial", want, sorted(block.factors, reverse=True)))

    stacked = [list(v) for block in blocks for v in block.basis]
    total = len(stacked)
    stacked_rank = mx.rank(stacked) if stacked else 0
    independent = bool(stacked) and stacked_rank == total
    results.append(_result("sum is direct", True, independent))
    results.append(_result("full rank", lat.rank, stacked_rank))
    if independent and total == lat.rank:
        index = saturation_index(Sublattice(lat.rank, tuple(map(tuple, stacked))))
    else:
        index = None
    results.append(_result("index r_I", expected["r_I"], index))

    if len(blocks) >= 2:
        first = [list(v) for v in blocks[0].basis]
        for extra in blocks[2:]:
            first += [list(v) for v in extra.basis]
        second = [list(v) for v in blocks[1].basis]
        results.append(_result("L(B1~, B2) = 0", True, _orthogonal(lat, first, second)))
        results.append(_result("L(B2, B1~) = 0", True, _orthogonal(lat, second, first)))
    return results


def block_eigenpart(lat: SeifertLattice, block: OrlikBlock, poly: IntPolynomial) -> list[list[int]]:
    """Z-basis of the part of the block killed by poly(M)."""
    if block.rank == 0:
        return []
    comp = companion_matrix(block.block_poly)
    kernel = mx.integer_kernel(mx.poly_of_matrix(poly.coefficients, comp))
    basis_t = mx.transpose(block.basis)
    return [mx.matvec(basis_t, x) for x in kernel]


def eigen_index(lat: SeifertLattice, blocks: Sequence[OrlikBlock], poly: IntPolynomial) -> int:
    """[Ml_p : (sum of blocks)_p] for p a cyclotomic product."""
    from .lattice import eigen_sublattice

    target = eigen_sublattice(lat, poly)
    parts = [v for block in blocks for v in block_eigenpart(lat, block, poly)]
    if len(parts) != target.rank or (parts and mx.rank(parts) != len(parts)):
        raise BlockError(f"block eigen-parts have rank {len(parts)}, eigenlattice has rank {target.rank}")
    if not parts:
        return 1
    return saturation_index(Sublattice(lat.rank, tuple(map(tuple, parts))))


# ---------------------------------------------------------------------------
# Automorphisms that respect a block sum


@dataclass(frozen=True)
class AutomorphismDecomposition:
    """Polynomials p_ij with g(beta_j) = sum_i p_ij(M)(beta_i)."""

    entries: tuple[tuple[IntPolynomial, ...], ...]
    block_polys: tuple[IntPolynomial, ...]

    def quotients(self, p0: IntPolynomial) -> list[list[IntPolynomial]]:
        """q_ij with p_ij = delta_ij + (block_poly_i / p0) q_ij and deg q_ij < deg p0."""
        out = []
        for i, row in enumerate(self.entries):
            cofactor = self.block_polys[i].exact_div(p0)
            qrow = []
            for j, pij in enumerate(row):
                delta = IntPolynomial((1,)) if i == j else IntPolynomial(())
                diff = pij - delta
                q, rem = diff.divmod_monic(cofactor)
                if not rem.is_zero():
                    raise BlockError(f"p_{i + 1}{j + 1} - delta is not divisible by block_poly/p0")
                if not q.is_zero() and q.degree >= p0.degree:
                    raise BlockError(f"q_{i + 1}{j + 1} has degree {q.degree} >= deg p0")
                qrow.append(q)
            out.append(qrow)
        return out


def decompose_automorphism(
    lat: SeifertLattice, g: Sequence[Sequence[int]], decomp: BlockDecomposition
) -> AutomorphismDecomposition:
    n = lat.rank
    gm = [list(r) for r in g]
    if mx.matmul(gm, [list(r) for r in lat.M]) != mx.matmul([list(r) for r in lat.M], gm):
        raise BlockError("g does not commute with the monodromy")
    stacked = decomp.stacked_basis()
    if len(stacked) != n:
        raise BlockError("block decomposition does not have full rank")
    columns = mx.transpose(stacked)
    sizes = [block.rank for block in decomp.blocks]
    offsets = [sum(sizes[:k]) for k in range(len(sizes))]
    entries: list[list[IntPolynomial]] = [[IntPolynomial(())] * len(sizes) for _ in sizes]
    for j, block in enumerate(decomp.blocks):
        image = mx.matvec(gm, block.generator)
        coords = mx.solve_rational(columns, image)
        if any(c.denominator != 1 for c in coords):
            raise BlockError("g does not preserve the sum of the blocks")
        for i in range(len(sizes)):
            chunk = coords[offsets[i]: offsets[i] + sizes[i]]
            entries[i][j] = IntPolynomial(tuple(int(c) for c in chunk))
    result = AutomorphismDecomposition(
        tuple(tuple(row) for row in entries), tuple(block.block_poly for block in decomp.blocks)
    )
    # reconstruction of g on the full cyclic bases
    for j, block in enumerate(decomp.blocks):
        for k, v in enumerate(block.basis):
            rebuilt = [0] * n
            for i, other in enumerate(decomp.blocks):
                term = lat.apply_poly(entries[i][j] * IntPolynomial.monomial(k), other.generator)
                rebuilt = [x + y for x, y in zip(rebuilt, term)]
            if rebuilt != mx.matvec(gm, v):
                raise BlockError("reconstruction of g from p_ij fails")
    return result


# ---------------------------------------------------------------------------
# Prime-power chains on eigenvalue orders


def _prime_power_exponent(ratio: Fraction | int) -> tuple[int, int] | None:
    """(prime, exponent) when ratio is a prime power > 1, else None."""
    if isinstance(ratio, Fraction):
        if ratio.denominator != 1:
            return None
        ratio = ratio.numerator
    if ratio < 2:
        return None
    for prime in range(2, ratio + 1):
        if ratio % prime == 0:
            exponent = 0
            while ratio % prime == 0:
                ratio //= prime
                exponent += 1
            return (prime, exponent) if ratio == 1 else None
    return None


@dataclass(frozen=True)
class ChainWitness:
    """Sequences realising the order chain: m_i, j(i), p_i, k_i and the 2-range bounds."""

    orders: tuple[int, ...]
    parents: tuple[int, ...]
    primes: tuple[int, ...]
    exponents: tuple[int, ...]
    i1: int
    i2: int


def lemma28_applicable(orders: Iterable[int]) -> tuple[bool, ChainWitness | None]:
    """Search for a chain m_1, m_2, ... through all orders with the 2-range structure.

    Each later order is an earlier one divided by a prime power.  Steps by
    odd primes may use any earlier order; steps by powers of 2 form one
    consecutive range where each divides the immediately preceding order.
    """
    values = tuple(sorted(set(orders), reverse=True))
    if not values or any(v < 1 for v in values):
        raise ValueError("orders must be a nonempty set of positive integers")
    if len(values) == 1:
        return True, ChainWitness(values, (), (), (), 1, 1)

    @lru_cache(maxsize=None)
    def search(sequence: tuple[int, ...], phase: int) -> tuple[tuple[int, int, int, int, bool], ...] | None:
        # phase 0: before the 2-range, 1: inside it, 2: after it
        if len(sequence) == len(values):
            return ()
        remaining = [v for v in values if v not in sequence]
        for candidate in remaining:
            if phase in (0, 1):
                step = _prime_power_exponent(Fraction(sequence[-1], candidate))
                if step and step[0] == 2:
                    rest = search(sequence + (candidate,), 1)
                    if rest is not None:
                        return ((candidate, len(sequence), 2, step[1], True),) + rest
            for parent_pos, parent in enumerate(sequence, start=1):
                step = _prime_power_exponent(Fraction(parent, candidate))
                if step and step[0] != 2:
                    rest = search(sequence + (candidate,), 2 if phase == 1 else phase)
                    if rest is not None:
                        return ((candidate, parent_pos, step[0], step[1], False),) + rest
        return None

    steps = search((values[0],), 0)
    if steps is None:
        return False, None
    sequence = (values[0],) + tuple(s[0] for s in steps)
    in_range = [pos for pos, s in enumerate(steps, start=2) if s[4]]
    i1 = in_range[0] - 1 if in_range else 1
    i2 = in_range[-1] if in_range else 1
    witness = ChainWitness(
        orders=sequence,
        parents=tuple(s[1] for s in steps),
        primes=tuple(s[2] for s in steps),
        exponents=tuple(s[3] for s in steps),
        i1=i1,
        i2=i2,
    )
    return True, witness


def check_witness(witness: ChainWitness, orders: Iterable[int]) -> bool:
    """Independent validation of the four conditions for a witness."""
    seq = witness.orders
    if set(seq) != set(orders) or len(seq) != len(set(seq)):
        return False
    if not 1 <= witness.i1 <= witness.i2 <= len(seq):
        return False
    for i in range(2, len(seq) + 1):
        parent, prime, exponent = witness.parents[i - 2], witness.primes[i - 2], witness.exponents[i - 2]
        in_range = witness.i1 + 1 <= i <= witness.i2
        if _prime_power_exponent(prime) != (prime, 1):
            return False
        if in_range and (prime != 2 or parent != i - 1):
            return False
        if not in_range and (prime < 3 or not 1 <= parent < i):
            return False
        if seq[parent - 1] != seq[i - 1] * prime**exponent:
            return False
    return True


def phi_product_parity(factors: Iterable[int]) -> str:
    """'odd' or 'even' for the value at t = 1 of a product of cyclotomic polynomials."""
    for n in factors:
        if n < 1:
            raise ValueError("cyclotomic indices must be positive")
        if n & (n - 1) == 0:
            return "even"
    return "odd"
