"""Dense exact matrices over Z and Q as lists of rows.

Only what the lattice code needs: products, rational solving and inversion,
integer kernels by unimodular reduction, and elementary divisors.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]
Vector = list[int]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col) if x) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v) if x) for row in a]


def vecmat(v: Sequence, a: Sequence[Sequence]) -> list:
    return [sum(v[i] * a[i][j] for i in range(len(v)) if v[i]) for j in range(len(a[0]))]


def bilinear(form: Sequence[Sequence], u: Sequence, v: Sequence):
    """u^T * form * v."""
    return sum(u[i] * x for i, x in enumerate(matvec(form, v)) if u[i])


def matadd(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matsub(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Sequence[Sequence], c) -> list[list]:
    return [[c * x for x in row] for row in a]


def matpow(a: Matrix, k: int) -> Matrix:
    if k < 0:
        a = inverse_integral(a)
        k = -k
    result = identity(len(a))
    base = [list(r) for r in a]
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def poly_of_matrix(coefficients: Sequence[int], a: Matrix) -> Matrix:
    """Horner evaluation of an ascending coefficient list at a square matrix."""
    n = len(a)
    acc = zeros(n, n)
    for c in reversed(coefficients):
        acc = matmul(acc, a)
        if c:
            for i in range(n):
                acc[i][i] += c
    return acc


def poly_apply(coefficients: Sequence[int], a: Matrix, v: Sequence[int]) -> Vector:
    """p(A) v without forming p(A)."""
    acc = [0] * len(v)
    for c in reversed(coefficients):
        acc = matvec(a, acc)
        if c:
            acc = [x + c * y for x, y in zip(acc, v)]
    return acc


def _row_reduce(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rref rows, pivot columns)."""
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(work[0]) if work else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = 1 / Fraction(work[r][c])
        work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    if all(isinstance(x, int) for row in a for x in row):
        echelon = IncrementalEchelon(len(a[0]))
        return sum(1 for row in a if echelon.add(row))
    return len(_row_reduce([[Fraction(x) for x in row] for row in a])[1])


class IncrementalEchelon:
    """Integer row echelon form grown one vector at a time.

    ``add`` reports whether the vector was independent of those added before.
    Rows are kept primitive (content 1) to limit coefficient growth.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, list[int]] = {}

    def add(self, vector: Sequence[int]) -> bool:
        v = [int(x) for x in vector]
        for col in range(self.ncols):
            if not v[col]:
                continue
            pivot_row = self.rows.get(col)
            if pivot_row is None:
                content = 0
                for x in v:
                    content = gcd(content, x)
                self.rows[col] = [x // content for x in v]
                return True
            a, b = pivot_row[col], v[col]
            g = gcd(a, b)
            v = [(a // g) * x - (b // g) * y for x, y in zip(v, pivot_row)]
        return False


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """The unique solution x of a x = b; raises if none or not unique."""
    n = len(a[0])
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    red, pivots = _row_reduce(aug)
    if n in pivots:
        raise ValueError("inconsistent linear system")
    if len(pivots) < n:
        raise ValueError("linear system has no unique solution")
    return [red[i][n] for i in range(n)]


def solve_matrix(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    """X with a X = b for square invertible a."""
    n = len(a)
    aug = [[Fraction(x) for x in ra] + [Fraction(y) for y in rb] for ra, rb in zip(a, b)]
    red, pivots = _row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red[:n]]


def inverse_rational(a: Sequence[Sequence]) -> list[list[Fraction]]:
    return solve_matrix(a, identity(len(a)))


def inverse_integral(a: Sequence[Sequence]) -> Matrix:
    inv = inverse_rational(a)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not invertible over Z")
    return [[int(x) for x in row] for row in inv]


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    work = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if work[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if work[i][k] != 0), None)
            if swap is None:
                return 0
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                work[i][j] = (work[i][j] * work[k][k] - work[i][k] * work[k][j]) // prev
        prev = work[k][k]
    return sign * work[n - 1][n - 1]


def rational_nullspace(a: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of {x : a x = 0} over Q."""
    ncols = len(a[0])
    red, pivots = _row_reduce([[Fraction(x) for x in row] for row in a])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -red[i][f]
        basis.append(vec)
    return basis


def clear_denominators(v: Sequence[Fraction]) -> Vector:
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


def _hermite_rows(rows: list[list[int]], track: list[list[int]] | None = None) -> int:
    """In-place integer row echelon form by unimodular row operations.

    Rows of ``track`` undergo the same operations.  Returns the rank.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        while True:
            nonzero = [i for i in range(r, nrows) if rows[i][c] != 0]
            if not nonzero:
                break
            piv = min(nonzero, key=lambda i: abs(rows[i][c]))
            rows[r], rows[piv] = rows[piv], rows[r]
            if track is not None:
                track[r], track[piv] = track[piv], track[r]
            done = True
            for i in range(r + 1, nrows):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    if track is not None:
                        track[i] = [x - q * y for x, y in zip(track[i], track[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if any(rows[i][c] for i in range(r, nrows)):
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
                if track is not None:
                    track[r] = [-x for x in track[r]]
            for i in range(r):
                q = rows[i][c] // rows[r][c]
                if q:
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    if track is not None:
                        track[i] = [x - q * y for x, y in zip(track[i], track[r])]
            r += 1
            if r == nrows:
                break
    return r


def hermite_form(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form with zero rows removed."""
    work = [list(map(int, r)) for r in rows]
    rk = _hermite_rows(work)
    return work[:rk]


def integer_kernel(a: Sequence[Sequence[int]]) -> Matrix:
    """A Z-basis (as rows) of {x in Z^n : a x = 0}; the result is saturated."""
    n = len(a[0])
    cols = [[int(a[i][j]) for i in range(len(a))] for j in range(n)]
    track = identity(n)
    rk = _hermite_rows(cols, track)
    kernel = track[rk:]
    return hermite_form(kernel) if kernel else []


def elementary_divisors(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    work = [list(map(int, r)) for r in rows]
    if not work:
        return []
    nrows, ncols = len(work), len(work[0])
    divisors_out = []
    t = 0
    while t < min(nrows, ncols):
        entries = [(abs(work[i][j]), i, j) for i in range(t, nrows) for j in range(t, ncols) if work[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        work[t], work[pi] = work[pi], work[t]
        for row in work:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            piv = work[t][t]
            for i in range(t + 1, nrows):
                if work[i][t]:
                    q = work[i][t] // piv
                    work[i] = [x - q * y for x, y in zip(work[i], work[t])]
                    if work[i][t]:
                        changed = True
            for j in range(t + 1, ncols):
                if work[t][j]:
                    q = work[t][j] // piv
                    for row in work:
                        row[j] -= q * row[t]
                    if work[t][j]:
                        changed = True
            if changed:
                entries = [(abs(work[i][t]), i, t) for i in range(t, nrows) if work[i][t]]
                entries += [(abs(work[t][j]), t, j) for j in range(t, ncols) if work[t][j]]
                _, pi, pj = min(entries)
                work[t], work[pi] = work[pi], work[t]
                for row in work:
                    row[t], row[pj] = row[pj], row[t]
                continue
            piv = work[t][t]
            bad = next(
                ((i, j) for i in range(t + 1, nrows) for j in range(t + 1, ncols) if work[i][j] % piv),
                None,
            )
            if bad is None:
                break
            work[t] = [x + y for x, y in zip(work[t], work[bad[0]])]
        divisors_out.append(abs(work[t][t]))
        t += 1
    return divisors_out


def saturation_basis(rows: Sequence[Sequence[int]]) -> Matrix:
    """Z-basis of (span_Q rows) intersected with Z^n."""
    if not rows:
        return []
    complement = integer_kernel(rows)
    if not complement:
        return identity(len(rows[0]))
    return integer_kernel(complement)
