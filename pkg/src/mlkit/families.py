"""Catalog of the eight bimodal series and the six quadrangle families.

Each catalog entry describes the Coxeter-Dynkin diagram of a distinguished
basis (vertex chains plus extra edges, with Stokes entries -1 for a solid edge,
+1 for a dashed edge and +2 for a double dashed one), the monodromy images of
the basis vectors, the Orlik block generators and the expected invariants.
Lengths and indices are small integer expressions in ``p``.

Building a lattice recomputes the monodromy from the Stokes matrix and
compares it with the stored images, so a transcription error in either place
surfaces as :class:`CatalogMismatchError`.
"""

from __future__ import annotations

import ast
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Sequence

from .cyclo import IntPolynomial, cyclotomic_product, factor_into_cyclotomics
from .lattice import SeifertLattice, lattice_from_stokes

_catalog_override: Path | None = None


class CatalogMismatchError(ValueError):
    """The monodromy of a diagram differs from the catalog's action list."""

    def __init__(self, family: str, index: int, expected: list[int], actual: list[int]):
        self.family = family
        self.index = index
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"{family}: image of e_{index} is {_fmt_vec(actual)}, catalog says {_fmt_vec(expected)}"
        )


class GroupMismatchError(ValueError):
    """A coordinate change outside the family's symmetry group."""


class PoleError(ZeroDivisionError):
    """The j-invariant has a pole at t = 0 and t = 1."""


def _fmt_vec(vec: Sequence[int]) -> str:
    terms = [f"{c:+d}e{i + 1}" for i, c in enumerate(vec) if c]
    return " ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# Small expression language for the catalog


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.FloorDiv: lambda a, b: a // b,
    ast.Mod: lambda a, b: a % b,
}
_CMPOPS = {
    ast.GtE: lambda a, b: a >= b,
    ast.Gt: lambda a, b: a > b,
    ast.LtE: lambda a, b: a <= b,
    ast.Lt: lambda a, b: a < b,
    ast.Eq: lambda a, b: a == b,
}


def eval_expr(expr: str | int, env: Mapping[str, int]) -> int:
    """Evaluate an integer expression over the names in ``env``."""
    if isinstance(expr, int):
        return expr

    def walk(node: ast.AST) -> int:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise KeyError(f"unknown name {node.id!r} in {expr!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -walk(node.operand)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.Compare) and len(node.ops) == 1 and type(node.ops[0]) in _CMPOPS:
            return int(_CMPOPS[type(node.ops[0])](walk(node.left), walk(node.comparators[0])))
        raise ValueError(f"unsupported catalog expression {expr!r}")

    return walk(ast.parse(str(expr), mode="eval"))


# ---------------------------------------------------------------------------
# Catalog loading


def set_catalog_path(path: str | Path | None) -> None:
    """Use a different catalog file (None restores the packaged one)."""
    global _catalog_override
    _catalog_override = Path(path) if path is not None else None
    load_catalog.cache_clear()
    _build_lattice.cache_clear()


@lru_cache(maxsize=None)
def load_catalog() -> dict[str, Any]:
    if _catalog_override is not None:
        text = _catalog_override.read_text()
    else:
        text = resources.files("mlkit").joinpath("data/catalog.json").read_text()
    return json.loads(text)


def catalog_text() -> str:
    return json.dumps(load_catalog(), indent=2, sort_keys=True)


SERIES_KEYS = ("Wsharp", "Ssharp", "U", "E3", "Z", "Q2", "W", "S")
QUADRANGLE_KEYS = ("W1_0", "S1_0", "U1_0", "E3_0", "Z1_0", "Q2_0")

_ALIASES = {
    "wsharp": "Wsharp", "w#": "Wsharp", "w♯": "Wsharp", "wsharp1": "Wsharp",
    "ssharp": "Ssharp", "s#": "Ssharp", "s♯": "Ssharp",
    "u": "U", "u1": "U",
    "e3": "E3",
    "z": "Z", "z1": "Z",
    "q2": "Q2",
    "w": "W", "w1": "W",
    "s": "S", "s1": "S",
    "w10": "W1_0", "w1_0": "W1_0",
    "s10": "S1_0", "s1_0": "S1_0",
    "u10": "U1_0", "u1_0": "U1_0",
    "e30": "E3_0", "e3_0": "E3_0",
    "z10": "Z1_0", "z1_0": "Z1_0",
    "q20": "Q2_0", "q2_0": "Q2_0",
}


def canonical_name(name: str) -> str:
    key = _ALIASES.get(name.strip().lower().replace(",", "_").replace("-", ""))
    if key is None:
        raise KeyError(f"unknown family {name!r}")
    return key


# ---------------------------------------------------------------------------
# Family specifications


@dataclass(frozen=True)
class FamilySpec:
    key: str
    label: str
    series: str
    p: int
    mu: int
    edges: tuple[tuple[int, int, int], ...]
    betas: tuple[tuple[int, ...], ...]
    b: tuple[tuple[int, ...], ...]
    m: int
    r_I: int
    quadrangle: bool = False
    weights: tuple[Fraction, ...] | None = None
    triangle: tuple[int, int, int] | None = None
    group: str | None = None
    kappa_data: Mapping[str, Any] | None = field(default=None, compare=False, hash=False)

    @property
    def m2(self) -> int:
        return self.m + self.r_I * self.p

    @property
    def name(self) -> str:
        return self.label.replace("p", str(self.p)) if not self.quadrangle else self.label

    def b_polys(self) -> list[IntPolynomial]:
        return [cyclotomic_product(ind) for ind in self.b]


def _b_indices(rule: Mapping[str, Any], env: Mapping[str, int]) -> tuple[int, ...]:
    if "phi" in rule:
        return tuple(rule["phi"])
    if "t_minus_1_over_phi1" in rule:
        n = eval_expr(rule["t_minus_1_over_phi1"], env)
        return tuple(d for d in range(n, 1, -1) if n % d == 0)
    if "t_plus_1" in rule:
        n = eval_expr(rule["t_plus_1"], env)
        return tuple(d for d in range(2 * n, 0, -1) if (2 * n) % d == 0 and n % d != 0)
    raise ValueError(f"unknown b rule {rule}")


_CHAIN_REF = re.compile(r"^(\w+)\[(-?\d+)\]$")


def _series_spec(series: str, p: int) -> FamilySpec:
    cat = load_catalog()
    entry = cat["series"][series]
    env: dict[str, int] = {"p": p}
    for var, expr in entry.get("vars", {}).items():
        env[var] = eval_expr(expr, env)
    mu = env["mu"]
    chains: dict[str, list[int]] = {}
    edges: dict[tuple[int, int], int] = {}

    def add_edge(i: int, j: int, s: int) -> None:
        if i == j or not (1 <= i <= mu and 1 <= j <= mu):
            raise ValueError(f"{series}: bad edge {i}-{j} for mu={mu}")
        edges[(min(i, j), max(i, j))] = s

    for chain in entry.get("chains", []):
        start, end = eval_expr(chain["start"], env), eval_expr(chain["end"], env)
        verts = list(range(start, end + 1))
        chains[chain["name"]] = verts
        for u, v in zip(verts, verts[1:]):
            add_edge(u, v, -1)

    def resolve(ref: str | int) -> int | None:
        if isinstance(ref, str):
            match = _CHAIN_REF.match(ref)
            if match:
                verts = chains[match.group(1)]
                idx = int(match.group(2))
                return verts[idx] if -len(verts) <= idx < len(verts) else None
        return eval_expr(ref, env)

    for raw in cat["core_edges"] + entry["edges"]:
        i, j = resolve(raw[0]), resolve(raw[1])
        if i is None or j is None:
            continue  # edge to an empty chain
        add_edge(i, j, raw[2])

    betas = []
    for beta in entry["betas"]:
        vec = [0] * mu
        for k, c in beta.items():
            vec[eval_expr(k, env) - 1] = c
        betas.append(tuple(vec))

    return FamilySpec(
        key=series,
        label=entry["label"],
        series=series,
        p=p,
        mu=mu,
        edges=tuple(sorted((i, j, s) for (i, j), s in edges.items())),
        betas=tuple(betas),
        b=tuple(_b_indices(rule, env) for rule in entry["b"]),
        m=entry["m"],
        r_I=entry["rI"],
    )


def family_spec(name: str, p: int | None = None) -> FamilySpec:
    """Catalog entry for a series at parameter p, or a quadrangle family."""
    key = canonical_name(name)
    cat = load_catalog()
    if key in cat.get("quadrangles", {}):
        entry = cat["quadrangles"][key]
        base = _series_spec(entry["base"], 0)
        return FamilySpec(
            key=key,
            label=entry["label"],
            series=entry["base"],
            p=0,
            mu=base.mu,
            edges=base.edges,
            betas=base.betas,
            b=base.b,
            m=base.m,
            r_I=base.r_I,
            quadrangle=True,
            weights=tuple(Fraction(w) for w in entry["weights"]),
            triangle=tuple(entry["triangle"]),
            group=entry["group"],
            kappa_data=entry.get("kappa"),
        )
    if p is None:
        raise ValueError(f"series {key} needs a parameter p")
    min_p = cat["series"][key].get("min_p", 0)
    if p < max(min_p, 0):
        raise ValueError(f"series {key} needs p >= {max(min_p, 1)}")
    return _series_spec(key, p)


def all_series_specs(p_values: Sequence[int]) -> list[FamilySpec]:
    return [family_spec(s, p) for s in SERIES_KEYS for p in p_values]


def all_quadrangle_specs() -> list[FamilySpec]:
    return [family_spec(k) for k in QUADRANGLE_KEYS]


def stokes_matrix(spec: FamilySpec) -> list[list[int]]:
    n = spec.mu
    out = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j, s in spec.edges:
        out[i - 1][j - 1] = s
    return out


def expected_action(spec: FamilySpec) -> dict[int, list[int]]:
    """The catalog's images M(e_k), keyed by k (1-based), as full vectors."""
    cat = load_catalog()
    entry = cat["series"][spec.series]
    env: dict[str, int] = {"p": spec.p}
    for var, expr in entry.get("vars", {}).items():
        env[var] = eval_expr(expr, env)
    mu = spec.mu
    images: dict[int, list[int]] = {}

    def unit(k: int) -> list[int]:
        vec = [0] * mu
        vec[k - 1] = 1
        return vec

    for rule in entry["action"]:
        if "shift" in rule:
            lo, hi = (eval_expr(x, env) for x in rule["shift"])
            for k in range(lo, hi + 1):
                images[k] = unit(k + 1)
            continue
        src = eval_expr(rule["from"], env)
        vec = [0] * mu
        for k, c in rule.get("to", {}).items():
            vec[eval_expr(k, env) - 1] += c
        if "minus_sum" in rule:
            lo, hi = (eval_expr(x, env) for x in rule["minus_sum"])
            for k in range(lo, hi + 1):
                vec[k - 1] -= 1
        images[src] = vec
    return images


@lru_cache(maxsize=512)
def _build_lattice(spec: FamilySpec) -> SeifertLattice:
    lat = lattice_from_stokes(stokes_matrix(spec))
    expected = expected_action(spec)
    for k in range(1, spec.mu + 1):
        actual = [lat.M[i][k - 1] for i in range(spec.mu)]
        if k not in expected or expected[k] != actual:
            raise CatalogMismatchError(spec.name, k, expected.get(k, []), actual)
    return lat


def family_lattice(spec: FamilySpec) -> SeifertLattice:
    """The Milnor lattice of the family, checked against its action list."""
    return _build_lattice(spec)


def expected_invariants(spec: FamilySpec) -> dict[str, Any]:
    return {
        "mu": spec.mu,
        "b": [list(ind) for ind in spec.b],
        "m": spec.m,
        "m2": spec.m2,
        "r_I": spec.r_I,
        "betas": [list(beta) for beta in spec.betas],
    }


def b5_indices(spec: FamilySpec) -> tuple[int, ...]:
    """Cyclotomic indices of b_1 / Phi_m."""
    ind = list(spec.b[0])
    ind.remove(spec.m)
    return tuple(ind)


def b6_indices(spec: FamilySpec) -> tuple[int, ...]:
    """Cyclotomic indices of b_2 / Phi_m (needs Phi_m | b_2)."""
    ind = list(spec.b[1])
    if spec.m not in ind:
        raise ValueError(f"Phi_{spec.m} does not divide b_2 for {spec.name}")
    ind.remove(spec.m)
    return tuple(ind)


# ---------------------------------------------------------------------------
# Spectra


@dataclass(frozen=True)
class SpectrumMultiset:
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(sorted(Fraction(v) for v in self.values)))

    def __len__(self) -> int:
        return len(self.values)

    def is_symmetric(self) -> bool:
        vals = self.values
        return all(vals[i] + vals[-1 - i] == 1 for i in range(len(vals)))

    def in_range(self) -> bool:
        return all(-1 < v < 2 for v in self.values)

    def as_strings(self) -> list[str]:
        return [str(v) for v in self.values]


class SpectrumError(ValueError):
    """The weight product or eigenvalue assignment does not give a spectrum."""


def spectrum_from_weights(weights: Sequence[Fraction | str]) -> SpectrumMultiset:
    """Exponents from prod_j (t - t^w_j) / (t^w_j - 1) = sum_i t^(alpha_i + 1)."""
    ws = [Fraction(w) for w in weights]
    if any(not 0 < w < 1 for w in ws):
        raise SpectrumError("weights must lie strictly between 0 and 1")
    denom_lcm = math.lcm(*(w.denominator for w in ws))
    numerator = IntPolynomial((1,))
    denominator = IntPolynomial((1,))
    for w in ws:
        a = int(w * denom_lcm)
        # (s^N - s^a) / (s^a - 1) with s = t^(1/N)
        numerator = numerator * (IntPolynomial.monomial(denom_lcm) - IntPolynomial.monomial(a))
        denominator = denominator * (IntPolynomial.monomial(a) - 1)
    quotient, remainder = numerator.divmod_monic(denominator)
    if not remainder.is_zero():
        raise SpectrumError("weight product is not a finite sum of powers")
    values = []
    for k, c in enumerate(quotient.coefficients):
        if c < 0:
            raise SpectrumError("weight product has a negative coefficient")
        values.extend([Fraction(k, denom_lcm) - 1] * c)
    return SpectrumMultiset(tuple(values))


def spectrum_from_factors(factors: Sequence[int], m: int) -> SpectrumMultiset:
    """Exponents in (0, 1) for each eigenvalue, then the two extreme copies moved out."""
    values: list[Fraction] = []
    for n in factors:
        for k in range(1, n + 1):
            if math.gcd(k, n) == 1:
                # eigenvalue exp(2 pi i k / n) = exp(-2 pi i alpha)
                alpha = 1 - Fraction(k, n) if k != n else None
                if alpha is None:
                    raise SpectrumError("eigenvalue 1 has no exponent in (0, 1)")
                values.append(alpha)
    low, high = 1 - Fraction(1, m), Fraction(1, m)
    if low not in values or high not in values:
        raise SpectrumError(f"primitive {m}-th roots of unity are not eigenvalues")
    values.remove(low)
    values.append(low - 1)
    values.remove(high)
    values.append(high + 1)
    return SpectrumMultiset(tuple(values))


def spectrum_from_charpoly(spec: FamilySpec) -> SpectrumMultiset:
    lat = family_lattice(spec)
    factors = factor_into_cyclotomics(lat.char_poly())
    if factors is None:
        raise SpectrumError("characteristic polynomial is not a product of cyclotomic polynomials")
    return spectrum_from_factors(factors, spec.m)


# ---------------------------------------------------------------------------
# Arithmetic layer of the quadrangle families


def hypergeom_params(m0: int, m1: int, minf: int) -> tuple[Fraction, Fraction, Fraction]:
    """(a, b, c) with (1 - c, c - a - b, a - b) = (1/m0, 1/m1, 1/minf)."""
    if min(m0, m1, minf) < 1:
        raise ValueError("orders must be positive integers")
    c = 1 - Fraction(1, m0)
    a_plus_b = c - Fraction(1, m1)
    a_minus_b = Fraction(1, minf)
    return (a_plus_b + a_minus_b) / 2, (a_plus_b - a_minus_b) / 2, c


def j_invariant(t1):
    """(4/27) (t^2 - t + 1)^3 / (t^2 (1 - t)^2) for rationals, cyclotomic elements or floats."""
    one = t1 * 0 + 1
    den = t1 * t1 * (one - t1) * (one - t1)
    if (hasattr(den, "is_zero") and den.is_zero()) or (not hasattr(den, "is_zero") and den == 0):
        raise PoleError("j-invariant has poles at t = 0 and t = 1")
    num = t1 * t1 - t1 + one
    return num * num * num * Fraction(4, 27) / den


G3_ELEMENTS = {
    "id": (),
    "1-t": ("sigma",),
    "1/t": ("tau",),
    "1/(1-t)": ("sigma", "tau"),
    "(t-1)/t": ("tau", "sigma"),
    "t/(t-1)": ("sigma", "tau", "sigma"),
}
G2_ELEMENTS = ("id", "1-t")


def apply_generator(gen: str, t1):
    one = t1 * 0 + 1
    if gen == "sigma":
        return one - t1
    if gen == "tau":
        return one / t1
    raise KeyError(gen)


def apply_word(word: Sequence[str], t1):
    """Apply the generators of ``word`` in order, first letter first."""
    for gen in word:
        t1 = apply_generator(gen, t1)
    return t1


def _kappa_generator(data: Mapping[str, Any], t1):
    one = t1 * 0 + 1
    if data["base"] == "t":
        base = t1
    elif data["base"] == "(1-t)/t":
        base = (one - t1) / t1
    else:
        raise ValueError(f"unknown kappa base {data['base']!r}")
    power = data["power"]
    value = one
    for _ in range(abs(power)):
        value = value * base
    if power < 0:
        value = one / value
    return value * data["coeff"]


def kappa_word(spec: FamilySpec, word: Sequence[str], t1):
    """kappa of the composite of ``word`` via kappa(g2 g1, t) = kappa(g1, t) kappa(g2, g1(t))."""
    if not spec.quadrangle or spec.kappa_data is None:
        raise GroupMismatchError(f"{spec.name} has no coordinate-change group")
    value = t1 * 0 + 1
    current = t1
    for gen in word:
        if gen not in spec.kappa_data:
            raise GroupMismatchError(f"generator {gen} is not in the group {spec.group} of {spec.name}")
        value = value * _kappa_generator(spec.kappa_data[gen], current)
        current = apply_generator(gen, current)
    return value


def kappa(spec: FamilySpec, element: str, t1):
    """kappa(g, t1) for g named as in :data:`G3_ELEMENTS`."""
    if element not in G3_ELEMENTS:
        raise KeyError(f"unknown group element {element!r}")
    if spec.group == "G2" and element not in G2_ELEMENTS:
        raise GroupMismatchError(f"{element} is not in G2 (family {spec.name})")
    return kappa_word(spec, G3_ELEMENTS[element], t1)
