"""Command-line entry point ``mlk``.

Every subcommand builds a report: the echoed command, a list of checks
(id, status, expected, actual, anchor) sorted by id, and a data section.
Reports are JSON by default; ``--format csv`` renders the checks as rows.
The exit status is 0 when every check passes, 1 when one fails and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import families as fam
from . import fuchsian as fu
from . import herm
from . import orlik
from .cyclo import (
    CycloElement,
    IntPolynomial,
    cyclotomic_poly,
    factor_into_cyclotomics,
    is_unit,
    parse_element,
    real_sign,
    to_p1_coordinates,
    units_mod,
)
from .lattice import is_form_automorphism, lattice_from_stokes

DEFAULT_DIGITS = 30
DEFAULT_SEED = 20240601


class UsageError(Exception):
    """Bad arguments; mapped to exit status 2."""


@dataclass
class Report:
    command: list[str]
    checks: list[dict[str, Any]] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    def check(self, check_id: str, expected: Any, actual: Any, anchor: str, passed: bool | None = None) -> bool:
        ok = (expected == actual) if passed is None else passed
        self.checks.append(
            {"id": check_id, "status": "pass" if ok else "fail", "expected": _plain(expected), "actual": _plain(actual), "anchor": anchor}
        )
        return ok

    @property
    def exit_status(self) -> int:
        return 0 if all(c["status"] == "pass" for c in self.checks) else 1

    def as_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "checks": sorted(self.checks, key=lambda c: c["id"]),
            "data": _plain(self.data),
            "exit_status": self.exit_status,
        }

    def render(self, fmt: str) -> str:
        payload = self.as_dict()
        if fmt == "json":
            return json.dumps(payload, indent=2, sort_keys=True)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["id", "status", "expected", "actual", "anchor"])
        for c in payload["checks"]:
            writer.writerow([c["id"], c["status"], json.dumps(c["expected"]), json.dumps(c["actual"]), c["anchor"]])
        return buffer.getvalue()


def _plain(value: Any) -> Any:
    """JSON-friendly copy: fractions and cyclotomic elements become strings."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (Fraction, CycloElement, IntPolynomial)):
        return str(value)
    if isinstance(value, complex):
        return [round(value.real, 12), round(value.imag, 12)]
    return value


def _digits(args: argparse.Namespace) -> int:
    if args.digits is not None:
        return args.digits
    env = os.environ.get("MLK_DIGITS")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"MLK_DIGITS must be an integer, got {env!r}") from exc
    return DEFAULT_DIGITS


def _spec(name: str, p: int | None) -> fam.FamilySpec:
    try:
        return fam.family_spec(name, p)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Subcommands


def cmd_verify_family(args: argparse.Namespace, report: Report) -> None:
    spec = _spec(args.series, args.p)
    report.data.update({"family": spec.name, "mu": spec.mu, "m": spec.m, "m2": spec.m2, "r_I": spec.r_I})
    try:
        lat = fam.family_lattice(spec)
    except fam.CatalogMismatchError as exc:
        report.check("monodromy action list", "match", str(exc), "action lists of the distinguished basis")
        return
    report.check("monodromy action list", "match", "match", "action lists of the distinguished basis")
    expected = sorted((n for ind in spec.b for n in ind), reverse=True)
    actual = factor_into_cyclotomics(lat.char_poly())
    report.check("characteristic polynomial", expected, sorted(actual or (), reverse=True), "product of the b_j")
    report.check("mu", spec.mu, lat.rank, "Milnor number")
    for result in orlik.verify_decomposition(lat, spec.betas, fam.expected_invariants(spec)):
        report.check(f"orlik: {result.check}", result.expected, result.actual, "Orlik block decomposition", result.passed)
    for j, ind in enumerate(spec.b, start=1):
        ok, _ = orlik.lemma28_applicable(ind)
        report.check(f"block {j} orders admit a prime-power chain", True, ok, "prime-power chain lemma")
    if not spec.quadrangle and spec.p % spec.m == 0:
        blocks = [orlik.make_orlik_block(lat, beta) for beta in spec.betas[:2]]
        index = orlik.eigen_index(lat, blocks, cyclotomic_poly(spec.m))
        report.check("Phi_m eigenlattice splits over B1 + B2", 1, index, "eigenlattice splitting for m | p")
    spectrum = fam.spectrum_from_charpoly(spec)
    values = spectrum.values
    second = Fraction(1, spec.m) if spec.quadrangle else Fraction(1, spec.m2)
    report.check(
        "spectrum extremes",
        [Fraction(-1, spec.m), second, 1 - second, 1 + Fraction(1, spec.m)],
        [values[0], values[1], values[-2], values[-1]],
        "spectral extremes",
    )
    report.check("spectrum symmetric", True, spectrum.is_symmetric(), "spectral symmetry")
    report.data["spectrum"] = spectrum.as_strings()


def cmd_monodromy(args: argparse.Namespace, report: Report) -> None:
    spec = _spec(args.series, args.p)
    lat = lattice_from_stokes(fam.stokes_matrix(spec))
    expected = fam.expected_action(spec)
    images = {}
    for k in range(1, spec.mu + 1):
        column = [lat.M[i][k - 1] for i in range(spec.mu)]
        images[f"e{k}"] = _format_vector(column)
        report.check(f"M(e{k:03d})", _format_vector(expected.get(k, [])), images[f"e{k}"], "monodromy action list")
    report.data.update({"family": spec.name, "images": images})


def _format_vector(vec: Sequence[int]) -> str:
    terms = []
    for i, c in enumerate(vec, start=1):
        if c:
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            terms.append(f"{sign}{mag}e{i}")
    if not terms:
        return "0"
    text = "".join(terms)
    return text[1:] if text.startswith("+") else text


def cmd_herm_table(args: argparse.Namespace, report: Report) -> None:
    digits = _digits(args)
    try:
        series = fam.canonical_name(args.series)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    if series in fam.QUADRANGLE_KEYS:
        spec = _spec(series, None)
        r = 0
        key = spec.series
    else:
        if args.r is None or args.r < 1:
            raise UsageError("herm-table for a series needs --r >= 1")
        r = args.r
        spec = _spec(series, _series_p(series, r))
        key = series
    m = spec.m
    rows = []
    for k in units_mod(m):
        data = herm.eigen_data(spec, k)
        w = -data.h22.u / data.h11.u
        rows.append({"xi": f"zeta^{k}", "w": str(w), "h11_sign": herm.herm_sign(data.h11, digits), "h22_sign": herm.herm_sign(data.h22, digits)})
        report.check(f"w(zeta^{k:02d}) closed form", herm.closed_form_w(key, k, m, r), w, "table of w(xi)")
        report.check(f"h11(zeta^{k:02d}) closed form", herm.closed_form_h11(key, k, m), data.h11.u, "table of h(v1, v1)")
        report.check(f"h22(zeta^{k:02d}) closed form", herm.closed_form_h22(spec.r_I, m, r, k), data.h22.u, "h(v2, v2)")
        report.check(f"h12(zeta^{k:02d}) vanishes", True, data.h12.u.is_zero(), "orthogonality of the blocks")
        special = k % m in (1, m - 1)
        report.check(f"h11(zeta^{k:02d}) sign", -1 if special else 1, rows[-1]["h11_sign"], "signs of h(v1, v1)")
        report.check(f"h22(zeta^{k:02d}) sign", 1, rows[-1]["h22_sign"], "signs of h(v2, v2)")
        report.check(f"w(zeta^{k:02d}) sign", 1 if special else -1, real_sign(w, 1, digits), "signs of w(xi)")
        report.check(f"L(v1, beta1)(zeta^{k:02d}) is a unit", True, is_unit(data.L_v1_beta1), "units of Z[zeta]")
    report.data.update({"family": spec.name, "m": m, "r": r, "rows": rows})


def _series_p(series: str, r: int) -> int:
    """p = m r for the subseries with m | p."""
    return fam.load_catalog()["series"][series]["m"] * r


def cmd_triangle(args: argparse.Namespace, report: Report) -> None:
    try:
        case = fu.triangle_case(args.case)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    digits = _digits(args)
    elements = {"A1": case.a1, "A2": case.a2, "A1A2": case.a1 * case.a2}
    orders = {}
    for label, element in elements.items():
        report.check(f"{label} in Gamma", True, fu.gamma_membership(element), "membership")
        data = fu.elliptic_data(element, digits)
        orders[label] = data.order
        report.data[label] = {"angle_turns": data.angle_turns, "order": data.order, "fixed_point": data.fixed_point, "eigen_turns": list(data.eigen_turns)}
    report.check("A1 angle", Fraction(1, case.m), report.data["A1"]["angle_turns"], "rotation angle of A1")
    report.check("A2 angle", Fraction(1, 2), report.data["A2"]["angle_turns"], "rotation angle of A2")
    report.check("A1A2 eigenvalues", list(case.product_eigen_turns), report.data["A1A2"]["eigen_turns"], "eigenvalues of A1A2")
    report.check("triangle type", list(case.triangle_type), sorted(orders.values()), "triangle group type")
    ok, audits = fu.verify_step2_minimality(case)
    found = [list(a.coordinates) for a in audits]
    report.check("step 2 candidates all excluded", True, ok, "candidate exclusion by norms")
    report.check("step 2 candidate list", [list(c) for c in case.step2_candidates], found, "listed candidates")
    report.check("star inequality", True, fu.star_margin(case) > 0, "constant check in the reduction")
    rng = random.Random(args.seed)
    lengths = []
    for i in range(args.samples):
        element = fu.random_word(case, rng.randint(0, 12), rng)
        word = fu.reduce_word(element, case)
        decreasing = all(x > y for x, y in zip(word.c_history, word.c_history[1:]))
        lengths.append(word.a2_count())
        report.check(f"reduction {i:03d}", True, decreasing and word.evaluate(case) == element, "word reduction")
    report.data.update(
        {
            "case": case.name,
            "m": case.m,
            "w": case.w,
            "orders": [orders["A2"], orders["A1A2"], orders["A1"]],
            "star_margin": round(fu.star_margin(case), 12),
            "step2": [{"f": list(a.coordinates), "norm_f_minus_1": a.norm_f_minus_one, "quotient": a.quotient} for a in audits],
            "reduction_a2_counts": lengths,
        }
    )


def cmd_pell(args: argparse.Namespace, report: Report) -> None:
    try:
        w = parse_element(args.w, args.m)
    except (ValueError, SyntaxError) as exc:
        raise UsageError(f"cannot parse w: {exc}") from exc
    try:
        solutions = fu.pell_solve(w, args.height)
    except fu.PreconditionError as exc:
        raise UsageError(str(exc)) from exc
    rows = []
    for sol in solutions:
        rows.append(sol.coordinates())
        report.check(f"pell {rows[-1]['a']} {rows[-1]['c']}", True, sol.a * sol.a - 1 == w * sol.c * sol.c, "Pell identity")
    report.data.update({"m": args.m, "w": to_p1_coordinates(w), "height": args.height, "solutions": rows})


def cmd_gz(args: argparse.Namespace, report: Report) -> None:
    try:
        series = fam.canonical_name(args.series)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    if series in fam.QUADRANGLE_KEYS or args.r < 1:
        raise UsageError("gz needs a series and --r >= 1")
    spec = _spec(series, _series_p(series, args.r))
    data = fu.pell_data(spec)
    solutions, method = fu.divisible_solutions(data.w0, args.height, args.count)
    lat = fam.family_lattice(spec)
    decomposition = orlik.decompose(lat, spec.betas)
    matrices = []
    rows = []
    for i, lifted in enumerate(solutions):
        element = fu.gz_from_pell(spec, lifted)
        matrices.append(element.matrix)
        tag = f"g{i:02d}"
        report.check(f"{tag} preserves L", True, is_form_automorphism(lat, element.matrix), "automorphism of the Seifert form")
        report.check(f"{tag} outside +-M^k", True, not fu.is_plus_minus_monodromy_power(lat, element.matrix), "nontrivial element")
        if len(spec.betas) == 2:
            quotients = orlik.decompose_automorphism(lat, element.matrix, decomposition).quotients(cyclotomic_poly(spec.m))
            same = [list(r) for r in element.q] == quotients
            report.check(f"{tag} q_ij round trip", True, same, "polynomials q_ij")
        rows.append(
            {
                "a": [str(x) for x in to_p1_coordinates(lifted.a)],
                "f": [str(x) for x in to_p1_coordinates(lifted.c)],
                "max_entry": max(abs(x) for row in element.matrix for x in row),
            }
        )
    report.check("distinct elements", len(matrices), len(set(matrices)), "injectivity of the construction")
    report.check("at least one element", True, bool(matrices), "existence of Pell solutions")
    if args.matrices:
        report.data["matrices"] = [[list(r) for r in g] for g in matrices]
    report.data.update({"family": spec.name, "w0": to_p1_coordinates(data.w0), "method": method, "elements": rows})


def cmd_spectra(args: argparse.Namespace, report: Report) -> None:
    spec = _spec(args.family, args.p)
    methods = ["weights", "charpoly"] if args.method == "both" else [args.method]
    results = {}
    for method in methods:
        if method == "weights":
            if spec.weights is None:
                raise UsageError("the weights method needs a quadrangle family")
            results[method] = fam.spectrum_from_weights(spec.weights)
        else:
            results[method] = fam.spectrum_from_charpoly(spec)
        report.check(f"{method} symmetric", True, results[method].is_symmetric(), "spectral symmetry")
        report.check(f"{method} in range", True, results[method].in_range(), "spectral range")
    if len(results) == 2:
        report.check("methods agree", results["weights"].as_strings(), results["charpoly"].as_strings(), "two independent methods")
    report.data.update({"family": spec.name, "spectra": {k: v.as_strings() for k, v in results.items()}})


def cmd_catalog(args: argparse.Namespace, report: Report) -> str | None:
    if not args.dump:
        raise UsageError("catalog needs --dump")
    return fam.catalog_text()


# ---------------------------------------------------------------------------
# Argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--digits", type=int, default=None, help="numeric precision (env MLK_DIGITS)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--catalog", default=None, help="alternative catalog JSON file")

    parser = _Parser(prog="mlk", description="Milnor lattice and Fuchsian group computations", parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("verify-family", parents=[common], help="construction, Orlik blocks, spectrum")
    p.add_argument("--series", required=True)
    p.add_argument("--p", type=int, default=None)
    p.set_defaults(handler=cmd_verify_family)

    p = sub.add_parser("monodromy", parents=[common], help="action of M on the distinguished basis")
    p.add_argument("--series", required=True)
    p.add_argument("--p", type=int, default=None)
    p.set_defaults(handler=cmd_monodromy)

    p = sub.add_parser("herm-table", parents=[common], help="hermitian forms and w(xi)")
    p.add_argument("--series", required=True)
    p.add_argument("--r", type=int, default=None)
    p.set_defaults(handler=cmd_herm_table)

    p = sub.add_parser("triangle", parents=[common], help="elliptic data, candidate audit, reductions")
    p.add_argument("--case", required=True, choices=sorted(set(fu.TRIANGLE_CASES) | {"U10"}))
    p.add_argument("--samples", type=int, default=20)
    p.set_defaults(handler=cmd_triangle)

    p = sub.add_parser("pell", parents=[common], help="solve a^2 - 1 = w c^2 over Z[p1]")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--w", required=True, help="expression in z and p1, p2, ...")
    p.add_argument("--height", type=int, default=20)
    p.set_defaults(handler=cmd_pell)

    p = sub.add_parser("gz", parents=[common], help="automorphisms from Pell solutions")
    p.add_argument("--series", required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--height", type=int, default=30)
    p.add_argument("--count", type=int, default=4)
    p.add_argument("--matrices", action="store_true", help="include the full matrices")
    p.set_defaults(handler=cmd_gz)

    p = sub.add_parser("spectra", parents=[common], help="spectral numbers")
    p.add_argument("--family", required=True)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--method", choices=("weights", "charpoly", "both"), default="both")
    p.set_defaults(handler=cmd_spectra)

    p = sub.add_parser("catalog", parents=[common], help="print the family catalog")
    p.add_argument("--dump", action="store_true")
    p.set_defaults(handler=cmd_catalog)
    return parser


def run(argv: Sequence[str]) -> tuple[str, int]:
    """Execute a command line and return (output text, exit status)."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if args.command is None:
            raise UsageError("missing subcommand")
        if args.digits is not None and args.digits < 5:
            raise UsageError("--digits must be at least 5")
        fam.set_catalog_path(args.catalog)
        try:
            try:
                fam.load_catalog()
            except (OSError, ValueError) as exc:
                raise UsageError(f"cannot read catalog {args.catalog}: {exc}") from exc
            report = Report(command=["mlk", *argv])
            handler: Callable[..., Any] = args.handler
            text = handler(args, report)
        finally:
            if args.catalog is not None:
                fam.set_catalog_path(None)
    except UsageError as exc:
        return f"mlk: error: {exc}\n", 2
    if isinstance(text, str):
        return text + "\n", 0
    return report.render(args.format) + ("" if args.format == "csv" else "\n"), report.exit_status


def main(argv: Sequence[str] | None = None) -> int:
    output, status = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if status == 2 else sys.stdout
    stream.write(output)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
