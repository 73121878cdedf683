"""Sweeps over tensor powers E (x) L^n, invertibility thresholds and reports."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .bundle import BundleData, FlatnessReport, check_cone_flat, phi_det_poly, tensor_power
from .cone import assemble, cocycle_basis, cohomology_dims, contract, phi_inverse, verify_complex
from .errors import PreconditionError, VanishingFailure
from .linalg import RatPoly, det
from .model import ModelSpec, ValidationReport


@dataclass(frozen=True)
class SweepRow:
    n: int
    det_phi: Fraction
    invertible: bool
    dims: tuple | None = None

    def __post_init__(self):
        if self.invertible != (self.det_phi != 0):
            raise ValueError("invertible must agree with det_phi != 0")


def threshold(e: BundleData, l: BundleData) -> int | None:
    """Smallest n0 >= 0 with det(Phi^E + n f I) != 0 for all integers n >= n0.

    Returns None ("never") when the determinant polynomial vanishes identically.
    """
    poly = phi_det_poly(e, l)
    if poly.is_zero():
        return None
    roots = [x for x in poly.integer_roots() if x >= 0]
    return max(roots) + 1 if roots else 0


def sweep(e: BundleData, l: BundleData, spec: ModelSpec, n_max: int = 10,
          compute_dims: bool = False, names=("E", "L")) -> list:
    for b, name in zip((e, l), names):
        report = check_cone_flat(b, spec)
        if not report.passed:
            raise PreconditionError(f"bundle {name!r} is not cone-flat for eta = {spec.eta}")
    poly = phi_det_poly(e, l)
    rows = []
    for n in range(n_max + 1):
        d = poly(n)
        dims = None
        if compute_dims:
            dims = tuple(cohomology_dims(assemble(tensor_power(e, l, n), spec)))
            if d != 0 and any(dims):
                raise VanishingFailure(f"n = {n}: Phi invertible but cohomology is {dims}")
        rows.append(SweepRow(n, d, d != 0, dims))
    return rows


# results --------------------------------------------------------------------

@dataclass
class ValidateResult:
    spec: ModelSpec
    report: ValidationReport
    bundle_names: list = field(default_factory=list)

    @property
    def ok(self):
        return self.report.passed


@dataclass
class FlatResult:
    model: str
    bundle: str
    report: FlatnessReport

    @property
    def ok(self):
        return self.report.passed


@dataclass
class CohomologyResult:
    model: str
    bundle: str
    rank: int
    flat: bool
    is_complex: bool
    det_phi: Fraction
    dims: list | None

    @property
    def ok(self):
        return self.is_complex

    @property
    def vanishes(self):
        return self.dims is not None and not any(self.dims)


@dataclass
class SweepResult:
    model: str
    e: str
    l: str
    poly: RatPoly
    threshold: int | None
    rows: list

    ok = True


@dataclass
class ContractResult:
    model: str
    bundle: str
    det_phi: Fraction
    degrees: list  # (degree, kernel dimension, round trips that succeeded)

    @property
    def ok(self):
        return all(k == s for _, k, s in self.degrees)


@dataclass
class ModelsResult:
    entries: list  # (name, m, description, bundle names)

    ok = True


def cohomology_result(spec: ModelSpec, name: str, b: BundleData) -> CohomologyResult:
    c = assemble(b, spec)
    good = verify_complex(c)
    dims = cohomology_dims(c) if good else None
    return CohomologyResult(spec.name, name, b.rank, c.flatness_certificate.passed, good, det(b.Phi), dims)


def contract_result(spec: ModelSpec, name: str, b: BundleData, degrees=None) -> ContractResult:
    """Contract every kernel-basis cocycle; raises SingularMatrixError if Phi is singular."""
    c = assemble(b, spec)
    phi_inv = phi_inverse(c)
    if degrees is None:
        degrees = range(spec.m + 2)
    out = []
    for i in degrees:
        basis = cocycle_basis(c, i)
        ok = 0
        for z in basis:
            contract(c, z, phi_inv)
            ok += 1
        out.append((i, len(basis), ok))
    return ContractResult(spec.name, name, det(b.Phi), out)


# rendering --------------------------------------------------------------------

def _table(header, rows) -> list:
    cells = [list(map(str, header))] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    fmt = lambda r: "  ".join(x.rjust(w) for x, w in zip(r, widths)).rstrip()
    lines = [fmt(cells[0]), "  ".join("-" * w for w in widths)]
    lines += [fmt(r) for r in cells[1:]]
    return lines


def _dims(dims) -> str:
    return "(" + ", ".join(map(str, dims)) + ")" if dims is not None else "-"


def render_report(result) -> str:
    """Plain-text rendering of any result object; deterministic."""
    if isinstance(result, list):
        result = SweepResult("", "", "", RatPoly(), None, result)
    lines: list = []
    if isinstance(result, ValidateResult):
        s = result.spec
        lines.append(f"model: {s.name}  (m = {s.m})")
        lines.append(f"eta: {s.eta}")
        lines.append(f"symplectic: {'yes' if s.symplectic else 'no'}")
        lines += _table(["check", "result", "detail"],
                        [(lbl, "pass" if ok else "FAIL", det_ or "") for lbl, ok, det_ in result.report.checks])
        lines.append(f"bundles: {', '.join(result.bundle_names) if result.bundle_names else '(none)'}")
        lines.append(f"VALID: {'yes' if result.ok else 'no'}")
    elif isinstance(result, FlatResult):
        r = result.report
        lines.append(f"model: {result.model}  bundle: {result.bundle}")
        lines.append(f"curvature + eta*Phi = 0: {'pass' if not r.curvature_failures else 'FAIL'}")
        for (i, j), res in r.curvature_failures:
            lines.append(f"  entry ({i},{j}) residual {res}")
        lines.append(f"A Phi - Phi A = 0: {'pass' if not r.commutator_failures else 'FAIL'}")
        for (i, j), res in r.commutator_failures:
            lines.append(f"  entry ({i},{j}) residual {res}")
        lines.append(f"CONE-FLAT: {'yes' if r.passed else 'no'}")
    elif isinstance(result, CohomologyResult):
        lines.append(f"model: {result.model}  bundle: {result.bundle}  rank: {result.rank}")
        lines.append(f"cone-flat: {'yes' if result.flat else 'no'}")
        lines.append(f"det Phi: {result.det_phi}")
        if not result.is_complex:
            lines.append("COMPLEX: no (operator does not square to zero)")
        else:
            lines += _table(["degree", "dim"], list(enumerate(result.dims)))
            lines.append(f"euler characteristic: {sum((-1) ** i * h for i, h in enumerate(result.dims))}")
            lines.append(f"VANISHES: {'yes' if result.vanishes else 'no'}")
    elif isinstance(result, SweepResult):
        if result.model:
            lines.append(f"model: {result.model}  E: {result.e}  L: {result.l}")
            lines.append(f"det(Phi^E + n f I) = {result.poly}")
            lines.append(f"threshold: {'never' if result.threshold is None else result.threshold}")
        lines += _table(["n", "det", "invertible", "dims"],
                        [(r.n, r.det_phi, "yes" if r.invertible else "no", _dims(r.dims)) for r in result.rows])
    elif isinstance(result, ContractResult):
        lines.append(f"model: {result.model}  bundle: {result.bundle}")
        lines.append(f"det Phi: {result.det_phi}")
        lines += _table(["degree", "cocycles", "contracted"], result.degrees)
        lines.append(f"ROUND-TRIP: {'ok' if result.ok else 'FAILED'}")
    elif isinstance(result, ModelsResult):
        lines += _table(["name", "m", "bundles", "description"],
                        [(n, m, ",".join(bs), d) for n, m, d, bs in result.entries])
    else:
        raise TypeError(f"cannot render {type(result).__name__}")
    return "\n".join(lines) + "\n"


def report_dict(result) -> dict:
    q = str
    if isinstance(result, ValidateResult):
        s = result.spec
        return {
            "command": "validate", "model": s.name, "m": s.m, "eta": str(s.eta),
            "symplectic": s.symplectic, "bundles": result.bundle_names,
            "checks": [{"check": lbl, "pass": ok, "detail": d} for lbl, ok, d in result.report.checks],
            "valid": result.ok,
        }
    if isinstance(result, FlatResult):
        r = result.report
        return {
            "command": "check-flat", "model": result.model, "bundle": result.bundle,
            "curvature_failures": [{"entry": list(ij), "residual": str(res)} for ij, res in r.curvature_failures],
            "commutator_failures": [{"entry": list(ij), "residual": str(res)} for ij, res in r.commutator_failures],
            "cone_flat": r.passed,
        }
    if isinstance(result, CohomologyResult):
        return {
            "command": "cohomology", "model": result.model, "bundle": result.bundle,
            "rank": result.rank, "cone_flat": result.flat, "is_complex": result.is_complex,
            "det_phi": q(result.det_phi), "dims": result.dims, "vanishes": result.vanishes,
        }
    if isinstance(result, SweepResult):
        return {
            "command": "sweep", "model": result.model, "e": result.e, "l": result.l,
            "det_poly": [q(c) for c in result.poly.coeffs], "threshold": result.threshold,
            "rows": [
                {"n": r.n, "det_phi": q(r.det_phi), "invertible": r.invertible,
                 "dims": list(r.dims) if r.dims is not None else None}
                for r in result.rows
            ],
        }
    if isinstance(result, ContractResult):
        return {
            "command": "contract", "model": result.model, "bundle": result.bundle,
            "det_phi": q(result.det_phi),
            "degrees": [{"degree": i, "cocycles": k, "contracted": s} for i, k, s in result.degrees],
            "round_trip": result.ok,
        }
    if isinstance(result, ModelsResult):
        return {"command": "models", "models": [
            {"name": n, "m": m, "description": d, "bundles": bs} for n, m, d, bs in result.entries
        ]}
    raise TypeError(f"cannot serialize {type(result).__name__}")


def render_json(result) -> str:
    return json.dumps(report_dict(result), indent=2) + "\n"
