"""Command-line entry point.

Exit codes: 0 success, 1 mathematical failure (not flat, not a complex,
failed validation, singular Phi), 2 input error.
"""
from __future__ import annotations

import argparse
import sys

from .bundle import check_cone_flat, phi_det_poly
from .errors import (
    CocycleError,
    ModelFormatError,
    ModelParseError,
    PreconditionError,
    SingularMatrixError,
    ValidationError,
    VanishingFailure,
)
from .io import builtin_models, load_model
from .model import validate_model
from .vanishing import (
    FlatResult,
    ModelsResult,
    SweepResult,
    ValidateResult,
    cohomology_result,
    contract_result,
    render_json,
    render_report,
    sweep,
    threshold,
)

OK, MATH_FAILURE, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _bundle(bundles, name):
    if name not in bundles:
        known = ", ".join(sorted(bundles)) or "(none)"
        raise InputError(f"unknown bundle {name!r}; available: {known}")
    return bundles[name]


def cmd_validate(args):
    spec, bundles = load_model(args.file, validate=False)
    return ValidateResult(spec, validate_model(spec), list(bundles))


def cmd_check_flat(args):
    spec, bundles = load_model(args.file)
    return FlatResult(spec.name, args.bundle, check_cone_flat(_bundle(bundles, args.bundle), spec))


def cmd_cohomology(args):
    spec, bundles = load_model(args.file)
    return cohomology_result(spec, args.bundle, _bundle(bundles, args.bundle))


def cmd_sweep(args):
    spec, bundles = load_model(args.file)
    e, l = _bundle(bundles, args.e), _bundle(bundles, args.l)
    if l.rank != 1:
        raise InputError(f"--l must name a line bundle; {args.l!r} has rank {l.rank}")
    if args.max_n < 0:
        raise InputError("--max-n must be nonnegative")
    rows = sweep(e, l, spec, args.max_n, args.dims, names=(args.e, args.l))
    return SweepResult(spec.name, args.e, args.l, phi_det_poly(e, l), threshold(e, l), rows)


def cmd_contract(args):
    spec, bundles = load_model(args.file)
    b = _bundle(bundles, args.bundle)
    degrees = None
    if args.degree is not None:
        if not 0 <= args.degree <= spec.m + 1:
            raise InputError(f"--degree must lie in 0..{spec.m + 1}")
        degrees = [args.degree]
    return contract_result(spec, args.bundle, b, degrees)


def cmd_models(args):
    entries = []
    for name in builtin_models():
        spec, bundles = load_model(name)
        entries.append((name, spec.m, spec.description, sorted(bundles)))
    return ModelsResult(entries)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primcoh",
        description="Twisted primitive (mapping-cone) cohomology of cone-flat bundles on invariant models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("text", "json"), default="text")
        return p

    p = add("validate", cmd_validate, "check d^2 = 0, d(eta) = 0 and nondegeneracy")
    p.add_argument("file", help="model file, or a built-in / PRIMCOH_MODEL_PATH name")

    p = add("check-flat", cmd_check_flat, "check cone flatness of one bundle")
    p.add_argument("file")
    p.add_argument("--bundle", required=True)

    p = add("cohomology", cmd_cohomology, "cohomology dimensions of the cone complex")
    p.add_argument("file")
    p.add_argument("--bundle", required=True)

    p = add("sweep", cmd_sweep, "determinant and cohomology of E (x) L^n for n = 0..K")
    p.add_argument("file")
    p.add_argument("--e", required=True, help="bundle E")
    p.add_argument("--l", required=True, help="line bundle L")
    p.add_argument("--max-n", type=int, default=10, dest="max_n")
    p.add_argument("--dims", action="store_true", help="also compute cohomology dimensions")

    p = add("contract", cmd_contract, "contract every kernel-basis cocycle and check the round trip")
    p.add_argument("file")
    p.add_argument("--bundle", required=True)
    p.add_argument("--degree", type=int, default=None)

    add("models", cmd_models, "list built-in models")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except (InputError, FileNotFoundError, ModelParseError, ModelFormatError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (PreconditionError, SingularMatrixError, CocycleError, VanishingFailure) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return MATH_FAILURE
    out = render_json(result) if args.format == "json" else render_report(result)
    sys.stdout.write(out)
    return OK if result.ok else MATH_FAILURE


if __name__ == "__main__":
    sys.exit(main())
