"""JSON model documents: one model plus named bundles, all coefficients exact.

Document layout::

    {
      "name": "kt", "m": 4, "symplectic": false,
      "d": [{"gen": 4, "terms": [["1", 1, 2]]}],
      "eta": [["1", 1, 2]],
      "bundles": {"line": {"rank": 1, "A": [[[["-1", 4]]]], "Phi": [["1"]]}}
    }

Coefficients are strings ``"p"`` or ``"p/q"`` (plain JSON integers are also
accepted).  Floats are rejected.
"""
from __future__ import annotations

import json
import os
import re
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .bundle import BundleData
from .errors import ModelFormatError, ModelParseError, ValidationError
from .linalg import RatMatrix
from .model import Form, ModelSpec, validate_model

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")
MODEL_PATH_ENV = "PRIMCOH_MODEL_PATH"


class _Doc:
    """Raw text kept around so value errors can point at a line and column."""

    def __init__(self, text: str):
        self.text = text

    def locate(self, token: str):
        needle = json.dumps(token) if isinstance(token, str) else str(token)
        pos = self.text.find(needle)
        if pos < 0:
            return None, None
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message: str, token=None) -> ModelParseError:
        line, col = self.locate(token) if token is not None else (None, None)
        return ModelParseError(message, line, col)


def parse_rational(value, doc: _Doc | None = None, where: str = "") -> Fraction:
    def fail(msg):
        full = f"{where}: {msg}" if where else msg
        if doc is not None:
            return doc.error(full, value)
        return ModelParseError(full)

    if isinstance(value, bool) or isinstance(value, float):
        raise fail(f"inexact coefficient {value!r}; write it as a \"p/q\" string")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.match(value):
        raise fail(f"malformed rational {value!r}")
    num, _, den = value.replace(" ", "").partition("/")
    if den and int(den) == 0:
        raise fail(f"zero denominator in {value!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction) -> str:
    return str(q)


def _expect(cond, doc, message, token=None):
    if not cond:
        raise doc.error(message, token)


def _int(value, doc, where):
    _expect(isinstance(value, int) and not isinstance(value, bool), doc,
            f"{where}: expected an integer, got {value!r}", value)
    return value


def parse_model(text: str, validate: bool = True):
    """Parse a JSON document into ``(ModelSpec, {name: BundleData})``."""
    doc = _Doc(text)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    _expect(isinstance(raw, dict), doc, "top level must be a JSON object")
    for key in ("name", "m"):
        _expect(key in raw, doc, f"missing required field {key!r}")
    name = raw["name"]
    _expect(isinstance(name, str), doc, "field 'name' must be a string")
    m = _int(raw["m"], doc, "m")
    _expect(m >= 0, doc, "field 'm' must be nonnegative")

    d = {}
    bad = []
    for entry in raw.get("d", []):
        _expect(isinstance(entry, dict) and "gen" in entry, doc, "each 'd' entry needs a 'gen' field")
        k = _int(entry["gen"], doc, "d.gen")
        terms = []
        for t in entry.get("terms", []):
            _expect(isinstance(t, list) and len(t) == 3, doc, f"d e{k}: terms are [coefficient, i, j]")
            c = parse_rational(t[0], doc, f"d e{k}")
            i, j = _int(t[1], doc, f"d e{k}"), _int(t[2], doc, f"d e{k}")
            if not (1 <= i < j <= m):
                bad.append((f"d e{k}", (t[0], i, j)))
            terms.append((c, i, j))
        if not 1 <= k <= m:
            bad.append(("d", f"generator {k} outside 1..{m}"))
            continue
        _expect(k not in d, doc, f"generator {k} has two 'd' entries")
        d[k] = terms

    eta_terms = []
    for t in raw.get("eta", []):
        _expect(isinstance(t, list) and len(t) == 3, doc, "eta terms are [coefficient, i, j]")
        c = parse_rational(t[0], doc, "eta")
        i, j = _int(t[1], doc, "eta"), _int(t[2], doc, "eta")
        if not (1 <= i < j <= m):
            bad.append(("eta", (t[0], i, j)))
        eta_terms.append((c, i, j))
    if bad:
        raise ModelFormatError(
            "malformed model terms: " + "; ".join(f"{w} {t}" for w, t in bad), bad
        )
    symplectic = raw.get("symplectic", False)
    _expect(isinstance(symplectic, bool), doc, "field 'symplectic' must be a boolean")
    spec = ModelSpec.build(name, m, d, eta_terms, symplectic, raw.get("description", ""))

    bundles = {}
    braw = raw.get("bundles", {})
    _expect(isinstance(braw, dict), doc, "field 'bundles' must be an object")
    for bname, b in braw.items():
        bundles[bname] = _parse_bundle(bname, b, m, doc)

    if validate:
        report = validate_model(spec)
        if not report.passed:
            raise ValidationError(
                f"model {name!r} fails validation: "
                + "; ".join(f"{label} ({detail})" for label, detail in report.failures()),
                report.failures(),
            )
    return spec, bundles


def _parse_bundle(bname, b, m, doc) -> BundleData:
    where = f"bundle {bname!r}"
    _expect(isinstance(b, dict), doc, f"{where} must be an object")
    for key in ("rank", "A", "Phi"):
        _expect(key in b, doc, f"{where} is missing {key!r}")
    r = _int(b["rank"], doc, where)
    _expect(r >= 1, doc, f"{where}: rank must be at least 1")
    A, Phi = b["A"], b["Phi"]
    _expect(isinstance(A, list) and len(A) == r and all(isinstance(row, list) and len(row) == r for row in A),
            doc, f"{where}: 'A' must be a {r}x{r} array")
    _expect(isinstance(Phi, list) and len(Phi) == r and all(isinstance(row, list) and len(row) == r for row in Phi),
            doc, f"{where}: 'Phi' must be a {r}x{r} array")
    rows = []
    bad = []
    for i, row in enumerate(A):
        out = []
        for j, terms in enumerate(row):
            _expect(isinstance(terms, list), doc, f"{where}: A[{i}][{j}] must be a term list")
            coeffs = {}
            for t in terms:
                _expect(isinstance(t, list) and len(t) == 2, doc, f"{where}: A terms are [coefficient, k]")
                c = parse_rational(t[0], doc, f"{where} A[{i}][{j}]")
                k = _int(t[1], doc, where)
                if not 1 <= k <= m:
                    bad.append((f"{where} A[{i}][{j}]", (t[0], k)))
                    continue
                coeffs[(k,)] = coeffs.get((k,), 0) + c
            out.append(Form.from_terms(m, 1, coeffs))
        rows.append(tuple(out))
    if bad:
        raise ModelFormatError(
            "bundle references unknown generators: " + "; ".join(f"{w} {t}" for w, t in bad), bad
        )
    phi = RatMatrix.from_rows(
        [[parse_rational(x, doc, f"{where} Phi[{i}]") for x in row] for i, row in enumerate(Phi)], cols=r
    )
    return BundleData(r, tuple(rows), phi)


def _terms2(form: Form) -> list:
    return [[format_rational(c), i, j] for (i, j), c in form.terms().items()]


def model_to_dict(spec: ModelSpec, bundles: dict) -> dict:
    out = {
        "name": spec.name,
        "m": spec.m,
        "symplectic": spec.symplectic,
        "d": [
            {"gen": k, "terms": [[format_rational(c), i, j] for c, i, j in terms]}
            for k, terms in enumerate(spec.d_struct, start=1) if terms
        ],
        "eta": _terms2(spec.eta),
        "bundles": {},
    }
    if spec.description:
        out["description"] = spec.description
    for name, b in bundles.items():
        out["bundles"][name] = {
            "rank": b.rank,
            "A": [
                [[[format_rational(c), mono[0]] for mono, c in a.terms().items()] for a in row]
                for row in b.A
            ],
            "Phi": [[format_rational(x) for x in row] for row in b.Phi.to_rows()],
        }
    return out


def serialize_model(spec: ModelSpec, bundles: dict) -> str:
    return json.dumps(model_to_dict(spec, bundles), indent=2) + "\n"


def builtin_models() -> list:
    files = resources.files("primcoh").joinpath("models")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def builtin_text(name: str) -> str:
    path = resources.files("primcoh").joinpath("models", f"{name}.json")
    if not path.is_file():
        raise FileNotFoundError(f"no built-in model named {name!r}")
    return path.read_text(encoding="utf-8")


def resolve(source: str) -> str:
    """Text of a model given as a path, a name on PRIMCOH_MODEL_PATH, or a built-in."""
    p = Path(source)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    if os.sep not in source and not source.endswith(".json"):
        for folder in filter(None, os.environ.get(MODEL_PATH_ENV, "").split(os.pathsep)):
            for cand in (Path(folder) / source, Path(folder) / f"{source}.json"):
                if cand.is_file():
                    return cand.read_text(encoding="utf-8")
        if source in builtin_models():
            return builtin_text(source)
    raise FileNotFoundError(f"cannot find model {source!r}")


def load_model(source, validate: bool = True):
    """Load and validate a model document; returns ``(spec, bundles)``."""
    return parse_model(resolve(str(source)), validate=validate)
