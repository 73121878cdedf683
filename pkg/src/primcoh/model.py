"""Chevalley-Eilenberg style models: exterior algebra on degree-one generators.

Generators are numbered ``1..m``.  A monomial is a strictly increasing tuple
of generator indices and the forms of degree ``k`` are coefficient vectors
over the ``C(m, k)`` monomials in lexicographic order.  Forms of degree
outside ``0..m`` are allowed but live in the zero space (empty vector).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Mapping

from .errors import DegreeError, ModelFormatError, ShapeError
from .linalg import RatMatrix, as_rational, matmul

Monomial = tuple  # strictly increasing generator indices


@lru_cache(maxsize=None)
def _basis(m: int, degree: int) -> tuple:
    if degree < 0 or degree > m:
        return ()
    return tuple(combinations(range(1, m + 1), degree))


@lru_cache(maxsize=None)
def _index(m: int, degree: int) -> dict:
    return {mono: k for k, mono in enumerate(_basis(m, degree))}


def basis(spec_or_m, degree: int) -> list:
    """Monomials of one degree in canonical order."""
    m = spec_or_m if isinstance(spec_or_m, int) else spec_or_m.m
    if degree < 0 or degree > m:
        raise DegreeError(f"degree {degree} outside 0..{m}")
    return list(_basis(m, degree))


def dim(m: int, degree: int) -> int:
    return comb(m, degree) if 0 <= degree <= m else 0


def _merge(a: tuple, b: tuple):
    """Sign and sorted union of two monomials, or (0, None) if they overlap."""
    if set(a) & set(b):
        return 0, None
    # parity = number of pairs (x in a, y in b) with x > y
    inversions = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inversions += j
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


@dataclass(frozen=True)
class Form:
    m: int
    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != dim(self.m, self.degree):
            raise ShapeError(
                f"degree-{self.degree} form on {self.m} generators needs "
                f"{dim(self.m, self.degree)} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def zero(cls, m: int, degree: int) -> "Form":
        return cls(m, degree, (Fraction(0),) * dim(m, degree))

    @classmethod
    def one(cls, m: int, c=1) -> "Form":
        return cls(m, 0, (as_rational(c),))

    @classmethod
    def from_terms(cls, m: int, degree: int, terms: Mapping | Iterable) -> "Form":
        """Build from ``{indices: coeff}``; unsorted index tuples are reordered with sign."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        coeffs = [Fraction(0)] * dim(m, degree)
        idx = _index(m, degree)
        for mono, c in items:
            mono = tuple(mono)
            if len(mono) != degree or any(not 1 <= g <= m for g in mono):
                raise ShapeError(f"monomial {mono} invalid for degree {degree}, m={m}")
            if len(set(mono)) != len(mono):
                continue
            order = sorted(range(len(mono)), key=lambda k: mono[k])
            sign = _perm_sign(order)
            coeffs[idx[tuple(sorted(mono))]] += sign * as_rational(c)
        return cls(m, degree, tuple(coeffs))

    @classmethod
    def gen(cls, m: int, *indices, c=1) -> "Form":
        """The monomial e_{i1} ^ ... ^ e_{ik} scaled by ``c``."""
        return cls.from_terms(m, len(indices), {tuple(indices): c})

    @classmethod
    def from_vector(cls, m: int, degree: int, vec) -> "Form":
        return cls(m, degree, tuple(as_rational(v) for v in vec))

    def terms(self) -> dict:
        return {mono: c for mono, c in zip(_basis(self.m, self.degree), self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "Form"):
        if self.m != other.m or self.degree != other.degree:
            raise ShapeError(
                f"cannot combine degree {self.degree} (m={self.m}) with "
                f"degree {other.degree} (m={other.m})"
            )

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        return Form(self.m, self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Form") -> "Form":
        self._check(other)
        return Form(self.m, self.degree, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Form":
        return Form(self.m, self.degree, tuple(-a for a in self.coeffs))

    def __mul__(self, c) -> "Form":
        c = as_rational(c)
        return Form(self.m, self.degree, tuple(c * a for a in self.coeffs))

    __rmul__ = __mul__

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __str__(self):
        t = self.terms()
        if not t:
            return "0"
        parts = []
        for mono, c in t.items():
            name = "e" + "".join(str(g) for g in mono) if mono else "1"
            if mono and abs(c) == 1:
                body = name
            elif mono:
                body = f"{abs(c)}*{name}"
            else:
                body = str(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign} {body}" if parts else ("-" + body if c < 0 else body))
        return " ".join(parts)


def _perm_sign(order) -> int:
    inv = sum(1 for i in range(len(order)) for j in range(i + 1, len(order)) if order[i] > order[j])
    return -1 if inv % 2 else 1


def wedge(a: Form, b: Form) -> Form:
    if a.m != b.m:
        raise ShapeError("forms live on different models")
    m = a.m
    deg = a.degree + b.degree
    if deg > m or deg < 0:
        return Form.zero(m, deg)
    out = [Fraction(0)] * dim(m, deg)
    idx = _index(m, deg)
    for ma, ca in a.terms().items():
        for mb, cb in b.terms().items():
            s, mono = _merge(ma, mb)
            if s:
                out[idx[mono]] += s * ca * cb
    return Form(m, deg, tuple(out))


@lru_cache(maxsize=4096)
def wedge_matrix(form: Form, degree: int) -> RatMatrix:
    """Matrix of ``x -> form ^ x`` from degree ``degree`` forms."""
    m = form.m
    src = _basis(m, degree)
    tgt_deg = degree + form.degree
    tgt = _index(m, tgt_deg)
    data = [dict() for _ in range(dim(m, tgt_deg))]
    if tgt:
        terms = form.terms()
        for col, mono in enumerate(src):
            for fm, c in terms.items():
                s, merged = _merge(fm, mono)
                if s:
                    r = tgt[merged]
                    data[r][col] = data[r].get(col, 0) + s * c
    return RatMatrix(dim(m, tgt_deg), len(src), data)


@dataclass(frozen=True)
class ModelSpec:
    """A finite model.

    ``d_struct[k-1]`` holds the terms ``(c, i, j)`` of ``d e_k = sum c e_i ^ e_j``.
    """

    name: str
    m: int
    d_struct: tuple
    eta: Form
    symplectic: bool = False
    description: str = field(default="", compare=False)

    @classmethod
    def build(cls, name: str, m: int, d: Mapping | None = None, eta=None,
              symplectic: bool = False, description: str = "") -> "ModelSpec":
        """Convenience constructor; ``d`` maps generator -> [(c, i, j), ...] and
        ``eta`` is a Form or a list of ``(c, i, j)`` terms."""
        d = d or {}
        d_struct = tuple(
            tuple((as_rational(c), int(i), int(j)) for c, i, j in d.get(k, ()))
            for k in range(1, m + 1)
        )
        bad = [k for k in d if not 1 <= k <= m]
        if bad:
            raise ModelFormatError(f"differential given for unknown generators {bad}", bad)
        if eta is None:
            eta = Form.zero(m, 2)
        elif not isinstance(eta, Form):
            eta = two_form(m, eta)
        return cls(name, m, d_struct, eta, symplectic, description)

    def with_eta(self, eta: Form, symplectic: bool = False) -> "ModelSpec":
        return ModelSpec(self.name, self.m, self.d_struct, eta, symplectic, self.description)


def two_form(m: int, terms) -> Form:
    bad = [(c, i, j) for c, i, j in terms if not (1 <= i < j <= m)]
    if bad:
        raise ModelFormatError(f"malformed 2-form terms {bad}", bad)
    return Form.from_terms(m, 2, [((i, j), as_rational(c)) for c, i, j in terms])


def structural_errors(spec: ModelSpec) -> list:
    out = []
    if len(spec.d_struct) != spec.m:
        out.append(("d", f"{len(spec.d_struct)} generator entries for m={spec.m}"))
    for k, terms in enumerate(spec.d_struct, start=1):
        for c, i, j in terms:
            if not (1 <= i <= spec.m and 1 <= j <= spec.m):
                out.append((f"d e{k}", f"index out of range in term ({c}, {i}, {j})"))
            elif i >= j:
                out.append((f"d e{k}", f"need i < j in term ({c}, {i}, {j})"))
    if spec.eta.m != spec.m or spec.eta.degree != 2:
        out.append(("eta", "eta must be a 2-form on the model's generators"))
    return out


def generator_differential(spec: ModelSpec, k: int) -> Form:
    return Form.from_terms(spec.m, 2, [((i, j), c) for c, i, j in spec.d_struct[k - 1]])


@lru_cache(maxsize=None)
def _mono_differential(spec: ModelSpec, mono: tuple) -> Form:
    # d(e_i ^ rest) = de_i ^ rest - e_i ^ d(rest)
    m = spec.m
    if not mono:
        return Form.zero(m, 1)
    head, rest = mono[0], mono[1:]
    rest_form = Form.gen(m, *rest) if rest else Form.one(m)
    first = wedge(generator_differential(spec, head), rest_form)
    if not rest:
        return first
    second = wedge(Form.gen(m, head), _mono_differential(spec, rest))
    return first - second


@lru_cache(maxsize=None)
def differential_matrix(spec: ModelSpec, degree: int) -> RatMatrix:
    """Matrix of d from degree ``degree`` to ``degree + 1``."""
    m = spec.m
    rows, cols = dim(m, degree + 1), dim(m, degree)
    data = [dict() for _ in range(rows)]
    if rows and cols:
        for col, mono in enumerate(_basis(m, degree)):
            for r, c in enumerate(_mono_differential(spec, mono).coeffs):
                if c:
                    data[r][col] = c
    return RatMatrix(rows, cols, data)


def differential(a: Form, spec: ModelSpec) -> Form:
    if a.m != spec.m:
        raise ShapeError("form and model disagree on the number of generators")
    vec = differential_matrix(spec, a.degree).apply(a.coeffs)
    return Form(a.m, a.degree + 1, tuple(vec))


def wedge_power(a: Form, k: int) -> Form:
    out = Form.one(a.m)
    for _ in range(k):
        out = wedge(out, a)
    return out


@dataclass
class ValidationReport:
    name: str
    checks: list  # (label, ok, detail)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> list:
        return [(label, detail) for label, ok, detail in self.checks if not ok]


def validate_model(spec: ModelSpec) -> ValidationReport:
    """Check d^2 = 0 on generators, d(eta) = 0 and optional nondegeneracy.

    Raises ModelFormatError for structurally malformed data.
    """
    bad = structural_errors(spec)
    if bad:
        raise ModelFormatError(
            "malformed model: " + "; ".join(f"{w}: {msg}" for w, msg in bad), bad
        )
    checks = []
    for k in range(1, spec.m + 1):
        dde = differential(generator_differential(spec, k), spec)
        checks.append((f"d^2 e{k} = 0", dde.is_zero(), "" if dde.is_zero() else f"d^2 e{k} = {dde}"))
    deta = differential(spec.eta, spec)
    checks.append(("d(eta) = 0", deta.is_zero(), "" if deta.is_zero() else f"d(eta) = {deta}"))
    if spec.symplectic:
        if spec.m % 2:
            checks.append(("eta nondegenerate", False, f"m = {spec.m} is odd"))
        else:
            top = wedge_power(spec.eta, spec.m // 2)
            ok = not top.is_zero()
            checks.append(("eta nondegenerate", ok, f"eta^{spec.m // 2} = {top}"))
    return ValidationReport(spec.name, checks)


def de_rham_dims(spec: ModelSpec) -> list:
    from .linalg import rank

    ranks = [rank(differential_matrix(spec, k)) for k in range(-1, spec.m + 1)]
    return [dim(spec.m, k) - ranks[k + 1] - ranks[k] for k in range(spec.m + 1)]


def d_squared_is_zero(spec: ModelSpec) -> bool:
    return all(
        matmul(differential_matrix(spec, k + 1), differential_matrix(spec, k)).is_zero()
        for k in range(spec.m + 1)
    )
