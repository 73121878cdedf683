"""Cone-flat bundle data in a global invariant trivialization.

A bundle of rank r carries a connection matrix ``A`` of 1-forms, so that
``nabla = d + A`` acts on E-valued forms by left wedge,

    (nabla x)_i = d x_i + sum_j A_ij ^ x_j,

and a constant endomorphism matrix ``Phi``.  Cone flatness with respect to
the closed 2-form eta of the model is

    dA + A ^ A + eta * Phi = 0   and   A Phi - Phi A = 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import RankError, ShapeError
from .linalg import RatMatrix, RatPoly, charpoly, kron
from .model import Form, ModelSpec, differential, wedge


@dataclass(frozen=True)
class BundleData:
    rank: int
    A: tuple  # rank x rank tuple of degree-1 Forms
    Phi: RatMatrix

    def __post_init__(self):
        r = self.rank
        if r < 1:
            raise ShapeError("bundle rank must be at least 1")
        if len(self.A) != r or any(len(row) != r for row in self.A):
            raise ShapeError(f"connection matrix must be {r}x{r}")
        if self.Phi.shape != (r, r):
            raise ShapeError(f"Phi must be {r}x{r}, got {self.Phi.shape}")
        ms = {a.m for row in self.A for a in row}
        if len(ms) != 1:
            raise ShapeError("connection entries live on different models")
        if any(a.degree != 1 for row in self.A for a in row):
            raise ShapeError("connection entries must be 1-forms")

    @property
    def m(self) -> int:
        return self.A[0][0].m

    @classmethod
    def make(cls, A: Sequence[Sequence[Form]], Phi) -> "BundleData":
        A = tuple(tuple(row) for row in A)
        if not isinstance(Phi, RatMatrix):
            Phi = RatMatrix.from_rows(Phi, cols=len(A))
        return cls(len(A), A, Phi)

    @classmethod
    def line(cls, a: Form, f=0) -> "BundleData":
        return cls(1, ((a,),), RatMatrix.scalar(1, f))

    @classmethod
    def trivial(cls, m: int, rank: int = 1) -> "BundleData":
        z = Form.zero(m, 1)
        return cls(rank, tuple((z,) * rank for _ in range(rank)), RatMatrix.zeros(rank, rank))


@dataclass(frozen=True)
class EForm:
    degree: int
    components: tuple

    def __post_init__(self):
        if any(c.degree != self.degree for c in self.components):
            raise ShapeError("all components of an E-valued form share one degree")

    @classmethod
    def zero(cls, m: int, rank: int, degree: int) -> "EForm":
        return cls(degree, (Form.zero(m, degree),) * rank)

    @classmethod
    def of(cls, *components: Form) -> "EForm":
        return cls(components[0].degree, tuple(components))

    @property
    def rank(self) -> int:
        return len(self.components)

    def coords(self) -> list:
        return [c for comp in self.components for c in comp.coeffs]

    @classmethod
    def from_coords(cls, m: int, rank: int, degree: int, vec) -> "EForm":
        from .model import dim

        k = dim(m, degree)
        if len(vec) != rank * k:
            raise ShapeError(f"expected {rank * k} coordinates, got {len(vec)}")
        return cls(degree, tuple(Form.from_vector(m, degree, vec[i * k:(i + 1) * k]) for i in range(rank)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "EForm") -> "EForm":
        if self.rank != other.rank:
            raise ShapeError("rank mismatch")
        return EForm(self.degree, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "EForm") -> "EForm":
        return self + (-other)

    def __neg__(self) -> "EForm":
        return EForm(self.degree, tuple(-a for a in self.components))

    def __mul__(self, c) -> "EForm":
        return EForm(self.degree, tuple(a * c for a in self.components))

    __rmul__ = __mul__


def matrix_wedge(F: Sequence[Sequence[Form]], x: EForm) -> EForm:
    """(F ^ x)_i = sum_j F_ij ^ x_j for a matrix of forms F."""
    if len(F) != x.rank:
        raise ShapeError("rank mismatch")
    comps = []
    for row in F:
        acc = None
        for f, xj in zip(row, x.components):
            term = wedge(f, xj)
            acc = term if acc is None else acc + term
        comps.append(acc)
    return EForm(comps[0].degree, tuple(comps))


def apply_phi(Phi: RatMatrix, x: EForm) -> EForm:
    if Phi.rows != x.rank:
        raise ShapeError("rank mismatch")
    comps = []
    for i in range(Phi.rows):
        acc = Form.zero(x.components[0].m, x.degree)
        for j, c in Phi.row(i).items():
            acc = acc + x.components[j] * c
        comps.append(acc)
    return EForm(x.degree, tuple(comps))


def scalar_wedge(form: Form, x: EForm) -> EForm:
    return EForm(form.degree + x.degree, tuple(wedge(form, c) for c in x.components))


def nabla(b: BundleData, x: EForm, spec: ModelSpec) -> EForm:
    if x.rank != b.rank:
        raise ShapeError(f"bundle of rank {b.rank} applied to a rank-{x.rank} form")
    dx = EForm(x.degree + 1, tuple(differential(c, spec) for c in x.components))
    return dx + matrix_wedge(b.A, x)


def _mat_wedge_mat(P, Q) -> list:
    r = len(P)
    return [
        [_sum_forms([wedge(P[i][k], Q[k][j]) for k in range(r)]) for j in range(r)]
        for i in range(r)
    ]


def _sum_forms(forms):
    acc = forms[0]
    for f in forms[1:]:
        acc = acc + f
    return acc


def curvature(b: BundleData, spec: ModelSpec) -> list:
    """F = dA + A ^ A, an r x r list of 2-forms."""
    AA = _mat_wedge_mat(b.A, b.A)
    return [[differential(b.A[i][j], spec) + AA[i][j] for j in range(b.rank)] for i in range(b.rank)]


@dataclass
class FlatnessReport:
    curvature_failures: list  # ((i, j), residual 2-form), 1-based entries
    commutator_failures: list  # ((i, j), residual 1-form)

    @property
    def passed(self) -> bool:
        return not self.curvature_failures and not self.commutator_failures


def check_cone_flat(b: BundleData, spec: ModelSpec) -> FlatnessReport:
    if b.m != spec.m:
        raise ShapeError("bundle and model disagree on the number of generators")
    F = curvature(b, spec)
    r = b.rank
    curv_bad = []
    for i in range(r):
        for j in range(r):
            res = F[i][j] + spec.eta * b.Phi[i, j]
            if not res.is_zero():
                curv_bad.append(((i + 1, j + 1), res))
    comm_bad = []
    for i in range(r):
        for j in range(r):
            res = Form.zero(spec.m, 1)
            for k in range(r):
                res = res + b.A[i][k] * b.Phi[k, j] - b.A[k][j] * b.Phi[i, k]
            if not res.is_zero():
                comm_bad.append(((i + 1, j + 1), res))
    return FlatnessReport(curv_bad, comm_bad)


def tensor_product(b1: BundleData, b2: BundleData) -> BundleData:
    """E (x) F with basis index i*r2 + j for e_i (x) f_j (0-based)."""
    if b1.m != b2.m:
        raise ShapeError("bundles live on different models")
    r1, r2 = b1.rank, b2.rank
    m = b1.m
    zero = Form.zero(m, 1)
    A = [[zero] * (r1 * r2) for _ in range(r1 * r2)]
    for i in range(r1):
        for k in range(r2):
            row = i * r2 + k
            for j in range(r1):
                for l in range(r2):
                    col = j * r2 + l
                    entry = zero
                    if k == l:
                        entry = entry + b1.A[i][j]
                    if i == j:
                        entry = entry + b2.A[k][l]
                    A[row][col] = entry
    Phi = kron(b1.Phi, RatMatrix.identity(r2)) + kron(RatMatrix.identity(r1), b2.Phi)
    return BundleData(r1 * r2, tuple(tuple(row) for row in A), Phi)


def _require_line(l: BundleData):
    if l.rank != 1:
        raise RankError(f"expected a line bundle, got rank {l.rank}")


def tensor_power(e: BundleData, l: BundleData, n: int) -> BundleData:
    """E (x) L^n in closed form: A + n*a*I and Phi + n*f*I."""
    _require_line(l)
    if n < 0:
        raise ValueError("tensor power exponent must be nonnegative")
    if e.m != l.m:
        raise ShapeError("bundles live on different models")
    a = l.A[0][0] * n
    f = l.Phi[0, 0] * n
    r = e.rank
    A = tuple(tuple(e.A[i][j] + a if i == j else e.A[i][j] for j in range(r)) for i in range(r))
    return BundleData(r, A, e.Phi + RatMatrix.scalar(r, f))


def phi_det_poly(e: BundleData, l: BundleData) -> RatPoly:
    """det(Phi^E + n*f*I) as a polynomial in n."""
    _require_line(l)
    f = l.Phi[0, 0]
    r = e.rank
    # det(t I + Phi) = (-1)^r chi(-t) where chi(t) = det(t I - Phi); then t = n f
    chi = charpoly(e.Phi)
    coeffs = []
    for k, c in enumerate(chi.coeffs):
        coeffs.append((-1) ** (r + k) * c * f ** k)
    return RatPoly(coeffs)


def direct_sum(b1: BundleData, b2: BundleData) -> BundleData:
    r1, r2 = b1.rank, b2.rank
    zero = Form.zero(b1.m, 1)
    A = [list(row) + [zero] * r2 for row in b1.A] + [[zero] * r1 + list(row) for row in b2.A]
    Phi = RatMatrix.block([
        [b1.Phi, RatMatrix.zeros(r1, r2)],
        [RatMatrix.zeros(r2, r1), b2.Phi],
    ])
    return BundleData(r1 + r2, tuple(tuple(r) for r in A), Phi)


def gauge(b: BundleData, P: RatMatrix, P_inv: RatMatrix) -> BundleData:
    """Constant change of frame: A -> P A P^-1, Phi -> P Phi P^-1."""
    r = b.rank
    zero = Form.zero(b.m, 1)
    PA = [[_sum_forms([b.A[k][j] * P[i, k] for k in range(r)] or [zero]) for j in range(r)] for i in range(r)]
    A = tuple(
        tuple(_sum_forms([PA[i][k] * P_inv[k, j] for k in range(r)]) for j in range(r))
        for i in range(r)
    )
    return BundleData(r, A, P @ b.Phi @ P_inv)
