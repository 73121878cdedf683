"""The mapping-cone complex (alpha, beta) -> (nabla alpha + eta ^ beta, Phi alpha - nabla beta).

Cochains of degree i live in Omega^i(E) + Omega^(i-1)(E) for i = 0..m+1.
Coordinates put the alpha block first, then beta; inside each block the
bundle component is the slow index and the monomial the fast one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .bundle import (
    BundleData,
    EForm,
    FlatnessReport,
    apply_phi,
    check_cone_flat,
    nabla,
    scalar_wedge,
)
from .errors import CocycleError, ComplexError, ShapeError, SingularMatrixError
from .linalg import RatMatrix, det, invert, kron, matmul, rank, rank_gauss
from .model import ModelSpec, dim, differential_matrix, wedge_matrix


@dataclass(frozen=True)
class ConeElement:
    degree: int
    alpha: EForm
    beta: EForm

    def __post_init__(self):
        if self.alpha.rank != self.beta.rank:
            raise ShapeError("alpha and beta carry different bundle ranks")
        if self.alpha.degree != self.degree or self.beta.degree != self.degree - 1:
            raise ShapeError(
                f"degree-{self.degree} cone element needs forms of degrees "
                f"{self.degree} and {self.degree - 1}"
            )

    @classmethod
    def zero(cls, m: int, rank: int, degree: int) -> "ConeElement":
        return cls(degree, EForm.zero(m, rank, degree), EForm.zero(m, rank, degree - 1))

    @classmethod
    def from_coords(cls, m: int, rank: int, degree: int, vec) -> "ConeElement":
        na = rank * dim(m, degree)
        if len(vec) != na + rank * dim(m, degree - 1):
            raise ShapeError("coordinate vector has the wrong length")
        return cls(
            degree,
            EForm.from_coords(m, rank, degree, list(vec[:na])),
            EForm.from_coords(m, rank, degree - 1, list(vec[na:])),
        )

    def coords(self) -> list:
        return self.alpha.coords() + self.beta.coords()

    def is_zero(self) -> bool:
        return self.alpha.is_zero() and self.beta.is_zero()

    def __add__(self, other):
        return ConeElement(self.degree, self.alpha + other.alpha, self.beta + other.beta)

    def __sub__(self, other):
        return ConeElement(self.degree, self.alpha - other.alpha, self.beta - other.beta)

    def __mul__(self, c):
        return ConeElement(self.degree, self.alpha * c, self.beta * c)

    __rmul__ = __mul__


def cochain_dim(m: int, rank: int, degree: int) -> int:
    return rank * (dim(m, degree) + dim(m, degree - 1))


def apply(b: BundleData, spec: ModelSpec, z: ConeElement) -> ConeElement:
    if z.alpha.rank != b.rank:
        raise ShapeError(f"rank-{z.alpha.rank} element against a rank-{b.rank} bundle")
    alpha = nabla(b, z.alpha, spec) + scalar_wedge(spec.eta, z.beta)
    beta = apply_phi(b.Phi, z.alpha) - nabla(b, z.beta, spec)
    return ConeElement(z.degree + 1, alpha, beta)


def nabla_matrix(b: BundleData, spec: ModelSpec, degree: int) -> RatMatrix:
    """Matrix of nabla on E-valued forms of one degree (component-major layout)."""
    r = b.rank
    D = differential_matrix(spec, degree)
    blocks = []
    for i in range(r):
        row = []
        for j in range(r):
            blk = wedge_matrix(b.A[i][j], degree)
            if i == j:
                blk = blk + D
            row.append(blk)
        blocks.append(row)
    return RatMatrix.block(blocks)


def cone_matrix(b: BundleData, spec: ModelSpec, degree: int) -> RatMatrix:
    """Block matrix [[nabla_i, eta^], [Phi, -nabla_(i-1)]] from degree i to i+1."""
    r, m = b.rank, spec.m
    top = [nabla_matrix(b, spec, degree), kron(RatMatrix.identity(r), wedge_matrix(spec.eta, degree - 1))]
    bottom = [kron(b.Phi, RatMatrix.identity(dim(m, degree))), -nabla_matrix(b, spec, degree - 1)]
    return RatMatrix.block([top, bottom])


@dataclass(frozen=True)
class ConeComplex:
    spec: ModelSpec
    bundle: BundleData
    matrices: tuple  # matrices[i] maps degree i to degree i+1, i = 0..m+1
    flatness_certificate: FlatnessReport = field(compare=False)

    @property
    def top(self) -> int:
        return self.spec.m + 1

    @cached_property
    def ranks(self) -> tuple:
        return tuple(rank(mat) for mat in self.matrices)

    def matrix(self, degree: int) -> RatMatrix:
        return self.matrices[degree]


def assemble(b: BundleData, spec: ModelSpec) -> ConeComplex:
    mats = tuple(cone_matrix(b, spec, i) for i in range(spec.m + 2))
    return ConeComplex(spec, b, mats, check_cone_flat(b, spec))


def verify_complex(c: ConeComplex) -> bool:
    return all(
        matmul(c.matrices[i + 1], c.matrices[i]).is_zero() for i in range(len(c.matrices) - 1)
    )


def _dims_from_ranks(c: ConeComplex, ranks) -> list:
    out = []
    for i, mat in enumerate(c.matrices):
        prev = ranks[i - 1] if i > 0 else 0
        out.append(mat.cols - ranks[i] - prev)
    return out


def cohomology_dims(c: ConeComplex) -> list:
    """Dimensions h^0..h^(m+1); refuses operators that do not square to zero."""
    if not verify_complex(c):
        raise ComplexError("the cone operator does not square to zero; cohomology is undefined")
    dims = _dims_from_ranks(c, c.ranks)
    assert all(h >= 0 for h in dims), dims
    return dims


def cohomology_dims_gauss(c: ConeComplex) -> list:
    """Same as :func:`cohomology_dims` but with Gauss-Jordan ranks."""
    if not verify_complex(c):
        raise ComplexError("the cone operator does not square to zero; cohomology is undefined")
    return _dims_from_ranks(c, [rank_gauss(mat) for mat in c.matrices])


def euler_characteristic(dims) -> int:
    return sum((-1) ** i * h for i, h in enumerate(dims))


def phi_inverse(c: ConeComplex) -> RatMatrix:
    try:
        return invert(c.bundle.Phi)
    except SingularMatrixError:
        raise SingularMatrixError(
            f"Phi is singular (det = {det(c.bundle.Phi)}); no contraction exists"
        ) from None


def contract(c: ConeComplex, z: ConeElement, phi_inv: RatMatrix | None = None) -> ConeElement:
    """Preimage (Phi^-1 beta, 0) of a cocycle z, checked by applying the operator."""
    if phi_inv is None:
        phi_inv = phi_inverse(c)
    b, spec = c.bundle, c.spec
    image = apply(b, spec, z)
    if not image.is_zero():
        raise CocycleError("input is not a cocycle", residual=image)
    w = ConeElement(
        z.degree - 1,
        apply_phi(phi_inv, z.beta),
        EForm.zero(spec.m, b.rank, z.degree - 2),
    )
    back = apply(b, spec, w)
    if back != z:
        raise CocycleError("contraction failed to reproduce the cocycle", residual=back - z)
    return w


def cocycle_basis(c: ConeComplex, degree: int) -> list:
    """Kernel basis of the degree-``degree`` operator as cone elements."""
    from .linalg import kernel_basis

    m, r = c.spec.m, c.bundle.rank
    return [ConeElement.from_coords(m, r, degree, v) for v in kernel_basis(c.matrices[degree])]


def coords_apply(c: ConeComplex, z: ConeElement) -> list:
    return c.matrices[z.degree].apply(z.coords())
