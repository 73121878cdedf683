"""Random valid models and cone-flat bundles for property tests and experiments.

Models are nilpotent: ``d e_k`` is drawn from the closed 2-forms on
``e_1..e_(k-1)``, so d^2 = 0 holds by construction.  For a primitive
``theta`` with ``d theta = eta`` and closed 1-forms ``c_k``, the connection

    A = -theta * Phi + sum_k c_k * Phi^k

is cone-flat: dA = -eta Phi, A ^ A = 0 because all matrix coefficients
commute, and A commutes with Phi.  Direct sums and constant gauge changes
by unimodular matrices make the samples less structured.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .bundle import BundleData, direct_sum, gauge
from .linalg import RatMatrix, kernel_basis
from .model import Form, ModelSpec, basis, differential, differential_matrix, dim


@dataclass(frozen=True)
class Instance:
    spec: ModelSpec
    theta: Form | None  # d theta = eta, or None if eta was not drawn exact


def _small(rng: random.Random, lo=-2, hi=2) -> Fraction:
    return Fraction(rng.randint(lo, hi))


def random_combination(rng: random.Random, vectors, lo=-2, hi=2) -> list:
    if not vectors:
        return []
    n = len(vectors[0])
    out = [Fraction(0)] * n
    for v in vectors:
        c = _small(rng, lo, hi)
        if c:
            out = [a + c * b for a, b in zip(out, v)]
    return out


def random_nilpotent_model(rng: random.Random, m: int, name: str = "random",
                           density: float = 0.6) -> ModelSpec:
    d = {}
    for k in range(3, m + 1):
        if rng.random() > density:
            continue
        sub = ModelSpec.build("sub", k - 1, d)
        closed = kernel_basis(differential_matrix(sub, 2))
        vec = random_combination(rng, closed)
        terms = [(c, i, j) for (i, j), c in zip(basis(k - 1, 2), vec) if c]
        if terms:
            d[k] = terms
    return ModelSpec.build(name, m, d)


def closed_forms(spec: ModelSpec, degree: int) -> list:
    return [Form.from_vector(spec.m, degree, v) for v in kernel_basis(differential_matrix(spec, degree))]


def random_closed_form(rng: random.Random, spec: ModelSpec, degree: int) -> Form:
    basis = [f.coeffs for f in closed_forms(spec, degree)]
    if not basis:
        return Form.zero(spec.m, degree)
    return Form.from_vector(spec.m, degree, random_combination(rng, basis))


def random_form(rng: random.Random, m: int, degree: int, lo=-2, hi=2) -> Form:
    return Form.from_vector(m, degree, [_small(rng, lo, hi) for _ in range(dim(m, degree))])


def random_instance(rng: random.Random, m_max: int = 6, exact_bias: float = 0.8) -> Instance:
    """A validated model with eta exact (and its primitive) most of the time,
    otherwise a random closed, possibly non-exact eta."""
    m = rng.randint(2, m_max)
    spec = random_nilpotent_model(rng, m, name=f"rand{m}")
    if rng.random() < exact_bias:
        theta = random_form(rng, m, 1)
        return Instance(spec.with_eta(differential(theta, spec)), theta)
    return Instance(spec.with_eta(random_closed_form(rng, spec, 2)), None)


def random_matrix(rng: random.Random, r: int, lo=-2, hi=2) -> RatMatrix:
    return RatMatrix.from_rows([[_small(rng, lo, hi) for _ in range(r)] for _ in range(r)], cols=r)


def random_phi(rng: random.Random, r: int) -> RatMatrix:
    """Zero, nilpotent, rank-deficient or generic, so both vanishing and
    non-vanishing complexes show up."""
    kind = rng.choice(["zero", "nilpotent", "singular", "generic", "generic"])
    if kind == "zero":
        return RatMatrix.zeros(r, r)
    if kind == "nilpotent":
        return RatMatrix(r, r, [{j: _small(rng) for j in range(i + 1, r)} for i in range(r)])
    M = random_matrix(rng, r)
    if kind == "singular":
        rows = M.to_rows()
        rows[-1] = [Fraction(0)] * r
        M = RatMatrix.from_rows(rows, cols=r)
    return M


def random_unimodular(rng: random.Random, r: int, steps: int = 4):
    """Integer matrix with integer inverse, as a product of elementary moves."""
    P = RatMatrix.identity(r)
    P_inv = RatMatrix.identity(r)
    if r < 2:
        return P, P_inv
    for _ in range(steps):
        i, j = rng.sample(range(r), 2)
        c = rng.choice([-1, 1, 2])
        E = RatMatrix.identity(r) + RatMatrix(r, r, [{j: c} if k == i else {} for k in range(r)])
        E_inv = RatMatrix.identity(r) - RatMatrix(r, r, [{j: c} if k == i else {} for k in range(r)])
        P = E @ P
        P_inv = P_inv @ E_inv
    return P, P_inv


def _block(rng: random.Random, inst: Instance, r: int) -> BundleData:
    spec = inst.spec
    m = spec.m
    if inst.theta is not None:
        Phi = random_phi(rng, r)
        theta = inst.theta
    else:
        Phi = RatMatrix.zeros(r, r)
        theta = Form.zero(m, 1)
    powers = [RatMatrix.identity(r)]
    for _ in range(r - 1):
        powers.append(powers[-1] @ Phi)
    A = [[theta * (-Phi[i, j]) for j in range(r)] for i in range(r)]
    for P in powers:
        # nontrivial twists make nilpotent models acyclic, so keep them occasional
        if rng.random() < 0.6:
            continue
        c = random_closed_form(rng, spec, 1)
        if c.is_zero():
            continue
        A = [[A[i][j] + c * P[i, j] for j in range(r)] for i in range(r)]
    return BundleData.make(A, Phi)


def random_flat_bundle(rng: random.Random, inst: Instance, r: int) -> BundleData:
    """Cone-flat bundle of rank r for the instance's eta."""
    if r >= 2 and rng.random() < 0.4:
        k = rng.randint(1, r - 1)
        b = direct_sum(_block(rng, inst, k), _block(rng, inst, r - k))
    else:
        b = _block(rng, inst, r)
    P, P_inv = random_unimodular(rng, r)
    return gauge(b, P, P_inv)


def invertible_line(inst: Instance, f=1) -> BundleData:
    """Line bundle (-f theta, f); needs an exact eta."""
    if inst.theta is None:
        raise ValueError("eta has no recorded primitive")
    return BundleData.line(inst.theta * (-Fraction(f)), f)


def perturb(rng: random.Random, b: BundleData) -> BundleData:
    """Change a single entry of A (by a multiple of a generator) or of Phi."""
    r, m = b.rank, b.m
    i, j = rng.randrange(r), rng.randrange(r)
    c = Fraction(rng.choice([-2, -1, 1, 2]))
    if rng.random() < 0.5:
        k = rng.randint(1, m)
        A = [list(row) for row in b.A]
        A[i][j] = A[i][j] + Form.gen(m, k, c=c)
        return BundleData.make(A, b.Phi)
    Phi = b.Phi + RatMatrix(r, r, [{j: c} if k == i else {} for k in range(r)])
    return BundleData(r, b.A, Phi)
