import random
from fractions import Fraction as Q

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from primcoh.bundle import BundleData, EForm, check_cone_flat
from primcoh.cone import (
    ConeElement,
    apply,
    assemble,
    cocycle_basis,
    cohomology_dims,
    cohomology_dims_gauss,
    contract,
    euler_characteristic,
    verify_complex,
)
from primcoh.errors import CocycleError, ComplexError, ShapeError, SingularMatrixError
from primcoh.model import Form, ModelSpec
from primcoh.sampling import perturb, random_flat_bundle, random_form, random_instance

from . import oracle

e = Form.gen
KT = ModelSpec.build("kt", 4, {4: [(1, 1, 2)]}, [(1, 1, 2)])
T4 = ModelSpec.build("t4", 4, {}, [(1, 1, 3), (1, 2, 4)], symplectic=True)
LINE = BundleData.line(-e(4, 4), 1)


def random_element(rng, m, r, degree):
    alpha = EForm(degree, tuple(random_form(rng, m, degree) for _ in range(r)))
    beta = EForm(degree - 1, tuple(random_form(rng, m, degree - 1) for _ in range(r)))
    return ConeElement(degree, alpha, beta)


def test_apply_examples():
    z = ConeElement.zero(4, 1, 2)
    assert apply(LINE, KT, z) == ConeElement.zero(4, 1, 3)
    spec0 = KT.with_eta(Form.zero(4, 2))
    triv = BundleData.trivial(4, 1)
    x = ConeElement(2, EForm.of(e(4, 3, 4)), EForm.of(e(4, 4)))
    assert apply(triv, spec0, x) == ConeElement(3, EForm.of(-e(4, 1, 2, 3)), EForm.of(-e(4, 1, 2)))
    one = ConeElement(0, EForm.of(Form.one(4)), EForm.zero(4, 1, -1))
    assert apply(LINE, KT, one) == ConeElement(1, EForm.of(-e(4, 4)), EForm.of(Form.one(4)))
    with pytest.raises(ShapeError):
        apply(BundleData.trivial(4, 2), KT, one)


def test_assemble_shapes_and_layout():
    c = assemble(BundleData.trivial(4), T4.with_eta(Form.zero(4, 2)))
    assert all(mat.is_zero() for mat in c.matrices)
    assert c.matrices[0].shape == (5, 1)
    for i, mat in enumerate(c.matrices):
        assert mat.cols == sympy.binomial(4, i) + sympy.binomial(4, i - 1)
    c2 = assemble(BundleData.trivial(4, 3), KT)
    for i, mat in enumerate(c2.matrices):
        assert mat.cols == 3 * (sympy.binomial(4, i) + sympy.binomial(4, i - 1))
        assert mat.rows == 3 * (sympy.binomial(4, i + 1) + sympy.binomial(4, i))


def _sym(mat):
    return sympy.Matrix(mat.rows, mat.cols, lambda i, j: sympy.Rational(str(mat[i, j])))


def _oracle_args(spec, b):
    dgen = {g: {(i, j): c for c, i, j in terms} for g, terms in enumerate(spec.d_struct, 1)}
    A = [[b.A[i][j].terms() for j in range(b.rank)] for i in range(b.rank)]
    Phi = [[b.Phi[i, j] for j in range(b.rank)] for i in range(b.rank)]
    return spec.m, dgen, spec.eta.terms(), A, Phi


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_assembled_matrices_match_independent_derivation(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, m_max=4)
    b = random_flat_bundle(rng, inst, rng.randint(1, 2))
    c = assemble(b, inst.spec)
    args = _oracle_args(inst.spec, b)
    for i in range(inst.spec.m + 2):
        assert _sym(c.matrices[i]) == oracle.cone_matrix(*args, i)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_coordinates_agree_with_structural_apply(seed):
    rng = random.Random(seed)
    inst = random_instance(rng)
    b = random_flat_bundle(rng, inst, rng.randint(1, 3))
    c = assemble(b, inst.spec)
    for _ in range(5):
        i = rng.randint(0, inst.spec.m + 1)
        z = random_element(rng, inst.spec.m, b.rank, i)
        assert c.matrices[i].apply(z.coords()) == apply(b, inst.spec, z).coords()


def test_verify_complex_examples():
    assert verify_complex(assemble(LINE, KT))
    assert verify_complex(assemble(BundleData.trivial(4), KT.with_eta(Form.zero(4, 2))))
    bad = assemble(BundleData.line(-e(4, 4), 2), KT)
    assert not bad.flatness_certificate.passed
    assert not verify_complex(bad)
    with pytest.raises(ComplexError):
        cohomology_dims(bad)


def test_cohomology_examples():
    dims = cohomology_dims(assemble(BundleData.trivial(4), T4))
    assert dims == [1, 4, 5, 5, 4, 1]
    assert dims == oracle.cone_dims(4, {}, {(1, 3): 1, (2, 4): 1}, [[{}]], [[0]])
    assert dims == oracle.les_dims_trivial(4, {}, {(1, 3): 1, (2, 4): 1})
    assert cohomology_dims(assemble(LINE, KT)) == [0] * 6


@pytest.mark.parametrize("spec", [KT, T4, ModelSpec.build("h", 4, {3: [(1, 1, 2)]})], ids=["kt", "t4", "heis"])
def test_trivial_bundle_zero_eta_is_pair_of_de_rham_complexes(spec):
    from primcoh.model import de_rham_dims

    b = de_rham_dims(spec)
    dims = cohomology_dims(assemble(BundleData.trivial(4), spec.with_eta(Form.zero(4, 2))))
    assert dims == [(b[i] if i <= 4 else 0) + (b[i - 1] if i >= 1 else 0) for i in range(6)]


def test_contract_examples():
    c = assemble(LINE, KT)
    z = ConeElement.zero(4, 1, 2)
    assert contract(c, z) == ConeElement.zero(4, 1, 1)
    rng = random.Random(7)
    for i in range(0, 5):
        y = random_element(rng, 4, 1, i)
        target = apply(LINE, KT, y)
        w = contract(c, target)
        assert apply(LINE, KT, w) == target
    for i in range(6):
        for z in cocycle_basis(c, i):
            assert apply(LINE, KT, contract(c, z)) == z


def test_contract_errors():
    with pytest.raises(SingularMatrixError):
        contract(assemble(BundleData.trivial(4), T4), ConeElement.zero(4, 1, 1))
    c = assemble(LINE, KT)
    not_closed = ConeElement(1, EForm.of(e(4, 4)), EForm.of(Form.zero(4, 0)))
    with pytest.raises(CocycleError) as info:
        contract(c, not_closed)
    assert not info.value.residual.is_zero()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_flat_iff_complex(seed):
    rng = random.Random(seed)
    inst = random_instance(rng)
    b = random_flat_bundle(rng, inst, rng.randint(1, 3))
    assert check_cone_flat(b, inst.spec).passed
    assert verify_complex(assemble(b, inst.spec))
    p = perturb(rng, b)
    assert check_cone_flat(p, inst.spec).passed == verify_complex(assemble(p, inst.spec))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_euler_zero_two_rank_routes_and_vanishing(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, m_max=5)
    b = random_flat_bundle(rng, inst, rng.randint(1, 2))
    c = assemble(b, inst.spec)
    dims = cohomology_dims(c)
    assert dims == cohomology_dims_gauss(c)
    assert euler_characteristic(dims) == 0
    from primcoh.linalg import det

    if det(b.Phi) != 0:
        assert not any(dims)
        for i in range(inst.spec.m + 2):
            for z in cocycle_basis(c, i):
                assert apply(b, inst.spec, contract(c, z)) == z


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.fractions(min_value=-3, max_value=3, max_denominator=3))
def test_apply_is_linear(seed, q):
    rng = random.Random(seed)
    inst = random_instance(rng)
    b = random_flat_bundle(rng, inst, rng.randint(1, 2))
    i = rng.randint(0, inst.spec.m + 1)
    z1 = random_element(rng, inst.spec.m, b.rank, i)
    z2 = random_element(rng, inst.spec.m, b.rank, i)
    lhs = apply(b, inst.spec, z1 * q + z2)
    assert lhs == apply(b, inst.spec, z1) * q + apply(b, inst.spec, z2)
    assert lhs.degree == i + 1


def test_cone_element_degree_bookkeeping():
    with pytest.raises(ShapeError):
        ConeElement(2, EForm.zero(4, 1, 2), EForm.zero(4, 1, 2))
    with pytest.raises(ShapeError):
        ConeElement(2, EForm.zero(4, 1, 2), EForm.zero(4, 2, 1))
    top = ConeElement.zero(4, 2, 5)
    assert top.coords() == [Q(0)] * 2
