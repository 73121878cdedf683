"""Brute-force reference computations, deliberately sharing no code with primcoh.

Forms are dicts {tuple of generator indices (any order): coefficient}; signs
come from sorting permutations, d from the positional Leibniz sum, and ranks
from sympy.
"""
from fractions import Fraction
from itertools import combinations

import sympy


def canon(mono):
    """Sort a monomial; return (sign, sorted tuple) or (0, None) if it repeats."""
    if len(set(mono)) != len(mono):
        return 0, None
    seq = list(mono)
    sign = 1
    for i in range(len(seq)):  # bubble sort counts transpositions
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


def clean(form):
    return {k: v for k, v in form.items() if v != 0}


def mul(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            s, mono = canon(tuple(ma) + tuple(mb))
            if s:
                out[mono] = out.get(mono, 0) + s * ca * cb
    return clean(out)


def add(*forms):
    out = {}
    for f in forms:
        for k, v in f.items():
            out[k] = out.get(k, 0) + v
    return clean(out)


def scale(c, f):
    return clean({k: c * v for k, v in f.items()})


def d(form, dgen):
    """dgen: {k: {(i, j): c}}; positional Leibniz rule."""
    out = {}
    for mono, c in form.items():
        for p, g in enumerate(mono):
            left, right = {tuple(mono[:p]): Fraction((-1) ** p) * c}, {tuple(mono[p + 1:]): 1}
            term = mul(mul(left, dgen.get(g, {})), right)
            out = add(out, term)
    return out


def basis(m, k):
    if k < 0 or k > m:
        return []
    return list(combinations(range(1, m + 1), k))


def vec(form, m, k):
    out = [Fraction(0)] * len(basis(m, k))
    idx = {mono: n for n, mono in enumerate(basis(m, k))}
    for mono, c in form.items():
        s, key = canon(mono)
        if s:
            out[idx[key]] += s * c
    return out


def d_matrix(m, dgen, k):
    cols = [vec(d({mono: 1}, dgen), m, k + 1) for mono in basis(m, k)]
    return sympy.Matrix(len(basis(m, k + 1)), len(cols), lambda i, j: cols[j][i])


def de_rham_dims(m, dgen):
    ranks = {k: d_matrix(m, dgen, k).rank() if basis(m, k) and basis(m, k + 1) else 0 for k in range(-1, m + 1)}
    return [len(basis(m, k)) - ranks[k] - ranks[k - 1] for k in range(m + 1)]


def cone_apply(m, dgen, eta, A, Phi, alpha, beta):
    """Apply (alpha, beta) -> (nabla alpha + eta beta, Phi alpha - nabla beta).

    alpha, beta: lists of r forms; A: r x r forms (dicts); Phi: r x r numbers.
    """
    r = len(A)

    def nab(x):
        return [add(d(x[i], dgen), *[mul(A[i][j], x[j]) for j in range(r)]) for i in range(r)]

    na, nb = nab(alpha), nab(beta)
    new_a = [add(na[i], mul(eta, beta[i])) for i in range(r)]
    new_b = [add(*[scale(Phi[i][j], alpha[j]) for j in range(r)], scale(-1, nb[i])) for i in range(r)]
    return new_a, new_b


def cone_matrix(m, dgen, eta, A, Phi, i):
    r = len(A)
    src_a, src_b = basis(m, i), basis(m, i - 1)
    cols = []
    for comp in range(r):
        for mono in src_a:
            alpha = [{mono: 1} if c == comp else {} for c in range(r)]
            cols.append(cone_apply(m, dgen, eta, A, Phi, alpha, [{}] * r))
    for comp in range(r):
        for mono in src_b:
            beta = [{mono: 1} if c == comp else {} for c in range(r)]
            cols.append(cone_apply(m, dgen, eta, A, Phi, [{}] * r, beta))
    rows = r * (len(basis(m, i + 1)) + len(basis(m, i)))
    mat = sympy.zeros(rows, len(cols))
    for j, (na, nb) in enumerate(cols):
        flat = [x for f in na for x in vec(f, m, i + 1)] + [x for f in nb for x in vec(f, m, i)]
        for k, x in enumerate(flat):
            mat[k, j] = sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x
    return mat


def rank(mat):
    if mat.rows == 0 or mat.cols == 0:
        return 0
    return mat.rank()


def cone_dims(m, dgen, eta, A, Phi):
    mats = [cone_matrix(m, dgen, eta, A, Phi, i) for i in range(m + 2)]
    ranks = [rank(x) for x in mats]
    return [mats[i].cols - ranks[i] - (ranks[i - 1] if i else 0) for i in range(m + 2)]


def les_dims_trivial(m, dgen, eta):
    """Cone of eta^ on de Rham cohomology: h^i = coker(H^(i-2) -> H^i) + ker(H^(i-1) -> H^(i+1)).

    Valid for the trivial bundle with Phi = 0 (the cone of a chain map).
    """
    def Z(k):
        if not basis(m, k):
            return sympy.zeros(0, 0)
        if not basis(m, k + 1):
            return sympy.eye(len(basis(m, k)))
        ns = d_matrix(m, dgen, k).nullspace()
        return sympy.Matrix.hstack(*ns) if ns else sympy.zeros(len(basis(m, k)), 0)

    def B(k):
        if not basis(m, k) or not basis(m, k - 1):
            return sympy.zeros(len(basis(m, k)), 0)
        return d_matrix(m, dgen, k - 1)

    def L(k):
        cols = [vec(mul(eta, {mono: 1}), m, k + 2) for mono in basis(m, k)]
        return sympy.Matrix(len(basis(m, k + 2)), len(cols), lambda i, j: cols[j][i])

    def h(k):
        if not basis(m, k):
            return 0
        return rank(Z(k)) - rank(B(k))

    def induced_rank(k):
        # rank of [eta^]: H^k -> H^(k+2) = dim(eta^ Z_k + B_(k+2)) - dim B_(k+2)
        if not basis(m, k) or not basis(m, k + 2):
            return 0
        img = L(k) * Z(k)
        return rank(sympy.Matrix.hstack(img, B(k + 2))) - rank(B(k + 2))

    out = []
    for i in range(m + 2):
        coker = h(i) - (induced_rank(i - 2) if i >= 2 else 0)
        ker = (h(i - 1) - induced_rank(i - 1)) if i >= 1 else 0
        out.append(coker + ker)
    return out
