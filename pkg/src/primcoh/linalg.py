"""Exact rational matrices.

Entries are :class:`fractions.Fraction`, which is always stored in lowest
terms with a positive denominator.  Matrices keep one ``{col: value}`` dict
per row; the cone-complex operators are very sparse and this keeps products
and elimination cheap without a separate dense code path.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import ShapeError, SingularMatrixError

Rational = Fraction


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact or boolean scalar {x!r}")
    return Fraction(x)


class RatMatrix:
    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Sequence[dict] | None = None):
        if rows < 0 or cols < 0:
            raise ShapeError(f"negative shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        if data is None:
            self._data = [dict() for _ in range(rows)]
        else:
            if len(data) != rows:
                raise ShapeError("row count does not match data")
            self._data = []
            for row in data:
                clean = {}
                for j, v in row.items():
                    if not 0 <= j < cols:
                        raise ShapeError(f"column {j} out of range for {cols} columns")
                    v = as_rational(v)
                    if v:
                        clean[j] = v
                self._data.append(clean)

    # construction ---------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ShapeError("ragged row list")
        return cls(len(rows), cols, [{j: v for j, v in enumerate(r) if v} for r in rows])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def scalar(cls, n: int, c) -> "RatMatrix":
        c = as_rational(c)
        return cls(n, n, [{i: c} if c else {} for i in range(n)])

    @classmethod
    def block(cls, blocks: Sequence[Sequence["RatMatrix"]]) -> "RatMatrix":
        """Assemble from a grid of blocks with consistent row/column sizes."""
        heights = [row[0].rows for row in blocks]
        widths = [b.cols for b in blocks[0]] if blocks else []
        data: list[dict] = []
        for bi, brow in enumerate(blocks):
            if len(brow) != len(widths):
                raise ShapeError("ragged block grid")
            for b, w in zip(brow, widths):
                if b.rows != heights[bi] or b.cols != w:
                    raise ShapeError("inconsistent block shapes")
            for r in range(heights[bi]):
                row = {}
                off = 0
                for b, w in zip(brow, widths):
                    for j, v in b._data[r].items():
                        row[off + j] = v
                    off += w
                data.append(row)
        out = cls(sum(heights), sum(widths))
        out._data = data
        return out

    # access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry {ij} outside {self.rows}x{self.cols}")
        return self._data[i].get(j, Fraction(0))

    def row(self, i: int) -> dict:
        return dict(self._data[i])

    def to_rows(self) -> list[list[Fraction]]:
        out = []
        for r in self._data:
            dense = [Fraction(0)] * self.cols
            for j, v in r.items():
                dense[j] = v
            out.append(dense)
        return out

    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def is_zero(self) -> bool:
        return all(not r for r in self._data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "RatMatrix":
        data = [dict() for _ in range(self.cols)]
        for i, r in enumerate(self._data):
            for j, v in r.items():
                data[j][i] = v
        out = RatMatrix(self.cols, self.rows)
        out._data = data
        return out

    def apply(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ShapeError(f"vector of length {len(vec)} against {self.cols} columns")
        return [sum((v * vec[j] for j, v in r.items()), Fraction(0)) for r in self._data]

    # arithmetic -----------------------------------------------------------
    def _combine(self, other: "RatMatrix", sign: int) -> "RatMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        data = []
        for a, b in zip(self._data, other._data):
            row = dict(a)
            for j, v in b.items():
                s = row.get(j, 0) + sign * v
                if s:
                    row[j] = s
                else:
                    row.pop(j, None)
            data.append(row)
        out = RatMatrix(self.rows, self.cols)
        out._data = data
        return out

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "RatMatrix":
        c = as_rational(c)
        out = RatMatrix(self.rows, self.cols)
        if c:
            out._data = [{j: c * v for j, v in r.items()} for r in self._data]
        return out

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other):
        return matmul(self, other)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(r.items())) for r in self._data)))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.to_rows())
        return f"RatMatrix([{body}])"


def kron(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Kronecker product; index (i, k) of a and b lands at i*b.rows + k."""
    out = RatMatrix(a.rows * b.rows, a.cols * b.cols)
    for i, ra in enumerate(a._data):
        for k, rb in enumerate(b._data):
            out._data[i * b.rows + k] = {
                j * b.cols + l: va * vb for j, va in ra.items() for l, vb in rb.items()
            }
    return out


def matmul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    out = RatMatrix(a.rows, b.cols)
    bd = b._data
    for i, ra in enumerate(a._data):
        acc: dict = {}
        for k, va in ra.items():
            for j, vb in bd[k].items():
                acc[j] = acc.get(j, 0) + va * vb
        out._data[i] = {j: v for j, v in acc.items() if v}
    return out


# elimination ----------------------------------------------------------------

def _integer_rows(m: RatMatrix) -> list[dict]:
    # scaling a row by a nonzero rational does not change the rank
    rows = []
    for r in m._data:
        if not r:
            continue
        den = lcm(*(v.denominator for v in r.values()))
        rows.append({j: int(v * den) for j, v in r.items()})
    return rows


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {j: v // g for j, v in row.items()}


def rank(m: RatMatrix) -> int:
    """Exact rank by fraction-free elimination on integer rows.

    Rows are cleared of denominators, the pivot in each column is the entry
    of largest magnitude, and eliminated rows are updated as
    ``p*row - c*pivot_row`` followed by division by their content, so every
    intermediate stays an integer and no fill-in is created in rows that do
    not meet the pivot column.
    """
    active = _integer_rows(m)
    by_col: dict[int, set] = {}
    for idx, r in enumerate(active):
        for j in r:
            by_col.setdefault(j, set()).add(idx)
    alive = set(range(len(active)))
    rk = 0
    for col in range(m.cols):
        cand = [i for i in by_col.pop(col, ()) if i in alive and col in active[i]]
        if not cand:
            continue
        piv = max(cand, key=lambda i: (abs(active[i][col]), -i))
        prow = active[piv]
        p = prow[col]
        alive.discard(piv)
        rk += 1
        for i in cand:
            if i == piv:
                continue
            row = active[i]
            c = row[col]
            new = {j: p * v for j, v in row.items()}
            for j, v in prow.items():
                s = new.get(j, 0) - c * v
                if s:
                    if j not in new:
                        by_col.setdefault(j, set()).add(i)
                    new[j] = s
                else:
                    new.pop(j, None)
            active[i] = _primitive(new) if new else new
            if not new:
                alive.discard(i)
    return rk


def rref(m: RatMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals and its pivot columns."""
    a = m.to_rows()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        p = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        prow = a[r] = [x * inv for x in a[r]]
        support = [j for j in range(c, m.cols) if prow[j]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                ai = a[i]
                for j in support:
                    ai[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return a, pivots


def rank_gauss(m: RatMatrix) -> int:
    """Rank via rational Gauss-Jordan; an independent route to :func:`rank`."""
    return len(rref(m)[1])


def kernel_basis(m: RatMatrix) -> list[list[Fraction]]:
    """Basis of the right null space, one vector per free column."""
    a, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][free]
        basis.append(v)
    return basis


def det(m: RatMatrix) -> Fraction:
    """Bareiss determinant with largest-magnitude pivoting."""
    if not m.is_square():
        raise ShapeError(f"determinant of non-square {m.shape} matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    rows = m.to_rows()
    scale = Fraction(1)
    a = []
    for r in rows:
        den = lcm(*(v.denominator for v in r))
        scale *= den
        a.append([int(v * den) for v in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        p = max(range(k, n), key=lambda i: (abs(a[i][k]), -i))
        if a[p][k] == 0:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ai = a[i]
            ak = a[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * ak[j]) // prev
            ai[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1]) / scale


def invert(m: RatMatrix) -> RatMatrix:
    if not m.is_square():
        raise ShapeError(f"inverse of non-square {m.shape} matrix")
    n = m.rows
    aug = RatMatrix.block([[m, RatMatrix.identity(n)]])
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    return RatMatrix.from_rows([row[n:] for row in red[:n]], cols=n)


# polynomials ------------------------------------------------------------------

class RatPoly:
    """Univariate polynomial with exact coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("n" if k == 1 else f"n^{k}")
            mag = abs(c)
            body = str(mag) if (mag != 1 or not mono) else ""
            if body and mono:
                body += "*"
            term = body + mono
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
        return " ".join(parts)

    def integer_roots(self) -> list[int]:
        """All integer roots, ascending.  The zero polynomial raises."""
        if self.is_zero():
            raise ValueError("every integer is a root of the zero polynomial")
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        low = next(k for k, c in enumerate(ints) if c)
        roots = {0} if low > 0 else set()
        c0 = abs(ints[low])
        # nonzero integer roots divide the lowest nonzero coefficient
        d = 1
        while d * d <= c0:
            if c0 % d == 0:
                for q in {d, c0 // d}:
                    for cand in (q, -q):
                        if self(cand) == 0:
                            roots.add(cand)
            d += 1
        return sorted(roots)


def charpoly(m: RatMatrix) -> RatPoly:
    """det(t*I - m) by the Faddeev-LeVerrier recursion."""
    if not m.is_square():
        raise ShapeError("characteristic polynomial of non-square matrix")
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = RatMatrix.zeros(n, n)
    eye = RatMatrix.identity(n)
    for k in range(1, n + 1):
        mk = matmul(m, mk + eye.scale(coeffs[n - k + 1]))
        tr = sum((mk[i, i] for i in range(n)), Fraction(0))
        coeffs[n - k] = -tr / k
    return RatPoly(coeffs)
