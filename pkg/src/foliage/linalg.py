"""Exact linear algebra over Q and Q(i).

Vectors are tuples of exact scalars, matrices are immutable row tuples. The
elimination core is a fraction-free (Bareiss) forward sweep followed by a
normalising back sweep, with first-nonzero pivoting so that every echelon
basis, kernel basis and coset representative is reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

from .scalars import Gauss

__all__ = [
    "Matrix",
    "Subspace",
    "QuotientSpace",
    "Gram",
    "LinalgError",
    "ContainmentError",
    "rref",
    "rank",
    "kernel_basis",
    "image_basis",
    "solve",
    "induced_map",
    "gram_adjoint",
    "hstack",
    "vstack",
    "block_diag",
    "is_positive_definite",
    "leading_minors",
    "det",
]


class LinalgError(ValueError):
    pass


class ContainmentError(LinalgError):
    """A vector expected inside a subspace is not; ``witness`` names it."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _zero_vec(n):
    return (0,) * n


def _is_zero_vec(v):
    return not any(v)


class Matrix:
    __slots__ = ("rows", "nrows", "ncols", "__weakref__")

    def __init__(self, rows: Iterable[Sequence], ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise LinalgError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise LinalgError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls([_zero_vec(ncols)] * nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls([tuple(1 if i == j else 0 for j in range(n)) for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int):
        columns = [tuple(c) for c in columns]
        return cls([tuple(c[i] for c in columns) for i in range(nrows)], len(columns))

    @classmethod
    def diagonal(cls, entries):
        n = len(entries)
        return cls([tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)], n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self):
        return Matrix(zip(*self.rows), self.nrows) if self.nrows else Matrix([()] * self.ncols, 0)

    @property
    def H(self):
        t = self.T
        return Matrix([[x.conjugate() for x in r] for r in t.rows], t.ncols)

    def conj(self):
        return Matrix([[x.conjugate() for x in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise LinalgError(f"shape mismatch {self.shape} @ {other.shape}")
        n = other.ncols
        orows = other.rows
        out = []
        for row in self.rows:
            acc = [0] * n
            for k, a in enumerate(row):
                if a:
                    for j, b in enumerate(orows[k]):
                        if b:
                            acc[j] += a * b
            out.append(acc)
        return Matrix(out, n)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.ncols:
            raise LinalgError("vector length mismatch")
        out = []
        for row in self.rows:
            s = 0
            for a, b in zip(row, v):
                if a and b:
                    s += a * b
            out.append(s)
        return tuple(out)

    def __add__(self, other):
        if self.shape != other.shape:
            raise LinalgError("shape mismatch in +")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise LinalgError("shape mismatch in -")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c):
        return Matrix([[c * a for a in r] for r in self.rows], self.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def is_zero(self) -> bool:
        return all(_is_zero_vec(r) for r in self.rows)

    def nonzero_entries(self):
        return [(i, j, x) for i, r in enumerate(self.rows) for j, x in enumerate(r) if x]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise LinalgError("inverse of a non-square matrix")
        aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)]
        red, piv = rref(aug, 2 * n)
        if tuple(piv[:n]) != tuple(range(n)) or len(red) < n:
            raise LinalgError("singular matrix")
        return Matrix([r[n:] for r in red[:n]], n)

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]!r})"


def hstack(*ms: Matrix) -> Matrix:
    n = ms[0].nrows
    if any(m.nrows != n for m in ms):
        raise LinalgError("hstack row mismatch")
    return Matrix([sum((m.rows[i] for m in ms), ()) for i in range(n)], sum(m.ncols for m in ms))


def vstack(*ms: Matrix) -> Matrix:
    n = ms[0].ncols
    if any(m.ncols != n for m in ms):
        raise LinalgError("vstack column mismatch")
    return Matrix([r for m in ms for r in m.rows], n)


def block_diag(*ms: Matrix) -> Matrix:
    total = sum(m.ncols for m in ms)
    rows = []
    offset = 0
    for m in ms:
        for r in m.rows:
            rows.append((0,) * offset + r + (0,) * (total - offset - m.ncols))
        offset += m.ncols
    return Matrix(rows, total)


# --- elimination -----------------------------------------------------------


def _denominators(x):
    if isinstance(x, Gauss):
        return (x.re.denominator, x.im.denominator)
    if isinstance(x, Fraction):
        return (x.denominator,)
    return (1,)


def _integerize(row, gaussian):
    """Scale a row by the lcm of its denominators (row space is unchanged).

    Real rows come back as Python ints, Gaussian rows as integral ``Gauss``.
    """
    dens = [d for x in row if x for d in _denominators(x)]
    m = lcm(*dens) if dens else 1
    if gaussian:
        return [Gauss(x * m) if not isinstance(x, Gauss) else x * m for x in row]
    return [int(x * m) for x in row]


def _exact_div(a, b):
    if type(a) is int:
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("Bareiss division was not exact")
        return q
    return a / b


def rref(rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form. Returns ``(nonzero_rows, pivot_columns)``.

    Forward elimination is fraction-free (Bareiss): every intermediate entry of
    an integer input is itself an integer minor, so growth stays polynomial.
    """
    gaussian = any(isinstance(x, Gauss) for r in rows for x in r)
    m = [_integerize(r, gaussian) for r in rows]
    nrows = len(m)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = _exact_div(piv * row[j] - f * prow[j], prev)
            elif prev != piv:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = _exact_div(piv * row[j], prev)
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    out = m[:r]
    # normalising back sweep
    for k in range(r - 1, -1, -1):
        c = pivots[k]
        row = out[k]
        inv = 1 / row[c] if isinstance(row[c], Gauss) else Fraction(1, row[c])
        out[k] = row = [x * inv if x else 0 for x in row]
        for i in range(k):
            f = out[i][c]
            if f:
                out[i] = [a - f * b if b else a for a, b in zip(out[i], row)]
    return [tuple(_canon(x) for x in row) for row in out], pivots


def _canon(x):
    if not x:
        return 0
    if isinstance(x, Gauss):
        return x
    return Fraction(x)


def rank(A: Matrix) -> int:
    return len(rref(A.rows, A.ncols)[1])


def kernel_basis(A: Matrix) -> "Subspace":
    red, piv = rref(A.rows, A.ncols)
    free = [j for j in range(A.ncols) if j not in set(piv)]
    vecs = []
    for f in free:
        v = [0] * A.ncols
        v[f] = 1
        for row, p in zip(red, piv):
            if row[f]:
                v[p] = -row[f]
        vecs.append(tuple(v))
    return Subspace(A.ncols, vecs)


def image_basis(A: Matrix) -> "Subspace":
    return Subspace(A.nrows, A.columns())


def solve(A: Matrix, b: Sequence):
    """One exact solution of ``A x = b`` (free variables set to zero), or ``None``."""
    if len(b) != A.nrows:
        raise LinalgError("rhs length mismatch")
    aug = [tuple(r) + (bi,) for r, bi in zip(A.rows, b)]
    red, piv = rref(aug, A.ncols + 1)
    if piv and piv[-1] == A.ncols:
        return None
    x = [0] * A.ncols
    for row, p in zip(red, piv):
        x[p] = row[-1]
    return tuple(x)


# --- subspaces -------------------------------------------------------------


class _Coordinatizer:
    """Coordinates of vectors with respect to a fixed independent family."""

    def __init__(self, ambient: int, vectors: Sequence[tuple]):
        r = len(vectors)
        self.ambient = ambient
        self.vectors = [tuple(v) for v in vectors]
        aug = [tuple(v) + tuple(1 if i == j else 0 for j in range(r)) for i, v in enumerate(self.vectors)]
        red, piv = rref(aug, ambient + r)
        if len(piv) < r or (piv and piv[r - 1] >= ambient):
            raise LinalgError("family is not linearly independent")
        self.pivots = piv[:r]
        self.transform = [row[ambient:] for row in red[:r]]

    def __call__(self, v: Sequence, check: bool = True):
        r = len(self.vectors)
        u = [v[p] for p in self.pivots]
        c = [0] * r
        for uj, trow in zip(u, self.transform):
            if uj:
                for i, t in enumerate(trow):
                    if t:
                        c[i] += uj * t
        if check:
            recon = [0] * self.ambient
            for ci, vec in zip(c, self.vectors):
                if ci:
                    for k, x in enumerate(vec):
                        if x:
                            recon[k] += ci * x
            if any(a != b for a, b in zip(recon, v)):
                raise ContainmentError("vector is not in the span", witness=tuple(v))
        return tuple(c)


class Subspace:
    """A subspace of K^n with its canonical reduced-echelon basis."""

    __slots__ = ("ambient", "basis", "pivots", "__dict__")

    def __init__(self, ambient: int, vectors: Iterable[Sequence] = ()):
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise LinalgError("vector length does not match ambient dimension")
        red, piv = rref(vectors, ambient) if vectors else ([], [])
        self.ambient = ambient
        self.basis = tuple(red)
        self.pivots = tuple(piv)

    @classmethod
    def full(cls, n):
        return cls(n, Matrix.identity(n).rows)

    @classmethod
    def zero(cls, n):
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        """Basis vectors as columns (ambient x dim)."""
        return Matrix.from_columns(self.basis, self.ambient)

    def contains(self, v: Sequence) -> bool:
        try:
            self.coordinates(v)
        except ContainmentError:
            return False
        return True

    def coordinates(self, v: Sequence) -> tuple:
        if len(v) != self.ambient:
            raise LinalgError("vector length mismatch")
        c = tuple(v[p] for p in self.pivots)
        recon = [0] * self.ambient
        for ci, b in zip(c, self.basis):
            if ci:
                for k, x in enumerate(b):
                    if x:
                        recon[k] += ci * x
        if any(a != b for a, b in zip(recon, v)):
            raise ContainmentError("vector is not in the subspace", witness=tuple(v))
        return c

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return all(other.contains(b) for b in self.basis)

    def first_outside(self, other: "Subspace"):
        for b in self.basis:
            if not other.contains(b):
                return b
        return None

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace(self.ambient, self.basis + other.basis)

    def sum(self, other):
        return self + other

    def annihilator(self) -> "Subspace":
        """Vectors w with sum_i w_i v_i = 0 for all v in the subspace (bilinear, no conjugation)."""
        if not self.basis:
            return Subspace.full(self.ambient)
        return kernel_basis(Matrix(self.basis, self.ambient))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        eqs = self.annihilator().basis + other.annihilator().basis
        if not eqs:
            return Subspace.full(self.ambient)
        return kernel_basis(Matrix(eqs, self.ambient))

    def __and__(self, other):
        return self.intersect(other)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def _check_ambient(self, other):
        if self.ambient != other.ambient:
            raise LinalgError(f"ambient mismatch: {self.ambient} vs {other.ambient}")

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"


class QuotientSpace:
    """``numerator / denominator`` with deterministic coset representatives.

    Representatives complete the denominator's echelon basis using the
    numerator's echelon basis vectors, scanned in order.
    """

    def __init__(self, numerator: Subspace, denominator: Subspace):
        numerator._check_ambient(denominator)
        w = denominator.first_outside(numerator)
        if w is not None:
            raise ContainmentError("denominator is not contained in numerator", witness=w)
        self.numerator = numerator
        self.denominator = denominator
        reps = []
        current = denominator
        for b in numerator.basis:
            if not current.contains(b):
                reps.append(b)
                current = Subspace(numerator.ambient, current.basis + (b,))
        self.representatives = tuple(reps)

    @property
    def dim(self) -> int:
        return len(self.representatives)

    @property
    def ambient(self) -> int:
        return self.numerator.ambient

    @cached_property
    def _coords(self):
        return _Coordinatizer(self.ambient, list(self.denominator.basis) + list(self.representatives))

    def class_of(self, v: Sequence) -> tuple:
        """Coordinates of the class of ``v`` (which must lie in the numerator)."""
        if not self.numerator.contains(v):
            raise ContainmentError("vector is not in the numerator", witness=tuple(v))
        c = self._coords(v)
        return c[self.denominator.dim:]

    def is_zero_class(self, v: Sequence) -> bool:
        return not any(self.class_of(v))

    def __repr__(self):
        return f"QuotientSpace(dim={self.dim}, ambient={self.ambient})"


def induced_map(q1: QuotientSpace, q2: QuotientSpace, A: Matrix) -> Matrix:
    """Matrix of the map induced by ``A`` from ``q1`` to ``q2`` (columns = images of q1's classes)."""
    if A.ncols != q1.ambient or A.nrows != q2.ambient:
        raise LinalgError("induced_map: shape mismatch")
    for b in q1.denominator.basis:
        img = A.apply(b)
        if not q2.denominator.contains(img):
            raise ContainmentError("map does not preserve denominators", witness=b)
    for b in q1.numerator.basis:
        img = A.apply(b)
        if not q2.numerator.contains(img):
            raise ContainmentError("map does not preserve numerators", witness=b)
    cols = [q2.class_of(A.apply(r)) for r in q1.representatives]
    return Matrix.from_columns(cols, q2.dim) if cols else Matrix([()] * q2.dim, 0)


def det(M: Matrix):
    """Exact determinant by Bareiss elimination with first-nonzero pivoting."""
    n = M.nrows
    if n != M.ncols:
        raise LinalgError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    a = [[x if isinstance(x, Gauss) else Fraction(x) for x in r] for r in M.rows]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (piv * a[i][j] - a[i][k] * a[k][j]) / prev
            a[i][k] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


# --- Grams ---------------------------------------------------------------


def leading_minors(M: Matrix):
    """Leading principal minors, computed exactly by pivot products."""
    n = M.nrows
    a = [[x if isinstance(x, Gauss) else Fraction(x) for x in r] for r in M.rows]
    minors = []
    det = 1
    for k in range(n):
        piv = a[k][k]
        if not piv:
            # the k-th leading minor vanishes; later ones need pivoting, report None
            minors.append(0)
            minors.extend([None] * (n - k - 1))
            return minors
        det = det * piv
        minors.append(det)
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return minors


def _is_real_positive(x):
    if x is None:
        return False
    if isinstance(x, Gauss):
        return not x.im and x.re > 0
    return x > 0


def is_positive_definite(M: Matrix) -> bool:
    """Exact test for a Hermitian matrix: all leading principal minors positive."""
    if M.nrows != M.ncols or M.H != M:
        return False
    return all(_is_real_positive(m) for m in leading_minors(M))


class Gram:
    """A Hermitian positive-definite inner product ``<x, y> = x^H G y``."""

    __slots__ = ("matrix", "__dict__")

    def __init__(self, matrix: Matrix):
        if matrix.nrows != matrix.ncols:
            raise LinalgError("Gram matrix must be square")
        if matrix.H != matrix:
            raise LinalgError("Gram matrix must be Hermitian")
        if not is_positive_definite(matrix):
            raise LinalgError("Gram matrix is not positive definite")
        self.matrix = matrix

    @classmethod
    def identity(cls, n):
        return cls(Matrix.identity(n))

    @property
    def dim(self):
        return self.matrix.nrows

    def __eq__(self, other):
        if not isinstance(other, Gram):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    @cached_property
    def inverse(self) -> Matrix:
        return self.matrix.inverse() if self.dim else self.matrix

    def inner(self, x, y):
        gy = self.matrix.apply(y)
        s = 0
        for a, b in zip(x, gy):
            if a and b:
                s += a.conjugate() * b
        return s

    def restrict(self, basis: Matrix) -> "Gram":
        """Gram of the subspace spanned by the columns of ``basis``."""
        return Gram(basis.H @ self.matrix @ basis)


def gram_adjoint(A: Matrix, G_dom: Gram, G_cod: Gram) -> Matrix:
    """``A* = G_dom^{-1} A^H G_cod``, the adjoint of ``A: dom -> cod``."""
    if G_dom.dim != A.ncols or G_cod.dim != A.nrows:
        raise LinalgError("gram_adjoint: shape mismatch")
    if A.nrows == 0 or A.ncols == 0:
        return Matrix.zeros(A.ncols, A.nrows) if A.ncols else Matrix([], A.nrows)
    return G_dom.inverse @ A.H @ G_cod.matrix
