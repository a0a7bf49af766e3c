"""Exterior algebra of the dual of a Lie algebra, with the Chevalley-Eilenberg differential.

Basis k-forms ``e^I`` are keyed by bitmasks: bit ``i-1`` set means ``e^i``
appears. Within a degree the canonical order is lexicographic on the sorted
index tuple, which is the order ``itertools.combinations`` produces.

The differential follows ``(d a)(X, Y) = -a([X, Y])`` on invariant 1-forms,
with no factor 1/2, so ``d e^k = -sum_{i<j} c^k_ij e^i ^ e^j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from types import MappingProxyType
from typing import Mapping, Sequence

from .linalg import Matrix
from .scalars import as_scalar, format_scalar

__all__ = [
    "LieAlgebra",
    "Form",
    "AlgebraCheck",
    "wedge",
    "interior",
    "ce_d",
    "validate_algebra",
    "lie_derivative_endo",
    "lie_derivative_form",
    "basis_masks",
    "mask_index",
    "vector",
]


# --- bitmask helpers -------------------------------------------------------


@lru_cache(maxsize=None)
def basis_masks(dim: int, degree: int) -> tuple[int, ...]:
    if degree < 0 or degree > dim:
        return ()
    return tuple(sum(1 << i for i in c) for c in combinations(range(dim), degree))


@lru_cache(maxsize=None)
def mask_index(dim: int, degree: int) -> Mapping[int, int]:
    return MappingProxyType({m: i for i, m in enumerate(basis_masks(dim, degree))})


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _merge_sign(a: int, b: int) -> int:
    """Sign of ``e^a ^ e^b`` relative to ``e^(a|b)``: parity of inversions."""
    inv = 0
    for j in _bits(b):
        inv += bin(a >> (j + 1)).count("1")
    return -1 if inv & 1 else 1


def _mask_key(mask: int):
    return tuple(_bits(mask))


def vector(dim: int, *entries) -> tuple:
    """Coordinate vector. ``vector(3, {3: 1})`` gives ``e_3``; a plain sequence is taken as-is."""
    if len(entries) == 1 and isinstance(entries[0], Mapping):
        v = [Fraction(0)] * dim
        for k, c in entries[0].items():
            v[k - 1] = as_scalar(c)
        return tuple(v)
    if len(entries) != dim:
        raise ValueError("vector length does not match dimension")
    return tuple(as_scalar(x) for x in entries)


# --- Lie algebra model -----------------------------------------------------


class LieAlgebra:
    """Finite-dimensional Lie algebra given by structure constants ``[e_i, e_j] = sum_k c^k_ij e_k``.

    Indices are 0-based internally; ``from_brackets`` takes the 1-based form
    used in documents.
    """

    def __init__(self, dim: int, brackets: Mapping[tuple[int, int], Sequence] | None = None, name: str = ""):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        self.name = name
        table = {}
        for (i, j), coeffs in (brackets or {}).items():
            if not 0 <= i < j < dim:
                raise ValueError(f"bracket key ({i}, {j}) must satisfy 0 <= i < j < dim")
            coeffs = tuple(as_scalar(c) for c in coeffs)
            if len(coeffs) != dim:
                raise ValueError("bracket coefficient vector has wrong length")
            if any(coeffs):
                table[(i, j)] = coeffs
        self._brackets = MappingProxyType(dict(sorted(table.items())))
        self._d_cache: dict[int, Matrix] = {}
        self._d_mask_cache: dict[int, Form] = {}

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[tuple[int, int], Mapping[int, object]], name: str = ""):
        """``from_brackets(3, {(1, 2): {3: 1}})`` is the Heisenberg algebra."""
        table = {}
        for (i, j), coeffs in brackets.items():
            v = [Fraction(0)] * dim
            for k, c in coeffs.items():
                if not 1 <= k <= dim:
                    raise ValueError(f"bracket output index {k} out of range")
                v[k - 1] = as_scalar(c)
            if i > j:
                i, j, v = j, i, [-x for x in v]
            table[(i - 1, j - 1)] = v
        return cls(dim, table, name)

    @property
    def brackets(self) -> Mapping[tuple[int, int], tuple]:
        return self._brackets

    def structure(self, i: int, j: int) -> tuple:
        if i == j:
            return (0,) * self.dim
        if i < j:
            return self._brackets.get((i, j), (0,) * self.dim)
        return tuple(-x for x in self._brackets.get((j, i), (0,) * self.dim))

    def bracket(self, X: Sequence, Y: Sequence) -> tuple:
        out = [0] * self.dim
        for (i, j), c in self._brackets.items():
            w = X[i] * Y[j] - X[j] * Y[i]
            if w:
                for k, ck in enumerate(c):
                    if ck:
                        out[k] += w * ck
        return tuple(out)

    def ad(self, X: Sequence) -> Matrix:
        cols = [self.bracket(X, _unit(self.dim, j)) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim)

    def is_abelian(self) -> bool:
        return not self._brackets

    def d_generator(self, k: int) -> "Form":
        """``d e^(k+1)`` (0-based ``k``)."""
        coeffs = {}
        for (i, j), c in self._brackets.items():
            if c[k]:
                coeffs[(1 << i) | (1 << j)] = -c[k]
        return Form(self.dim, 2, coeffs)

    def d_mask(self, mask: int) -> "Form":
        """``d e^I`` via the antiderivation rule, memoised per mask."""
        hit = self._d_mask_cache.get(mask)
        if hit is not None:
            return hit
        bits = _bits(mask)
        deg = len(bits)
        if deg == 0:
            res = Form.zero(self.dim, 1)
        else:
            first = bits[0]
            rest = mask & ~(1 << first)
            head = Form(self.dim, 1, {1 << first: 1})
            res = self.d_generator(first).wedge(Form(self.dim, deg - 1, {rest: 1})) - head.wedge(self.d_mask(rest))
        self._d_mask_cache[mask] = res
        return res

    def d_matrix(self, degree: int) -> Matrix:
        """Matrix of ``d: Lambda^k -> Lambda^(k+1)`` in the canonical bases."""
        hit = self._d_cache.get(degree)
        if hit is not None:
            return hit
        src = basis_masks(self.dim, degree)
        tgt_index = mask_index(self.dim, degree + 1)
        n_tgt = len(tgt_index)
        cols = []
        for m in src:
            col = [0] * n_tgt
            for tm, c in self.d_mask(m).items():
                col[tgt_index[tm]] = c
            cols.append(col)
        mat = Matrix.from_columns(cols, n_tgt) if cols else Matrix([()] * n_tgt, 0)
        self._d_cache[degree] = mat
        return mat

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, name={self.name!r})"


def _unit(n, j):
    return tuple(1 if i == j else 0 for i in range(n))


# --- forms -------------------------------------------------------------------


class Form:
    """A homogeneous invariant form with exact coefficients; only nonzeros are stored."""

    __slots__ = ("dim", "degree", "_c")

    def __init__(self, dim: int, degree: int, coeffs: Mapping[int, object] = ()):
        c = {}
        for mask, x in dict(coeffs).items():
            if x:
                if bin(mask).count("1") != degree or mask >> dim:
                    raise ValueError(f"basis mask {mask:b} does not fit degree {degree} in dimension {dim}")
                c[mask] = x
        self.dim = dim
        self.degree = degree
        self._c = dict(sorted(c.items(), key=lambda kv: _mask_key(kv[0])))

    @classmethod
    def zero(cls, dim, degree):
        return cls(dim, degree, {})

    @classmethod
    def constant(cls, dim, c=1):
        return cls(dim, 0, {0: as_scalar(c)})

    @classmethod
    def basis(cls, dim: int, *indices: int, coeff=1):
        """``Form.basis(3, 1, 3)`` is ``e^13`` (1-based, any order, sign from sorting)."""
        if len(set(indices)) != len(indices):
            return cls.zero(dim, len(indices))
        mask = 0
        sign = 1
        for i in indices:
            if not 1 <= i <= dim:
                raise ValueError(f"index {i} out of range")
            bit = 1 << (i - 1)
            if bin(mask & ~((bit << 1) - 1)).count("1") & 1:
                sign = -sign
            mask |= bit
        return cls(dim, len(indices), {mask: sign * as_scalar(coeff)})

    @classmethod
    def from_vector(cls, dim: int, degree: int, vec: Sequence):
        masks = basis_masks(dim, degree)
        if len(vec) != len(masks):
            raise ValueError("coordinate vector has wrong length")
        return cls(dim, degree, dict(zip(masks, vec)))

    @property
    def coeffs(self) -> Mapping[int, object]:
        return MappingProxyType(self._c)

    def items(self):
        return self._c.items()

    def to_vector(self) -> tuple:
        return tuple(self._c.get(m, 0) for m in basis_masks(self.dim, self.degree))

    def coefficient(self, *indices):
        probe = Form.basis(self.dim, *indices)
        (mask, sign), = probe.items()
        return sign * self._c.get(mask, 0)

    def _compatible(self, other: "Form"):
        if not isinstance(other, Form):
            raise TypeError("expected a Form")
        if other.dim != self.dim:
            raise ValueError("forms live over different dimensions")

    def __add__(self, other: "Form") -> "Form":
        self._compatible(other)
        if other.degree != self.degree and self._c and other._c:
            raise ValueError("cannot add forms of different degree")
        c = dict(self._c)
        for m, x in other._c.items():
            c[m] = c.get(m, 0) + x
        return Form(self.dim, self.degree if self._c or not other._c else other.degree, c)

    def __neg__(self):
        return Form(self.dim, self.degree, {m: -x for m, x in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, Form):
            return NotImplemented
        return Form(self.dim, self.degree, {m: x * scalar for m, x in self._c.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return self.wedge(other)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if not self._c and not other._c:
            return self.dim == other.dim
        return self.dim == other.dim and self.degree == other.degree and self._c == other._c

    def __hash__(self):
        return hash((self.dim, self.degree, tuple(self._c.items())))

    def conjugate(self) -> "Form":
        return Form(self.dim, self.degree, {m: x.conjugate() for m, x in self._c.items()})

    def wedge(self, other: "Form") -> "Form":
        self._compatible(other)
        out: dict[int, object] = {}
        for a, x in self._c.items():
            for b, y in other._c.items():
                if a & b:
                    continue
                m = a | b
                term = x * y if _merge_sign(a, b) > 0 else -(x * y)
                out[m] = out.get(m, 0) + term
        return Form(self.dim, self.degree + other.degree, out)

    def power(self, n: int) -> "Form":
        res = Form.constant(self.dim, 1)
        for _ in range(n):
            res = res.wedge(self)
        return res

    def interior(self, v: Sequence) -> "Form":
        if len(v) != self.dim:
            raise ValueError("vector dimension mismatch")
        if self.degree == 0:
            return Form.zero(self.dim, 0)
        out: dict[int, object] = {}
        for mask, x in self._c.items():
            for pos, k in enumerate(_bits(mask)):
                if v[k]:
                    m = mask & ~(1 << k)
                    term = x * v[k] if pos % 2 == 0 else -(x * v[k])
                    out[m] = out.get(m, 0) + term
        return Form(self.dim, self.degree - 1, out)

    def evaluate(self, *vectors: Sequence):
        """``a(X_1, ..., X_k)`` with the determinant normalisation ``e^12(e_1, e_2) = 1``."""
        if len(vectors) != self.degree:
            raise ValueError("wrong number of arguments")
        res: Form = self
        for v in vectors:
            res = res.interior(v)
        return res._c.get(0, 0)

    def __repr__(self):
        return f"Form({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        sep = "," if self.dim > 9 else ""
        for mask, x in self._c.items():
            idx = sep.join(str(i + 1) for i in _bits(mask))
            s = format_scalar(x)
            label = f"e^{idx}" if mask else ""
            if not mask:
                parts.append(s)
            elif s == "1":
                parts.append(label)
            elif s == "-1":
                parts.append("-" + label)
            else:
                parts.append(f"({s}){label}" if any(ch in s[1:] for ch in "+-i") else f"{s}{label}")
        return " + ".join(parts).replace("+ -", "- ")


def wedge(a: Form, b: Form) -> Form:
    return a.wedge(b)


def interior(v: Sequence, a: Form) -> Form:
    return a.interior(v)


def ce_d(model: LieAlgebra, a: Form) -> Form:
    if a.dim != model.dim:
        raise ValueError("form and model dimensions differ")
    out: dict[int, object] = {}
    for mask, x in a.items():
        for m, y in model.d_mask(mask).items():
            out[m] = out.get(m, 0) + x * y
    return Form(model.dim, a.degree + 1, out)


@dataclass(frozen=True)
class AlgebraCheck:
    valid: bool
    triple: tuple[int, int, int] | None = None
    residual: tuple | None = None
    d_squared_zero: bool = True

    def describe(self) -> str:
        if self.valid:
            return "valid"
        i, j, k = self.triple
        res = ", ".join(format_scalar(x) for x in self.residual)
        return f"Jacobi identity fails on ({i}, {j}, {k}): residual ({res})"


def validate_algebra(model: LieAlgebra) -> AlgebraCheck:
    """Jacobi identity on all basis triples, cross-checked against ``d o d = 0`` on generators.

    The residual is ``[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]``
    for the first failing triple (1-based).
    """
    m = model.dim
    e = [_unit(m, i) for i in range(m)]
    br = model.bracket
    d_sq = all(not ce_d(model, model.d_generator(k)) for k in range(m))
    for i, j, k in combinations(range(m), 3):
        r1 = br(br(e[i], e[j]), e[k])
        r2 = br(br(e[j], e[k]), e[i])
        r3 = br(br(e[k], e[i]), e[j])
        res = tuple(a + b + c for a, b, c in zip(r1, r2, r3))
        if any(res):
            return AlgebraCheck(False, (i + 1, j + 1, k + 1), res, d_sq)
    return AlgebraCheck(True, None, None, d_sq)


def lie_derivative_endo(model: LieAlgebra, v: Sequence, phi: Matrix) -> Matrix:
    """``X -> [v, phi X] - phi [v, X]`` as a matrix (columns are images of basis vectors)."""
    m = model.dim
    if phi.shape != (m, m):
        raise ValueError("endomorphism must be square of model dimension")
    cols = []
    for j in range(m):
        ej = _unit(m, j)
        a = model.bracket(v, phi.column(j))
        b = phi.apply(model.bracket(v, ej))
        cols.append(tuple(x - y for x, y in zip(a, b)))
    return Matrix.from_columns(cols, m)


def lie_derivative_form(model: LieAlgebra, v: Sequence, a: Form) -> Form:
    """Lie derivative of an invariant form along ``v``, from brackets alone.

    ``(L_v a)(X_1..X_k) = -sum_i a(X_1, .., [v, X_i], .., X_k)``, i.e. ``L_v`` acts on
    each covector factor by ``-ad_v^T``.
    """
    m = model.dim
    ad = model.ad(v)
    # action on covectors: (L_v e^k)(X) = -e^k([v, X]) = -(row k of ad) . X
    co = [Form(m, 1, {1 << j: -ad[k, j] for j in range(m)}) for k in range(m)]
    out = Form.zero(m, a.degree)
    for mask, x in a.items():
        bits = _bits(mask)
        for pos, k in enumerate(bits):
            left = Form(m, pos, {sum(1 << b for b in bits[:pos]): 1})
            right = Form(m, len(bits) - pos - 1, {sum(1 << b for b in bits[pos + 1:]): 1})
            out = out + (left.wedge(co[k]).wedge(right)) * x
    return out
