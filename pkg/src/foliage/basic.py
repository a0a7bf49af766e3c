"""Cochain complexes of invariant forms: de Rham and basic cohomology, harmonic
spaces, the inclusion of basic into de Rham cohomology, Hard Lefschetz and
Massey triple products.

A complex stores, per degree, a basis of its space as columns in the ambient
coordinates of ``Lambda^k`` and the differential in those intrinsic
coordinates. The full Chevalley-Eilenberg complex has identity embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Sequence

from .contact import is_contact, reeb_field
from .errors import InputError, InternalInconsistency, NotContactError
from .exterior import Form, LieAlgebra, basis_masks, ce_d, mask_index
from .linalg import (
    ContainmentError,
    Gram,
    Matrix,
    QuotientSpace,
    Subspace,
    _Coordinatizer,
    det,
    gram_adjoint,
    image_basis,
    induced_map,
    kernel_basis,
    rank,
    rref,
    vstack,
)

__all__ = [
    "CochainComplex",
    "CohomologyGroup",
    "HarmonicSpace",
    "InclusionDegree",
    "SymplecticVerdict",
    "OrientabilityVerdict",
    "LefschetzVerdict",
    "MasseyResult",
    "MasseyUndefined",
    "full_complex",
    "basic_subcomplex",
    "interior_matrix",
    "cohomology",
    "betti",
    "inclusion_map",
    "symplectic_obstruction",
    "homological_orientability",
    "form_grams",
    "complex_grams",
    "harmonic_space",
    "hard_lefschetz_check",
    "massey_triple",
    "massey_scan",
]


def _empty(nrows, ncols):
    return Matrix.zeros(nrows, ncols)


class CochainComplex:
    """A subcomplex of the Chevalley-Eilenberg complex of ``model`` (degrees ``0..dim``)."""

    def __init__(self, model: LieAlgebra, embeddings: Sequence[Matrix], differentials: Sequence[Matrix],
                 xi: tuple | None = None, name: str = ""):
        m = model.dim
        if len(embeddings) != m + 1 or len(differentials) != m + 1:
            raise ValueError("need one embedding and one differential per degree 0..dim")
        self.model = model
        self.embeddings = tuple(embeddings)
        self.differentials = tuple(differentials)
        self.xi = None if xi is None else tuple(xi)
        self.name = name
        self.spaces = tuple(Subspace(e.nrows, e.columns()) for e in self.embeddings)
        for k, (sp, e) in enumerate(zip(self.spaces, self.embeddings)):
            if list(sp.basis) != e.columns():
                raise ValueError(f"embedding in degree {k} must list a reduced-echelon basis")
        for k in range(m):
            if not (self.differentials[k + 1] @ self.differentials[k]).is_zero():
                raise InternalInconsistency(f"d o d != 0 in degree {k}")

    @property
    def top(self) -> int:
        return self.model.dim

    @property
    def dims(self) -> list[int]:
        return [e.ncols for e in self.embeddings]

    def d(self, k: int) -> Matrix:
        if k < 0:
            return _empty(self.dims[0], 0)
        return self.differentials[k]

    def form(self, k: int, coords: Sequence) -> Form:
        return Form.from_vector(self.model.dim, k, self.embeddings[k].apply(coords))

    def basis_forms(self, k: int) -> list[Form]:
        return [Form.from_vector(self.model.dim, k, c) for c in self.embeddings[k].columns()]

    def coords(self, a: Form) -> tuple:
        k = a.degree
        if a.dim != self.model.dim:
            raise ValueError("form lives on a different model")
        if k > self.top:
            return ()
        try:
            return self.spaces[k].coordinates(a.to_vector())
        except ContainmentError:
            raise ContainmentError(f"form {a} is not in degree {k} of the complex", witness=a) from None

    def contains(self, a: Form) -> bool:
        return a.degree > self.top or self.spaces[a.degree].contains(a.to_vector())

    @cached_property
    def cohomology(self) -> list["CohomologyGroup"]:
        return cohomology(self)

    @cached_property
    def _exactness(self):
        """Per degree k: (pivot columns of d_{k-1}, coordinatizer of those columns)."""
        out = []
        for k in range(self.top + 1):
            dk = self.d(k - 1)
            if dk.ncols == 0 or dk.is_zero():
                out.append(None)
                continue
            _, piv = rref(dk.rows, dk.ncols)
            cols = [dk.column(j) for j in piv]
            out.append((piv, _Coordinatizer(dk.nrows, cols)))
        return out

    def primitive(self, target: Form) -> Form | None:
        """Some ``x`` in the complex with ``d x = target``, or ``None`` when ``target`` is not exact here."""
        k = target.degree
        if k > self.top:
            return Form.zero(self.model.dim, k - 1)
        t = self.coords(target)
        if not any(t):
            return Form.zero(self.model.dim, k - 1)
        ex = self._exactness[k]
        if ex is None:
            return None
        piv, coordz = ex
        try:
            c = coordz(t)
        except ContainmentError:
            return None
        x = [0] * self.dims[k - 1]
        for j, cj in zip(piv, c):
            x[j] = cj
        return self.form(k - 1, x)

    def __repr__(self):
        return f"CochainComplex({self.name or self.model.name}, dims={self.dims})"


def full_complex(model: LieAlgebra) -> CochainComplex:
    m = model.dim
    embs = [Matrix.identity(len(basis_masks(m, k))) for k in range(m + 1)]
    diffs = [model.d_matrix(k) for k in range(m)] + [_empty(0, 1)]
    return CochainComplex(model, embs, diffs, None, name=f"CE({model.name})")


def interior_matrix(dim: int, degree: int, v: Sequence) -> Matrix:
    """Matrix of ``i_v: Lambda^k -> Lambda^(k-1)`` in canonical bases."""
    src = basis_masks(dim, degree)
    tgt = mask_index(dim, degree - 1)
    n_tgt = len(basis_masks(dim, degree - 1))
    cols = []
    for msk in src:
        col = [0] * n_tgt
        for tm, c in Form(dim, degree, {msk: 1}).interior(v).items():
            col[tgt[tm]] = c
        cols.append(col)
    return Matrix.from_columns(cols, n_tgt) if cols else Matrix([()] * n_tgt, 0)


def basic_subcomplex(model: LieAlgebra, xi: Sequence) -> CochainComplex:
    """Forms with ``i_xi a = 0`` and ``i_xi d a = 0`` in every degree, with the restricted ``d``."""
    m = model.dim
    xi = tuple(xi)
    if len(xi) != m or not any(xi):
        raise InputError("xi must be a nonzero vector of model dimension")
    spaces = []
    for k in range(m + 1):
        n = len(basis_masks(m, k))
        if k == 0:
            spaces.append(Subspace.full(1))
            continue
        I_k = interior_matrix(m, k, xi)
        I_kp1 = interior_matrix(m, k + 1, xi) if k < m else Matrix.zeros(0, len(basis_masks(m, k + 1)))
        dk = model.d_matrix(k) if k < m else Matrix.zeros(0, n)
        conds = vstack(I_k, I_kp1 @ dk) if dk.nrows else I_k
        spaces.append(kernel_basis(conds))
    embs = [sp.matrix() if sp.dim else Matrix([()] * sp.ambient, 0) for sp in spaces]
    diffs = []
    for k in range(m + 1):
        if k == m:
            diffs.append(_empty(0, spaces[k].dim))
            continue
        dk = model.d_matrix(k)
        cols = []
        for b in spaces[k].basis:
            img = dk.apply(b)
            try:
                cols.append(spaces[k + 1].coordinates(img))
            except ContainmentError:
                raise InternalInconsistency(f"d does not preserve basic forms in degree {k}") from None
        n_tgt = spaces[k + 1].dim
        diffs.append(Matrix.from_columns(cols, n_tgt) if cols else Matrix([()] * n_tgt, 0))
    return CochainComplex(model, embs, diffs, xi, name=f"basic({model.name})")


# --- cohomology ----------------------------------------------------------------


class CohomologyGroup:
    """``H^k = ker d_k / im d_(k-1)`` in the intrinsic coordinates of the complex."""

    def __init__(self, complex_: CochainComplex, degree: int, quotient: QuotientSpace):
        self.complex = complex_
        self.degree = degree
        self.quotient = quotient

    @property
    def dim(self) -> int:
        return self.quotient.dim

    @property
    def representatives(self) -> list[Form]:
        return [self.complex.form(self.degree, r) for r in self.quotient.representatives]

    def class_of(self, a: Form) -> tuple:
        if a.degree != self.degree:
            raise ValueError("degree mismatch")
        return self.quotient.class_of(self.complex.coords(a))

    def is_zero_class(self, a: Form) -> bool:
        return not any(self.class_of(a))

    def __repr__(self):
        return f"H^{self.degree}(dim={self.dim})"


def cohomology(C: CochainComplex) -> list[CohomologyGroup]:
    groups = []
    for k in range(C.top + 1):
        Z = kernel_basis(C.d(k)) if C.dims[k] else Subspace.zero(0)
        dprev = C.d(k - 1)
        B = image_basis(dprev) if dprev.ncols else Subspace.zero(C.dims[k])
        groups.append(CohomologyGroup(C, k, QuotientSpace(Z, B)))
    return groups


def betti(C: CochainComplex, trim: bool = False) -> list[int]:
    """Dimensions of ``H^k``; with ``trim`` trailing degrees whose cochain space is zero are dropped."""
    b = [g.dim for g in C.cohomology]
    if trim:
        while len(b) > 1 and C.dims[len(b) - 1] == 0:
            b.pop()
    return b


@dataclass(frozen=True)
class InclusionDegree:
    degree: int
    matrix: Matrix
    kernel_dim: int
    injective: bool
    kernel: tuple


def inclusion_map(model: LieAlgebra, xi: Sequence) -> list[InclusionDegree]:
    """Maps ``H^k(basic) -> H^k(de Rham)`` induced by inclusion, with kernels."""
    B = basic_subcomplex(model, xi)
    Fc = full_complex(model)
    return _inclusion(B, Fc)


def _inclusion(B: CochainComplex, Fc: CochainComplex) -> list[InclusionDegree]:
    out = []
    for k in range(B.top + 1):
        hb, hf = B.cohomology[k], Fc.cohomology[k]
        M = induced_map(hb.quotient, hf.quotient, B.embeddings[k])
        ker = kernel_basis(M) if M.ncols else Subspace.zero(0)
        out.append(InclusionDegree(k, M, ker.dim, ker.dim == 0, ker.basis))
    return out


@dataclass(frozen=True)
class SymplecticVerdict:
    n: int
    deta_nonzero: bool
    deta_power_nonzero: bool
    deta_maps_to_zero: bool
    deta_power_maps_to_zero: bool
    top_kernel_dim: int

    @property
    def consistent(self) -> bool:
        return self.deta_nonzero and self.deta_power_nonzero and self.deta_maps_to_zero and self.deta_power_maps_to_zero

    def to_dict(self):
        return {
            "n": self.n,
            "deta_class_nonzero": self.deta_nonzero,
            "deta_power_class_nonzero": self.deta_power_nonzero,
            "deta_maps_to_zero": self.deta_maps_to_zero,
            "deta_power_maps_to_zero": self.deta_power_maps_to_zero,
            "degree_2n_inclusion_kernel_dim": self.top_kernel_dim,
            "degree_2n_inclusion_injective": self.top_kernel_dim == 0,
            "verdict": "obstruction-consistent" if self.consistent else "inconsistent",
        }


def symplectic_obstruction(model: LieAlgebra, eta: Form) -> SymplecticVerdict:
    """``[d eta]`` and ``[d eta]^n`` are nonzero basic classes that die in de Rham cohomology."""
    if not is_contact(model, eta):
        raise NotContactError("symplectic obstruction needs a contact form")
    xi = reeb_field(model, eta)
    n = (model.dim - 1) // 2
    B = basic_subcomplex(model, xi)
    Fc = full_complex(model)
    deta = ce_d(model, eta)
    power = deta.power(n)
    hb2, hb2n = B.cohomology[2], B.cohomology[2 * n]
    hf2, hf2n = Fc.cohomology[2], Fc.cohomology[2 * n]
    verdict = SymplecticVerdict(
        n=n,
        deta_nonzero=not hb2.is_zero_class(deta),
        deta_power_nonzero=not hb2n.is_zero_class(power),
        deta_maps_to_zero=hf2.is_zero_class(deta),
        deta_power_maps_to_zero=hf2n.is_zero_class(power),
        top_kernel_dim=_inclusion(B, Fc)[2 * n].kernel_dim,
    )
    if verdict.deta_power_nonzero and verdict.top_kernel_dim == 0:
        raise InternalInconsistency("[d eta]^n is a nonzero basic class but the degree-2n inclusion is injective")
    return verdict


@dataclass(frozen=True)
class OrientabilityVerdict:
    codimension: int
    top_dim: int

    @property
    def orientable(self) -> bool:
        return self.top_dim == 1

    def to_dict(self):
        return {"codimension": self.codimension, "top_basic_dim": self.top_dim, "orientable": self.orientable}


def homological_orientability(model: LieAlgebra, xi: Sequence | None) -> OrientabilityVerdict:
    """``dim H^cod(basic) == 1``; with ``xi = None`` the foliation is by points and ``cod = dim``."""
    C = full_complex(model) if xi is None else basic_subcomplex(model, xi)
    cod = model.dim - (0 if xi is None else 1)
    return OrientabilityVerdict(cod, C.cohomology[cod].dim)


# --- metrics, Laplacians, harmonic forms ------------------------------------------------


def form_grams(dim: int, metric: Gram | None = None) -> list[Gram]:
    """Grams on ``Lambda^k`` induced by a metric on vectors (covectors get the inverse matrix)."""
    if metric is None:
        return [Gram.identity(len(basis_masks(dim, k))) for k in range(dim + 1)]
    co = metric.inverse
    out = []
    for k in range(dim + 1):
        masks = basis_masks(dim, k)
        idx = [[i for i in range(dim) if (mk >> i) & 1] for mk in masks]
        rows = [[det(co.submatrix(I, J)) if k else 1 for J in idx] for I in idx]
        out.append(Gram(Matrix(rows, len(masks))))
    return out


def complex_grams(C: CochainComplex, ambient: Sequence[Gram] | None = None) -> list[Gram]:
    ambient = ambient or form_grams(C.model.dim)
    out = []
    for g, e in zip(ambient, C.embeddings):
        out.append(g.restrict(e) if e.ncols else Gram(Matrix([], 0)))
    return out


@dataclass(frozen=True)
class HarmonicSpace:
    degree: int
    basis: Subspace
    forms: tuple
    laplacian: Matrix
    decomposition: dict

    @property
    def dim(self):
        return self.basis.dim


def _orthogonal(G: Gram, U, V) -> bool:
    return all(not G.inner(u, v) for u in U for v in V)


def harmonic_space(C: CochainComplex, grams: Sequence[Gram] | None = None) -> list[HarmonicSpace]:
    """``ker(d delta + delta d)`` per degree, with the exact three-way Hodge decomposition verified."""
    grams = list(grams) if grams is not None else complex_grams(C)
    top = C.top
    adj = []  # adj[k]: adjoint of d_k, C^{k+1} -> C^k
    for k in range(top + 1):
        g_next = grams[k + 1] if k < top else Gram(Matrix([], 0))
        adj.append(gram_adjoint(C.d(k), grams[k], g_next))
    out = []
    for k in range(top + 1):
        n = C.dims[k]
        lap = Matrix.zeros(n, n)
        if k > 0:
            lap = lap + C.d(k - 1) @ adj[k - 1]
        if k < top:
            lap = lap + adj[k] @ C.d(k)
        ker = kernel_basis(lap) if n else Subspace.zero(0)
        im_d = image_basis(C.d(k - 1)) if k > 0 and C.d(k - 1).ncols else Subspace.zero(n)
        im_delta = image_basis(adj[k]) if k < top and adj[k].ncols else Subspace.zero(n)
        total = ker + im_d + im_delta
        decomposition = {
            "dims": [ker.dim, im_d.dim, im_delta.dim],
            "spans": total.dim == n,
            "direct": ker.dim + im_d.dim + im_delta.dim == n,
            "orthogonal": _orthogonal(grams[k], ker.basis, im_d.basis)
            and _orthogonal(grams[k], ker.basis, im_delta.basis)
            and _orthogonal(grams[k], im_d.basis, im_delta.basis),
        }
        if not all(decomposition[key] for key in ("spans", "direct", "orthogonal")):
            raise InternalInconsistency(f"Hodge decomposition fails in degree {k}: {decomposition}")
        if ker.dim != C.cohomology[k].dim:
            raise InternalInconsistency(f"dim ker Laplacian != dim H^{k}")
        forms = tuple(C.form(k, b) for b in ker.basis)
        out.append(HarmonicSpace(k, ker, forms, lap, decomposition))
    return out


# --- Hard Lefschetz ------------------------------------------------------------------


@dataclass(frozen=True)
class LefschetzVerdict:
    p: int
    source_degree: int
    target_degree: int
    status: str
    source_dim: int = 0
    target_dim: int = 0
    rank: int | None = None
    witness: object = None

    @property
    def isomorphism(self) -> bool:
        return self.status == "Isomorphism"

    def to_dict(self):
        out = {
            "p": self.p,
            "map": f"H^{self.source_degree} -> H^{self.target_degree}",
            "status": self.status,
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
        }
        if self.rank is not None:
            out["rank"] = self.rank
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out


def hard_lefschetz_check(model: LieAlgebra, eta: Form, metric: Gram | None = None) -> list[LefschetzVerdict]:
    """For ``p = 0..n``: wedge harmonic ``(n-p)``-forms with ``eta ^ (d eta)^p`` and test the induced map."""
    if not is_contact(model, eta):
        raise NotContactError("Hard Lefschetz check needs a contact form")
    n = (model.dim - 1) // 2
    Fc = full_complex(model)
    harm = harmonic_space(Fc, form_grams(model.dim, metric))
    deta = ce_d(model, eta)
    out = []
    for p in range(n + 1):
        src, tgt = n - p, n + p + 1
        mult = eta.wedge(deta.power(p))
        alphas = harm[src].forms
        h_tgt = Fc.cohomology[tgt]
        betas = [mult.wedge(a) for a in alphas]
        bad = next((i for i, b in enumerate(betas) if ce_d(model, b)), None)
        if bad is not None:
            out.append(LefschetzVerdict(p, src, tgt, "NotClosed", len(alphas), h_tgt.dim, None, alphas[bad]))
            continue
        cols = [h_tgt.class_of(b) for b in betas]
        M = Matrix.from_columns(cols, h_tgt.dim) if cols else Matrix([()] * h_tgt.dim, 0)
        r = rank(M) if M.ncols and M.nrows else 0
        if r < len(alphas):
            kv = kernel_basis(M).basis[0]
            witness = Form.zero(model.dim, src)
            for c, a in zip(kv, alphas):
                witness = witness + a * c
            out.append(LefschetzVerdict(p, src, tgt, "NotInjective", len(alphas), h_tgt.dim, r, witness))
        elif r < h_tgt.dim:
            out.append(LefschetzVerdict(p, src, tgt, "NotSurjective", len(alphas), h_tgt.dim, r))
        else:
            out.append(LefschetzVerdict(p, src, tgt, "Isomorphism", len(alphas), h_tgt.dim, r))
    return out


# --- Massey triple products ---------------------------------------------------------------


class MasseyUndefined(InputError):
    """The triple is not admissible: a pairwise product is not exact."""

    def __init__(self, message, product_class=None):
        super().__init__(message)
        self.product_class = product_class


@dataclass(frozen=True)
class MasseyResult:
    degrees: tuple
    value: Form
    value_class: tuple
    indeterminacy: Subspace
    x: Form
    y: Form

    @property
    def vanishes(self) -> bool:
        return self.indeterminacy.contains(self.value_class)


def massey_triple(C: CochainComplex, a: Form, b: Form, c: Form) -> MasseyResult:
    """``<a, b, c> = [x ^ c + (-1)^(|a|+1) a ^ y]`` with ``dx = a ^ b``, ``dy = b ^ c``, plus its indeterminacy."""
    model = C.model
    for f in (a, b, c):
        if ce_d(model, f):
            raise InputError(f"{f} is not closed")
        C.coords(f)
    p, q, r = a.degree, b.degree, c.degree
    H = C.cohomology
    ab, bc = a.wedge(b), b.wedge(c)
    x = C.primitive(ab)
    if x is None:
        raise MasseyUndefined("[a][b] != 0", H[p + q].class_of(ab) if p + q <= C.top else None)
    y = C.primitive(bc)
    if y is None:
        raise MasseyUndefined("[b][c] != 0", H[q + r].class_of(bc) if q + r <= C.top else None)
    N = p + q + r - 1
    sign = 1 if (p + 1) % 2 == 0 else -1
    value = x.wedge(c) + a.wedge(y) * sign
    if N > C.top:
        return MasseyResult((p, q, r), value, (), Subspace.zero(0), x, y)
    if ce_d(model, value):
        raise InternalInconsistency("Massey representative is not closed")
    hN = H[N]
    vclass = hN.class_of(value)
    gens = []
    if q + r - 1 <= C.top:
        gens += [hN.class_of(a.wedge(h)) for h in H[q + r - 1].representatives]
    if p + q - 1 <= C.top:
        gens += [hN.class_of(h.wedge(c)) for h in H[p + q - 1].representatives]
    return MasseyResult((p, q, r), value, vclass, Subspace(hN.dim, gens), x, y)


@dataclass(frozen=True)
class MasseyScan:
    triples: int
    admissible: int
    nonvanishing: list = field(default_factory=list)

    @property
    def all_vanish(self) -> bool:
        return not self.nonvanishing

    def to_dict(self):
        return {
            "triples_examined": self.triples,
            "admissible": self.admissible,
            "nonvanishing": len(self.nonvanishing),
            "all_vanish": self.all_vanish,
            "examples": [
                {"classes": list(t), "value": str(res.value), "value_class": [str(v) for v in res.value_class]}
                for t, res in self.nonvanishing[:3]
            ],
        }


def massey_scan(C: CochainComplex, degrees: Sequence[int] | None = None) -> MasseyScan:
    """Every triple of basis classes (from the given degrees, default all positive ones)."""
    degrees = list(degrees) if degrees is not None else list(range(1, C.top + 1))
    classes = [(k, i, rep) for k in degrees for i, rep in enumerate(C.cohomology[k].representatives)]
    count = admissible = 0
    bad = []
    for (ka, ia, a), (kb, ib, b), (kc, ic, c) in product(classes, repeat=3):
        count += 1
        if ka + kb + kc - 1 > C.top:
            continue
        try:
            res = massey_triple(C, a, b, c)
        except MasseyUndefined:
            continue
        admissible += 1
        if not res.vanishes:
            bad.append(((f"{ka}:{ia}", f"{kb}:{ib}", f"{kc}:{ic}"), res))
    return MasseyScan(count, admissible, bad)
