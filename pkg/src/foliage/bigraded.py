"""The (r, s)-bigraded basic complex of a transversely holomorphic foliation.

Operators between the bigraded pieces are stored blockwise: a block keyed by
``(source, target)`` bidegrees maps coordinates of ``A^source`` to coordinates
of ``A^target``. Coordinates always refer to the reduced-echelon basis of each
``A^{r,s}`` inside the complexified ambient ``Lambda^k``.

Conventions: ``(1,0)``-forms satisfy ``a(JX) = i a(X)``; the Kähler form is
``w(X, Y) = g(JX, Y)``; the conjugate-linear star is fixed by
``a ^ *b = h(a, b) vol`` with ``h(a, b) = a^T G conj(b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb, isqrt

from .basic import CochainComplex, form_grams
from .errors import InputError, InternalInconsistency
from .exterior import Form, ce_d
from .linalg import (
    ContainmentError,
    Gram,
    LinalgError,
    Matrix,
    QuotientSpace,
    Subspace,
    _Coordinatizer,
    is_positive_definite,
    kernel_basis,
    vstack,
)
from .scalars import I, format_scalar

__all__ = [
    "BlockOp",
    "BigradedComplex",
    "HodgeDiamond",
    "build_bigraded",
    "dolbeault",
    "bott_chern",
    "aeppli",
    "laplacians",
    "transverse_star",
    "duality_check",
    "kahler_form_from_metric",
    "kahler_audit",
    "lefschetz_ops",
    "kahler_hodge_checks",
    "frolicher_E1_collapse",
    "ddbar_lemma_check",
    "frolicher_inequality",
]


def _empty(nrows, ncols):
    return Matrix.zeros(nrows, ncols) if nrows else Matrix([], ncols)


# --- block operators -------------------------------------------------------------


class BlockOp:
    """A linear (or conjugate-linear) map on ``V = sum A^{r,s}`` stored by bidegree blocks."""

    def __init__(self, dims: dict, blocks: dict | None = None, antilinear: bool = False):
        self.dims = dims
        self.antilinear = antilinear
        self.blocks = {}
        for (src, tgt), M in (blocks or {}).items():
            if M.shape != (dims[tgt], dims[src]):
                raise LinalgError(f"block {src}->{tgt} has shape {M.shape}")
            if not M.is_zero():
                self.blocks[(src, tgt)] = M

    @classmethod
    def identity(cls, dims):
        return cls(dims, {(b, b): Matrix.identity(n) for b, n in dims.items() if n})

    def block(self, src, tgt) -> Matrix:
        return self.blocks.get((src, tgt)) or Matrix.zeros(self.dims[tgt], self.dims[src])

    def from_(self, src):
        return {t: M for (s, t), M in self.blocks.items() if s == src}

    def into(self, tgt):
        return {s: M for (s, t), M in self.blocks.items() if t == tgt}

    def _combine(self, other, sign):
        if self.antilinear != other.antilinear:
            raise LinalgError("cannot add linear and conjugate-linear maps")
        out = dict(self.blocks)
        for key, M in other.blocks.items():
            M = M if sign > 0 else -M
            out[key] = out[key] + M if key in out else M
        return BlockOp(self.dims, out, self.antilinear)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return BlockOp(self.dims, {k: -M for k, M in self.blocks.items()}, self.antilinear)

    def scale(self, c):
        """``c * self`` (the scalar multiplies on the left)."""
        return BlockOp(self.dims, {k: M.scale(c) for k, M in self.blocks.items()}, self.antilinear)

    def __matmul__(self, other: "BlockOp") -> "BlockOp":
        out = {}
        by_src = {}
        for (s, t), M in self.blocks.items():
            by_src.setdefault(s, []).append((t, M))
        for (a, b), N in other.blocks.items():
            if self.antilinear:
                N = N.conj()
            for c, M in by_src.get(b, ()):
                P = M @ N
                out[(a, c)] = out[(a, c)] + P if (a, c) in out else P
        return BlockOp(self.dims, out, self.antilinear != other.antilinear)

    def adjoint(self, grams: dict) -> "BlockOp":
        if self.antilinear:
            raise LinalgError("adjoint of a conjugate-linear map is not provided")
        out = {}
        for (s, t), M in self.blocks.items():
            out[(t, s)] = grams[s].inverse @ M.H @ grams[t].matrix
        return BlockOp(self.dims, out)

    def is_zero(self) -> bool:
        return not self.blocks

    def nonzero_count(self) -> int:
        return sum(len(M.nonzero_entries()) for M in self.blocks.values())

    def __eq__(self, other):
        if not isinstance(other, BlockOp):
            return NotImplemented
        return self.antilinear == other.antilinear and self.blocks == other.blocks

    def kernel_at(self, src) -> Subspace:
        n = self.dims[src]
        blocks = list(self.from_(src).values())
        if not blocks or not n:
            return Subspace.full(n)
        return kernel_basis(vstack(*blocks))

    def image_in(self, tgt) -> Subspace:
        n = self.dims[tgt]
        cols = [c for M in self.into(tgt).values() for c in M.columns()]
        return Subspace(n, cols)

    def apply(self, src, x) -> dict:
        x = tuple(xi.conjugate() for xi in x) if self.antilinear else tuple(x)
        return {t: M.apply(x) for t, M in self.from_(src).items()}


def _fmt(M: Matrix):
    return "[" + "; ".join(" ".join(format_scalar(x) for x in row) for row in M.rows) + "]"


def _bidegrees(q):
    return sorted(((r, s) for r in range(q + 1) for s in range(q + 1)), key=lambda b: (b[0] + b[1], b[0]))


def _normalize(v):
    lead = next(x for x in v if x)
    return tuple(x / lead if x else 0 for x in v)


def _vec_wedge(dim, ka, a, kb, b):
    return Form.from_vector(dim, ka, a).wedge(Form.from_vector(dim, kb, b)).to_vector()


# --- the bigraded complex ---------------------------------------------------------------


class BigradedComplex:
    """Spaces ``A^{r,s}``, the operators ``del`` and ``delbar``, and conjugation, built from a basic complex and ``J``."""

    def __init__(self, basic: CochainComplex, J: Matrix, metric: Gram | None = None):
        model = basic.model
        m = model.dim
        xi = basic.xi
        J = J if isinstance(J, Matrix) else Matrix(J)
        if J.shape != (m, m):
            raise InputError(f"J must be a {m}x{m} matrix")
        fdim = 0 if xi is None else 1
        if (m - fdim) % 2:
            raise InputError("odd transverse dimension admits no complex structure")
        q = (m - fdim) // 2
        # (1,0)-covectors: J^T a = i a, and a(xi) = 0
        rows = [tuple(J.rows[j][i] - (I if i == j else 0) for j in range(m)) for i in range(m)]
        if xi is not None:
            if any(J.apply(xi)):
                raise InputError("J must annihilate the leaf direction xi")
            rows.append(tuple(xi))
        J2 = J @ J
        for j in range(m):
            e = [0] * m
            e[j] = 1
            resid = [a + b for a, b in zip(J2.column(j), e)]
            if xi is None and any(resid) or xi is not None and not Subspace(m, [xi]).contains(resid):
                raise InputError("J is not a complex structure transverse to the foliation")
        hol = [_normalize(v) for v in kernel_basis(Matrix(rows, m)).basis]
        if len(hol) != q:
            raise InputError("J does not split the transverse covectors into two halves")
        antihol = [tuple(x.conjugate() if x else 0 for x in v) for v in hol]

        self.basic = basic
        self.model = model
        self.J = J
        self.q = q
        self.metric = metric
        self.bidegrees = _bidegrees(q)
        self.hol = hol

        bases = {}
        for r, s in self.bidegrees:
            k = r + s
            n = comb(m, k)
            pure = []
            for R in combinations(hol, r):
                for S in combinations(antihol, s):
                    f = Form.constant(m)
                    for v in R + S:
                        f = f.wedge(Form.from_vector(m, 1, v))
                    pure.append(f.to_vector())
            B_k = Subspace(n, basic.embeddings[k].columns()) if basic.dims[k] else Subspace.zero(n)
            bases[(r, s)] = (Subspace(n, pure) & B_k).basis
        self.bases = bases
        self.dims = {b: len(v) for b, v in bases.items()}
        for k in range(2 * q + 1):
            got = sum(n for (r, s), n in self.dims.items() if r + s == k)
            if got != basic.dims[k]:
                raise InputError(f"J does not preserve basic {k}-forms ({got} != {basic.dims[k]})")
        for k in range(2 * q + 1, m + 1):
            if basic.dims[k]:
                raise InternalInconsistency(f"basic forms above transverse dimension in degree {k}")
        self._split_d()
        self._check_structure()

    def degree(self, k):
        return [b for b in self.bidegrees if sum(b) == k]

    @cached_property
    def _coordinatizers(self):
        out = {}
        m = self.model.dim
        for k in range(2 * self.q + 1):
            vecs = [v for b in self.degree(k) for v in self.bases[b]]
            out[k] = _Coordinatizer(comb(m, k), vecs) if vecs else None
        return out

    def split(self, k, vec) -> dict:
        """Components of an ambient complex ``k``-form in each ``A^{r,s}``; raises if not basic."""
        coordz = self._coordinatizers.get(k)
        if coordz is None:
            if any(vec):
                raise ContainmentError(f"no basic {k}-forms", witness=vec)
            return {}
        c = coordz(vec)
        out, pos = {}, 0
        for b in self.degree(k):
            out[b] = c[pos:pos + self.dims[b]]
            pos += self.dims[b]
        return out

    def ambient(self, bideg, coords) -> tuple:
        k = sum(bideg)
        out = [0] * comb(self.model.dim, k)
        for c, v in zip(coords, self.bases[bideg]):
            if c:
                for i, x in enumerate(v):
                    if x:
                        out[i] += c * x
        return tuple(out)

    def form(self, bideg, coords) -> Form:
        return Form.from_vector(self.model.dim, sum(bideg), self.ambient(bideg, coords))

    def _split_d(self):
        del_b, delbar_b = {}, {}
        for b in self.bidegrees:
            r, s = b
            k = r + s
            if not self.dims[b] or k >= 2 * self.q:
                continue
            dk = self.model.d_matrix(k)
            cols = {t: [] for t in self.degree(k + 1)}
            for v in self.bases[b]:
                parts = self.split(k + 1, dk.apply(v))
                for t in cols:
                    cols[t].append(parts.get(t, ()))
            for t, cs in cols.items():
                M = Matrix.from_columns(cs, self.dims[t]) if self.dims[t] else _empty(0, len(cs))
                if t == (r + 1, s):
                    del_b[(b, t)] = M
                elif t == (r, s + 1):
                    delbar_b[(b, t)] = M
                elif not M.is_zero():
                    raise InputError(
                        f"d has a component of bidegree {t[0] - r, t[1] - s} from A^{b}; "
                        f"the foliation is not transversely holomorphic for this J (block {_fmt(M)})"
                    )
        self.del_ = BlockOp(self.dims, del_b)
        self.delbar = BlockOp(self.dims, delbar_b)

    def _check_structure(self):
        if not (self.del_ @ self.del_).is_zero():
            raise InternalInconsistency("del o del != 0")
        if not (self.delbar @ self.delbar).is_zero():
            raise InternalInconsistency("delbar o delbar != 0")
        if not (self.del_ @ self.delbar + self.delbar @ self.del_).is_zero():
            raise InternalInconsistency("del delbar + delbar del != 0")
        if not (self.conjugation @ self.del_ @ self.conjugation == self.delbar):
            raise InternalInconsistency("conjugation does not exchange del and delbar")

    @cached_property
    def conjugation(self) -> BlockOp:
        """The conjugate-linear map ``A^{r,s} -> A^{s,r}``."""
        blocks = {}
        for b in self.bidegrees:
            t = (b[1], b[0])
            cols = []
            for v in self.bases[b]:
                w = tuple(x.conjugate() if x else 0 for x in v)
                cols.append(self.split(sum(b), w)[t])
            if cols:
                blocks[(b, t)] = Matrix.from_columns(cols, self.dims[t])
        return BlockOp(self.dims, blocks, antilinear=True)

    @cached_property
    def d(self) -> BlockOp:
        return self.del_ + self.delbar

    @cached_property
    def identity(self) -> BlockOp:
        return BlockOp.identity(self.dims)

    @cached_property
    def grams(self) -> dict:
        """Hermitian Grams per bidegree, induced by the metric (identity on coordinates when absent)."""
        m = self.model.dim
        amb = form_grams(m, self.metric)
        out = {}
        for k in range(2 * self.q + 1):
            degs = self.degree(k)
            for i, a in enumerate(degs):
                Ba = Matrix.from_columns(self.bases[a], comb(m, k))
                for b in degs[i + 1:]:
                    Bb = Matrix.from_columns(self.bases[b], comb(m, k))
                    if self.dims[a] and self.dims[b] and not (Ba.H @ amb[k].matrix @ Bb).is_zero():
                        raise InputError(f"metric does not make A^{a} and A^{b} orthogonal (not J-invariant)")
                out[a] = amb[k].restrict(Ba) if self.dims[a] else Gram(Matrix([], 0))
        return out

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def assemble(self, op: BlockOp, k_src: int, k_tgt: int) -> Matrix:
        """The matrix of ``op`` from ``V_k_src`` to ``V_k_tgt`` (sums of bidegree pieces, ordered by ``r``)."""
        srcs, tgts = self.degree(k_src), self.degree(k_tgt)
        nrows = sum(self.dims[t] for t in tgts)
        rows = []
        for t in tgts:
            blocks = [op.block(s, t) for s in srcs]
            for i in range(self.dims[t]):
                rows.append(tuple(x for M in blocks for x in M.rows[i]))
        ncols = sum(self.dims[s] for s in srcs)
        return Matrix(rows, ncols) if nrows else _empty(0, ncols)

    def __repr__(self):
        return f"BigradedComplex(q={self.q}, dims={self.dims})"


def build_bigraded(basic: CochainComplex, J: Matrix, metric: Gram | None = None) -> BigradedComplex:
    return BigradedComplex(basic, J, metric)


# --- cohomologies ---------------------------------------------------------------------


@dataclass(frozen=True)
class HodgeDiamond:
    theory: str
    q: int
    table: dict
    representatives: dict = field(default_factory=dict, compare=False, repr=False)

    def __getitem__(self, bideg):
        return self.table[bideg]

    def rows(self) -> list[list[int]]:
        return [[self.table[(r, s)] for s in range(self.q + 1)] for r in range(self.q + 1)]

    @property
    def total(self) -> int:
        return sum(self.table.values())

    def degree_sum(self, k) -> int:
        return sum(n for (r, s), n in self.table.items() if r + s == k)

    @property
    def conjugation_symmetric(self) -> bool:
        return all(self.table[(r, s)] == self.table[(s, r)] for r, s in self.table)

    def to_dict(self):
        return {"theory": self.theory, "q": self.q, "h": self.rows()}


def _diamond(BC: BigradedComplex, theory, num, den) -> HodgeDiamond:
    table, reps = {}, {}
    for b in BC.bidegrees:
        Q = QuotientSpace(num(b), den(b))
        table[b] = Q.dim
        reps[b] = [BC.ambient(b, r) for r in Q.representatives]
    return HodgeDiamond(theory, BC.q, table, reps)


def dolbeault(BC: BigradedComplex) -> HodgeDiamond:
    return _diamond(BC, "dolbeault", BC.delbar.kernel_at, BC.delbar.image_in)


def bott_chern(BC: BigradedComplex) -> HodgeDiamond:
    dd = BC.del_ @ BC.delbar
    h = _diamond(BC, "bott-chern", lambda b: BC.del_.kernel_at(b) & BC.delbar.kernel_at(b), dd.image_in)
    if not h.conjugation_symmetric:
        raise InternalInconsistency("Bott-Chern numbers are not conjugation symmetric")
    return h


def aeppli(BC: BigradedComplex) -> HodgeDiamond:
    dd = BC.del_ @ BC.delbar
    h = _diamond(BC, "aeppli", dd.kernel_at, lambda b: BC.del_.image_in(b) + BC.delbar.image_in(b))
    if not h.conjugation_symmetric:
        raise InternalInconsistency("Aeppli numbers are not conjugation symmetric")
    return h


# --- Laplacians ------------------------------------------------------------------------


@dataclass
class Laplacians:
    ops: dict
    kernel_dims: dict
    decompositions: dict

    def to_dict(self):
        return {
            "kernel_dims": {name: _table(t) for name, t in self.kernel_dims.items()},
            "decompositions": {
                name: {f"{b[0]},{b[1]}": v for b, v in sorted(d.items())} for name, d in self.decompositions.items()
            },
        }


def _table(t):
    return {f"{b[0]},{b[1]}": n for b, n in sorted(t.items())}


def _orth(G: Gram, U: Subspace, V: Subspace):
    return all(not G.inner(u, v) for u in U.basis for v in V.basis)


def _three_way(G: Gram, n, parts):
    a, b, c = parts
    return {
        "dims": [a.dim, b.dim, c.dim],
        "spans": (a + b + c).dim == n,
        "direct": a.dim + b.dim + c.dim == n,
        "orthogonal": _orth(G, a, b) and _orth(G, a, c) and _orth(G, b, c),
    }


def laplacians(BC: BigradedComplex) -> Laplacians:
    """``Delta``, ``Delta'``, ``Delta''``, ``Delta_BC``, ``Delta_A`` with kernels checked against the cohomologies."""
    G = BC.grams
    D, Db = BC.del_, BC.delbar
    Ds, Dbs = D.adjoint(G), Db.adjoint(G)
    dd = D @ Db
    dds = dd.adjoint(G)
    t1 = Dbs @ D
    t2 = Db @ Ds
    ops = {
        "delta": BC.d @ BC.d.adjoint(G) + BC.d.adjoint(G) @ BC.d,
        "delta_del": D @ Ds + Ds @ D,
        "delta_delbar": Db @ Dbs + Dbs @ Db,
        "delta_bc": dd @ dds + dds @ dd + t1 @ t1.adjoint(G) + t1.adjoint(G) @ t1 + Dbs @ Db + Ds @ D,
        "delta_a": D @ Ds + Db @ Dbs + dds @ dd + dd @ dds + t2.adjoint(G) @ t2 + t2 @ t2.adjoint(G),
    }
    for name in ("delta_del", "delta_delbar", "delta_bc", "delta_a"):
        if any(s != t for s, t in ops[name].blocks):
            raise InternalInconsistency(f"{name} does not preserve bidegree")
    kernels = {name: {b: ops[name].kernel_at(b) for b in BC.bidegrees} for name in ops if name != "delta"}
    kernel_dims = {name: {b: K.dim for b, K in ks.items()} for name, ks in kernels.items()}
    dol, bc, ae = dolbeault(BC), bott_chern(BC), aeppli(BC)
    for name, h in (("delta_delbar", dol), ("delta_bc", bc), ("delta_a", ae)):
        if kernel_dims[name] != h.table:
            raise InternalInconsistency(f"kernel of {name} does not match {h.theory} cohomology")
    decomp = {"bott-chern": {}, "aeppli": {}}
    for b in BC.bidegrees:
        n = BC.dims[b]
        decomp["bott-chern"][b] = _three_way(
            G[b], n, (kernels["delta_bc"][b], dd.image_in(b), Ds.image_in(b) + Dbs.image_in(b))
        )
        decomp["aeppli"][b] = _three_way(
            G[b], n, (kernels["delta_a"][b], D.image_in(b) + Db.image_in(b), dds.image_in(b))
        )
        for name in decomp:
            v = decomp[name][b]
            if not (v["spans"] and v["direct"] and v["orthogonal"]):
                raise InternalInconsistency(f"{name} decomposition fails at {b}: {v}")
    return Laplacians(ops, kernel_dims, decomp)


# --- star and duality -----------------------------------------------------------------


def _rational_sqrt(x: Fraction):
    x = Fraction(x)
    if x <= 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


@dataclass
class StarData:
    star: BlockOp
    volume: Form
    involution: bool
    adjoint_del: bool
    adjoint_delbar: bool
    adjoint_del_signed: bool
    adjoint_delbar_signed: bool

    def to_dict(self):
        return {
            "volume": str(self.volume),
            "star_star_is_sign": self.involution,
            "del_adjoint_identity": self.adjoint_del,
            "delbar_adjoint_identity": self.adjoint_delbar,
            "del_adjoint_identity_with_(-1)^r": self.adjoint_del_signed,
            "delbar_adjoint_identity_with_(-1)^r": self.adjoint_delbar_signed,
        }


def transverse_star(BC: BigradedComplex) -> StarData:
    """The conjugate-linear star ``A^{r,s} -> A^{q-r,q-s}`` with ``a ^ *b = h(a, b) vol``."""
    q, m = BC.q, BC.model.dim
    top = 2 * q
    basic = BC.basic
    if basic.dims[top] != 1 or basic.cohomology[top].dim != 1:
        raise InputError("transverse star needs a homologically orientable foliation (top basic class)")
    v = basic.embeddings[top].column(0)
    amb = form_grams(m, BC.metric)[top]
    scale = _rational_sqrt(amb.inner(v, v))
    if scale is None:
        raise InputError("transverse volume has irrational length for this metric")
    vol = tuple(x / scale if x else 0 for x in v)
    lead = next(i for i, x in enumerate(vol) if x)

    G = BC.grams
    blocks = {}
    for b in BC.bidegrees:
        t = (q - b[0], q - b[1])
        n = BC.dims[b]
        if not n:
            continue
        if BC.dims[t] != n:
            raise InternalInconsistency(f"dim A^{b} != dim A^{t}")
        W = []
        for a in BC.bases[b]:
            row = []
            for g in BC.bases[t]:
                w = _vec_wedge(m, sum(b), a, sum(t), g)
                c = w[lead] / vol[lead]
                if any(x != c * y for x, y in zip(w, vol)):
                    raise InternalInconsistency("top-degree wedge is not a multiple of the volume")
                row.append(c)
            W.append(row)
        blocks[(b, t)] = Matrix(W, n).inverse() @ G[b].matrix.T
    star = BlockOp(BC.dims, blocks, antilinear=True)

    sign = BlockOp(BC.dims, {(b, b): Matrix.identity(n).scale(-1 if sum(b) % 2 else 1)
                             for b, n in BC.dims.items() if n})
    involution = star @ star == sign
    Ds, Dbs = BC.del_.adjoint(G), BC.delbar.adjoint(G)
    adj_del = Ds == -(star @ BC.del_ @ star)
    adj_delbar = Dbs == -(star @ BC.delbar @ star)
    r_sign = BlockOp(BC.dims, {(b, b): Matrix.identity(n).scale(-1 if b[0] % 2 else 1)
                               for b, n in BC.dims.items() if n})
    adj_del_r = Ds == r_sign @ star @ BC.del_ @ star
    adj_delbar_r = Dbs == r_sign @ star @ BC.delbar @ star
    if not involution:
        raise InternalInconsistency("star o star is not (-1)^k")
    if not (adj_del and adj_delbar):
        raise InternalInconsistency("adjoints are not -star d star")
    return StarData(star, Form.from_vector(m, top, vol), involution, adj_del, adj_delbar, adj_del_r, adj_delbar_r)


def duality_check(BC: BigradedComplex, star: StarData | None = None, laps: Laplacians | None = None) -> dict:
    """``dim H_BC^{p,s} = dim H_A^{q-p,q-s}`` and the star carries ``ker Delta_BC`` into ``ker Delta_A``."""
    star = star or transverse_star(BC)
    laps = laps or laplacians(BC)
    q = BC.q
    bc, ae = laps.kernel_dims["delta_bc"], laps.kernel_dims["delta_a"]
    dims_ok = all(bc[(p, s)] == ae[(q - p, q - s)] for p, s in BC.bidegrees)
    maps_ok = True
    for b in BC.bidegrees:
        t = (q - b[0], q - b[1])
        K = laps.ops["delta_bc"].kernel_at(b) if BC.dims[b] else Subspace.zero(0)
        KA = laps.ops["delta_a"].kernel_at(t) if BC.dims[t] else Subspace.zero(0)
        for x in K.basis:
            y = star.star.apply(b, x).get(t, (0,) * BC.dims[t])
            if not KA.contains(y):
                maps_ok = False
    if not maps_ok:
        raise InternalInconsistency("star does not map Bott-Chern harmonics to Aeppli harmonics")
    return {"dimensions_match": dims_ok, "star_maps_harmonics": maps_ok, "n_read_as": "q"}


# --- Kähler structure --------------------------------------------------------------------


def kahler_form_from_metric(model_dim: int, J: Matrix, metric: Gram | None) -> Form:
    """``w(X, Y) = g(JX, Y)``."""
    G = metric.matrix if metric is not None else Matrix.identity(model_dim)
    W = J.T @ G
    if W.T != -W:
        raise InputError("g(J., .) is not antisymmetric: metric is not J-invariant")
    return Form(model_dim, 2, {(1 << i) | (1 << j): W[i, j] for i in range(model_dim)
                               for j in range(i + 1, model_dim) if W[i, j]})


def _transverse_complement(m, xi, metric: Gram | None):
    if xi is None:
        return [tuple(1 if i == j else 0 for j in range(m)) for i in range(m)]
    G = metric.matrix if metric is not None else Matrix.identity(m)
    return list(kernel_basis(Matrix([G.apply(xi)], m)).basis)


def kahler_audit(BC: BigradedComplex, omega: Form) -> dict:
    """Real, closed, basic, of type (1,1), positive and compatible with ``g`` and ``J``."""
    m = BC.model.dim
    out = {}
    out["real"] = omega == omega.conjugate()
    out["closed"] = not ce_d(BC.model, omega)
    try:
        parts = BC.split(2, omega.to_vector())
        out["basic"] = True
        out["type_11"] = all(not any(c) for b, c in parts.items() if b != (1, 1))
    except ContainmentError:
        out["basic"] = out["type_11"] = False
    comp = _transverse_complement(m, BC.basic.xi, BC.metric)
    P = Matrix.from_columns(comp, m)
    J = BC.J
    Q = Matrix([[omega.evaluate(x, J.apply(y)) for y in comp] for x in comp], len(comp))
    Q = (Q + Q.T).scale(Fraction(1, 2))
    out["positive"] = Q.nrows == 0 or is_positive_definite(Q)
    G = BC.metric.matrix if BC.metric is not None else Matrix.identity(m)
    JP = J @ P
    out["metric_compatible"] = all(
        omega.evaluate(x, y) == Matrix([JP.column(i)], m).apply(G.apply(y))[0]
        for i, x in enumerate(comp) for y in comp
    )
    out["passed"] = all(out.values())
    return out


@dataclass
class LefschetzOps:
    L: BlockOp
    Lambda: BlockOp
    residuals: dict
    info: dict

    @property
    def all_zero(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())

    def to_dict(self):
        return {
            "residuals": {k: {"zero": r.is_zero(), "nonzero_entries": r.nonzero_count()}
                          for k, r in self.residuals.items()},
            "all_zero": self.all_zero,
            "info": self.info,
        }


def lefschetz_ops(BC: BigradedComplex, omega: Form) -> LefschetzOps:
    """``L = . ^ w``, its adjoint ``Lambda`` and the residuals of the Kähler identities."""
    audit = kahler_audit(BC, omega)
    if not audit["passed"]:
        failed = [k for k, v in audit.items() if not v and k != "passed"]
        raise InputError(f"Kähler audit failed: {', '.join(failed)}")
    m, q = BC.model.dim, BC.q
    wv = omega.to_vector()
    blocks = {}
    for b in BC.bidegrees:
        t = (b[0] + 1, b[1] + 1)
        if t not in BC.dims or not BC.dims[b] or not BC.dims[t]:
            continue
        cols = [BC.split(sum(t), _vec_wedge(m, sum(b), v, 2, wv))[t] for v in BC.bases[b]]
        blocks[(b, t)] = Matrix.from_columns(cols, BC.dims[t])
    G = BC.grams
    L = BlockOp(BC.dims, blocks)
    Lam = L.adjoint(G)
    D, Db = BC.del_, BC.delbar
    Ds, Dbs = D.adjoint(G), Db.adjoint(G)
    lap = BC.d @ BC.d.adjoint(G) + BC.d.adjoint(G) @ BC.d
    lap_del = D @ Ds + Ds @ D
    lap_delbar = Db @ Dbs + Dbs @ Db
    weight = BlockOp(BC.dims, {(b, b): Matrix.identity(n).scale(sum(b) - q) for b, n in BC.dims.items() if n})
    residuals = {
        "lambda_del": Lam @ D - D @ Lam - Dbs.scale(I),
        "lambda_delbar": Lam @ Db - Db @ Lam + Ds.scale(I),
        "delta_minus_2_delta_delbar": lap - lap_delbar.scale(2),
        "delta_del_minus_delta_delbar": lap_del - lap_delbar,
        "delta_L": lap @ L - L @ lap,
        "delta_Lambda": lap @ Lam - Lam @ lap,
        "L_Lambda_commutator": L @ Lam - Lam @ L - weight,
    }
    info = {
        "kahler_audit": audit,
        "lambda_del_literal_sign_holds": (Lam @ D - D @ Lam + Dbs.scale(I)).is_zero(),
        "lambda_delbar_literal_sign_holds": (Lam @ Db - Db @ Lam + Ds.scale(I)).is_zero(),
    }
    try:
        star = transverse_star(BC).star
        parity = BlockOp(BC.dims, {(b, b): Matrix.identity(n).scale(-1 if sum(b) % 2 else 1)
                                   for b, n in BC.dims.items() if n})
        info["lambda_equals_minus_star_L_star"] = Lam == -(star @ L @ star)
        info["lambda_equals_star_inverse_L_star"] = Lam == parity @ star @ L @ star
    except InputError:
        info["lambda_equals_minus_star_L_star"] = None
        info["lambda_equals_star_inverse_L_star"] = None
    return LefschetzOps(L, Lam, residuals, info)


# --- consequences of the transverse Kähler structure -----------------------------------------


def kahler_hodge_checks(BC: BigradedComplex, omega: Form) -> dict:
    """Harmonic splitting by bidegree, conjugation symmetry, and ``[w^r] != 0`` for ``r <= q``."""
    laps = laplacians(BC)
    lap, lap_delbar = laps.ops["delta"], laps.ops["delta_delbar"]
    splitting = {}
    for k in range(2 * BC.q + 1):
        M = BC.assemble(lap, k, k)
        K = kernel_basis(M) if M.ncols else Subspace.zero(0)
        pieces = []
        offset = 0
        for b in BC.degree(k):
            for x in lap_delbar.kernel_at(b).basis:
                v = [0] * M.ncols
                v[offset:offset + len(x)] = x
                pieces.append(tuple(v))
            offset += BC.dims[b]
        contained = all(K.contains(v) for v in pieces)
        splitting[k] = {"dim": K.dim, "sum_of_bidegree_dims": len(pieces), "ok": contained and K.dim == len(pieces)}
    dol = dolbeault(BC)
    powers = {}
    basic_h = BC.basic.cohomology
    for r in range(BC.q + 1):
        w = omega.power(r)
        parts = BC.split(2 * r, w.to_vector())
        x = parts[(r, r)]
        harmonic = not any(lap_delbar.apply((r, r), x).get((r, r), ()))
        harmonic = harmonic and not any(c for blk in lap.apply((r, r), x).values() for c in blk)
        Q = QuotientSpace(BC.delbar.kernel_at((r, r)), BC.delbar.image_in((r, r)))
        nonzero = not Q.is_zero_class(x)
        basic_nonzero = not basic_h[2 * r].is_zero_class(w)
        powers[r] = {"harmonic": harmonic, "dolbeault_nonzero": nonzero, "basic_nonzero": basic_nonzero}
    out = {
        "harmonic_splitting": splitting,
        "conjugation_symmetric": dol.conjugation_symmetric,
        "omega_powers": powers,
    }
    out["passed"] = (
        all(v["ok"] for v in splitting.values())
        and out["conjugation_symmetric"]
        and all(all(v.values()) for v in powers.values())
    )
    return out


def frolicher_E1_collapse(BC: BigradedComplex) -> dict:
    dol = dolbeault(BC)
    betti = [g.dim for g in BC.basic.cohomology[: 2 * BC.q + 1]]
    return {"E1_total": dol.total, "betti_total": sum(betti), "collapses": dol.total == sum(betti)}


def ddbar_lemma_check(BC: BigradedComplex) -> dict:
    """Per bidegree: ``ker del ^ ker delbar ^ im d == im del delbar``."""
    dd = BC.del_ @ BC.delbar
    per = {}
    for k in range(2 * BC.q + 1):
        degs = BC.degree(k)
        n_k = sum(BC.dims[b] for b in degs)
        if k:
            M = BC.assemble(BC.d, k - 1, k)
            im_d = Subspace(n_k, M.columns()) if M.ncols else Subspace.zero(n_k)
        else:
            im_d = Subspace.zero(n_k)
        offset = 0
        for b in degs:
            n = BC.dims[b]
            unit = [tuple(1 if j == offset + i else 0 for j in range(n_k)) for i in range(n)]
            pure = im_d & Subspace(n_k, unit)
            exact = Subspace(n, [v[offset:offset + n] for v in pure.basis])
            lhs = exact & BC.del_.kernel_at(b) & BC.delbar.kernel_at(b)
            rhs = dd.image_in(b)
            if not rhs.is_subspace_of(lhs):
                raise InternalInconsistency(f"im del delbar not inside d-exact closed forms at {b}")
            per[b] = {"lhs_dim": lhs.dim, "rhs_dim": rhs.dim, "holds": lhs == rhs}
            offset += n
    return {"per_bidegree": per, "holds": all(v["holds"] for v in per.values())}


def frolicher_inequality(BC: BigradedComplex, bc: HodgeDiamond | None = None, ae: HodgeDiamond | None = None,
                         ddbar: dict | None = None) -> dict:
    """Per ``k``: ``sum (h_BC + h_A) >= 2 b_k``; equality for all ``k`` must match the ddbar-lemma verdict."""
    bc = bc or bott_chern(BC)
    ae = ae or aeppli(BC)
    ddbar = ddbar or ddbar_lemma_check(BC)
    rows = []
    for k in range(2 * BC.q + 1):
        lhs = bc.degree_sum(k) + ae.degree_sum(k)
        rhs = 2 * BC.basic.cohomology[k].dim
        if lhs < rhs:
            raise InternalInconsistency(f"Frölicher-type inequality fails in degree {k}")
        rows.append({"k": k, "lhs": lhs, "rhs": rhs, "slack": lhs - rhs, "slack_even": (lhs - rhs) % 2 == 0})
    equality = all(r["slack"] == 0 for r in rows)
    if equality != ddbar["holds"]:
        raise InternalInconsistency("equality in the Frölicher-type inequality disagrees with the ddbar-lemma verdict")
    return {"per_degree": rows, "equality_all_k": equality, "ddbar_lemma": ddbar["holds"]}
