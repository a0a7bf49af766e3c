"""Contact, contact metric, K-contact and Sasakian audits on invariant structures.

Conventions (no 1/2 in ``d``): a contact metric structure satisfies
``g(X, phi Y) = d eta(X, Y)`` and normality reads ``N_phi + d eta (x) xi = 0``.
On the standard Heisenberg structure this is the identity that actually holds;
the constant 2 appears only under the halved convention for ``d``.

Matrices act on column vectors: ``phi e_j`` is column ``j`` of ``phi``. A metric
is a Gram matrix on vectors, ``g(X, Y) = X^T G Y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Any, Sequence

from .errors import InputError, InternalInconsistency, NotContactError
from .exterior import Form, LieAlgebra, ce_d, lie_derivative_endo
from .linalg import Gram, LinalgError, Matrix, Subspace, block_diag, is_positive_definite, kernel_basis, solve
from .scalars import format_scalar

__all__ = [
    "CONVENTION",
    "Level",
    "Check",
    "StructureBundle",
    "ContactVerdict",
    "ClassificationVerdict",
    "TransverseJ",
    "is_contact",
    "reeb_field",
    "almost_contact_check",
    "metric_compat_check",
    "contact_metric_check",
    "k_contact_check",
    "normality_check",
    "nijenhuis",
    "classify",
    "transverse_J",
    "synthesize_structure",
    "distribution_basis",
]

CONVENTION = "d-no-half"

PASS, FAIL, INCOMPLETE = "pass", "fail", "incomplete"


class Level(str, Enum):
    INCOMPLETE = "Incomplete"
    NOT_CONTACT = "NotContact"
    CONTACT = "Contact"
    CONTACT_METRIC = "ContactMetric"
    K_CONTACT = "KContact"
    SASAKIAN = "Sasakian"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Check:
    status: str
    witness: Any = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.detail:
            out["detail"] = {k: _jsonable(v) for k, v in self.detail.items()}
        return out


def _jsonable(x):
    if isinstance(x, Check):
        return x.to_dict()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, Matrix):
        return [[format_scalar(v) for v in r] for r in x.rows]
    return format_scalar(x)


@dataclass(frozen=True)
class StructureBundle:
    """Candidate ``(eta, xi, phi, g)`` on a Lie algebra model; any of the last three may be absent."""

    model: LieAlgebra
    eta: Form | None
    xi: tuple | None = None
    phi: Matrix | None = None
    metric: Gram | None = None

    def __post_init__(self):
        m = self.model.dim
        if self.eta is not None and (self.eta.degree != 1 or self.eta.dim != m):
            raise InputError("eta must be a 1-form on the model")
        if self.xi is not None and len(self.xi) != m:
            raise InputError("xi has the wrong dimension")
        if self.phi is not None and self.phi.shape != (m, m):
            raise InputError("phi must be a square matrix of model dimension")
        if self.metric is not None and self.metric.dim != m:
            raise InputError("metric must be a Gram matrix of model dimension")

    def with_fields(self, **kw) -> "StructureBundle":
        data = dict(model=self.model, eta=self.eta, xi=self.xi, phi=self.phi, metric=self.metric)
        data.update(kw)
        return StructureBundle(**data)


@dataclass(frozen=True)
class ContactVerdict:
    contact: bool
    top_coefficient: Any

    def __bool__(self):
        return self.contact


@dataclass(frozen=True)
class ClassificationVerdict:
    level: Level
    sub_checks: dict

    def to_dict(self) -> dict:
        return {"level": self.level.value, "sub_checks": {k: v.to_dict() for k, v in self.sub_checks.items()}}


# --- helpers ---------------------------------------------------------------


def _vec(v):
    return [format_scalar(x) for x in v]


def _unit(n, j):
    return tuple(1 if i == j else 0 for i in range(n))


def _two_form_matrix(omega: Form) -> Matrix:
    m = omega.dim
    e = [_unit(m, i) for i in range(m)]
    return Matrix([[omega.evaluate(e[i], e[j]) for j in range(m)] for i in range(m)], m)


def _first_mismatch(A: Matrix, B: Matrix, symmetric=False):
    for i in range(A.nrows):
        for j in range(i if symmetric else 0, A.ncols):
            if A[i, j] != B[i, j]:
                return (i + 1, j + 1)
    return None


def _outer(u, v) -> Matrix:
    return Matrix([[a * b for b in v] for a in u], len(v))


def _eta_row(bundle):
    return bundle.eta.to_vector()


def distribution_basis(eta: Form) -> list[tuple]:
    """Canonical basis of ``D = ker eta`` (reduced-echelon kernel basis, in order)."""
    return list(kernel_basis(Matrix([eta.to_vector()], eta.dim)).basis)


# --- contact condition -----------------------------------------------------


def is_contact(model: LieAlgebra, eta: Form) -> ContactVerdict:
    """``eta ^ (d eta)^n`` and whether its single top coefficient is nonzero."""
    m = model.dim
    if m % 2 == 0:
        raise InputError(f"contact forms need an odd-dimensional model, got dimension {m}")
    if eta.degree != 1 or eta.dim != m:
        raise InputError("eta must be a 1-form on the model")
    n = (m - 1) // 2
    top = eta.wedge(ce_d(model, eta).power(n))
    coeff = top.coeffs.get((1 << m) - 1, 0)
    return ContactVerdict(bool(coeff), coeff)


def reeb_field(model: LieAlgebra, eta: Form) -> tuple:
    """The unique ``xi`` with ``eta(xi) = 1`` and ``i_xi d eta = 0``."""
    if not is_contact(model, eta):
        raise NotContactError("eta is not a contact form; no Reeb field")
    m = model.dim
    deta = ce_d(model, eta)
    om = _two_form_matrix(deta)
    # i_xi d eta = 0  <=>  d eta(xi, e_j) = 0 for all j  <=>  om^T xi = 0
    A = Matrix([eta.to_vector()] + list(om.T.rows), m)
    b = (1,) + (0,) * m
    xi = solve(A, b)
    if xi is None or kernel_basis(A).dim:
        raise InternalInconsistency("Reeb system has no unique solution although eta is contact")
    return xi


# --- the tower -------------------------------------------------------------


def _missing(bundle, *names):
    return [n for n in names if getattr(bundle, n) is None]


def _effective_xi(bundle):
    if bundle.xi is not None:
        return bundle.xi
    try:
        return reeb_field(bundle.model, bundle.eta)
    except (NotContactError, InputError):
        return None


def almost_contact_check(bundle: StructureBundle) -> Check:
    """``eta(xi) = 1`` and ``phi^2 = -id + xi (x) eta``; also reports ``phi xi = 0`` and ``eta o phi = 0``."""
    miss = _missing(bundle, "eta", "phi")
    xi = _effective_xi(bundle) if bundle.eta is not None else None
    if miss or xi is None:
        return Check(INCOMPLETE, detail={"missing": miss or ["xi"]})
    m = bundle.model.dim
    eta = _eta_row(bundle)
    phi = bundle.phi
    eta_xi = sum(a * b for a, b in zip(eta, xi))
    lhs = phi @ phi
    rhs = Matrix.identity(m).scale(-1) + _outer(xi, eta)
    residual = lhs - rhs
    phi_xi = phi.apply(xi)
    eta_phi = Matrix([eta], m) @ phi
    ok = eta_xi == 1 and residual.is_zero()
    detail = {
        "eta_xi": eta_xi,
        "phi_xi_zero": not any(phi_xi),
        "eta_phi_zero": eta_phi.is_zero(),
    }
    if ok and not (detail["phi_xi_zero"] and detail["eta_phi_zero"]):
        raise InternalInconsistency("almost contact identities hold but phi xi or eta o phi is nonzero")
    witness = None
    if eta_xi != 1:
        witness = {"eta_xi": eta_xi}
    elif not residual.is_zero():
        witness = {"residual": residual}
    return Check(PASS if ok else FAIL, witness, detail)


def metric_compat_check(bundle: StructureBundle) -> Check:
    """``g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)`` on all basis pairs."""
    miss = _missing(bundle, "eta", "phi", "metric")
    if miss:
        return Check(INCOMPLETE, detail={"missing": miss})
    G = bundle.metric.matrix
    phi = bundle.phi
    eta = _eta_row(bundle)
    lhs = phi.T @ G @ phi
    rhs = G - _outer(eta, eta)
    w = _first_mismatch(lhs, rhs, symmetric=True)
    if w is None:
        return Check(PASS)
    i, j = w
    return Check(FAIL, {"pair": [i, j], "lhs": format_scalar(lhs[i - 1, j - 1]), "rhs": format_scalar(rhs[i - 1, j - 1])})


def contact_metric_check(bundle: StructureBundle) -> Check:
    """``g(X, phi Y) = d eta(X, Y)``, ``d eta(phi X, phi Y) = d eta(X, Y)`` and positivity on ``D``."""
    miss = _missing(bundle, "eta", "phi", "metric")
    if miss:
        return Check(INCOMPLETE, detail={"missing": miss})
    model = bundle.model
    try:
        contact = is_contact(model, bundle.eta)
    except InputError as exc:
        return Check(FAIL, {"contact": str(exc)})
    if not contact:
        return Check(FAIL, {"contact": "eta ^ (d eta)^n = 0"})
    m = model.dim
    reeb = reeb_field(model, bundle.eta)
    reeb_ok = bundle.xi is None or tuple(bundle.xi) == tuple(reeb)
    om = _two_form_matrix(ce_d(model, bundle.eta))
    G = bundle.metric.matrix
    phi = bundle.phi

    compat = _first_mismatch(G @ phi, om)
    invariant = _first_mismatch(phi.T @ om @ phi, om)

    # dη(φX, Y) = X^T φ^T Ω Y; positivity of its symmetric part on ker η
    S = phi.T @ om
    S = (S + S.T).scale(Fraction(1, 2))
    B = Matrix.from_columns(distribution_basis(bundle.eta), m)
    restricted = B.T @ S @ B
    positive = is_positive_definite(restricted)

    detail = {
        "reeb_matches": reeb_ok,
        "compatibility": compat is None,
        "d_eta_phi_invariant": invariant is None,
        "positivity": positive,
    }
    ok = reeb_ok and compat is None and invariant is None and positive
    witness = None
    if not ok:
        witness = {}
        if compat is not None:
            witness["compatibility_pair"] = list(compat)
        if invariant is not None:
            witness["invariance_pair"] = list(invariant)
        if not positive:
            witness["positivity"] = "d eta(phi X, X) is not positive definite on ker eta"
        if not reeb_ok:
            witness["reeb"] = _vec(reeb)
    return Check(PASS if ok else FAIL, witness, detail)


def k_contact_check(bundle: StructureBundle) -> Check:
    """Killing test for ``xi`` and ``L_xi phi = 0``, reported separately.

    On a bundle that passes the contact metric audit both tests must agree;
    a disagreement raises ``InternalInconsistency``.
    """
    miss = _missing(bundle, "eta", "phi", "metric")
    xi = _effective_xi(bundle) if bundle.eta is not None else None
    if miss or xi is None:
        return Check(INCOMPLETE, detail={"missing": miss or ["xi"]})
    model = bundle.model
    G = bundle.metric.matrix
    A = model.ad(xi)
    killing_form = A.T @ G + G @ A
    killing_w = _first_mismatch(killing_form, Matrix.zeros(model.dim, model.dim), symmetric=True)
    lphi = lie_derivative_endo(model, xi, bundle.phi)
    lphi_zero = lphi.is_zero()
    killing = killing_w is None
    if killing != lphi_zero and contact_metric_check(bundle).passed:
        raise InternalInconsistency(
            f"Killing verdict ({killing}) and L_xi phi = 0 verdict ({lphi_zero}) disagree on a contact metric structure"
        )
    detail = {"killing": killing, "lie_phi_zero": lphi_zero}
    witness = None
    if not killing:
        i, j = killing_w
        witness = {"killing_pair": [i, j], "value": format_scalar(killing_form[i - 1, j - 1])}
    elif not lphi_zero:
        witness = {"lie_phi": lphi}
    return Check(PASS if killing and lphi_zero else FAIL, witness, detail)


def nijenhuis(model: LieAlgebra, phi: Matrix, X: Sequence, Y: Sequence) -> tuple:
    """``[phi X, phi Y] + phi^2 [X, Y] - phi [X, phi Y] - phi [phi X, Y]``."""
    br = model.bracket
    pX, pY = phi.apply(X), phi.apply(Y)
    a = br(pX, pY)
    b = phi.apply(phi.apply(br(X, Y)))
    c = phi.apply(br(X, pY))
    d = phi.apply(br(pX, Y))
    return tuple(w + x - y - z for w, x, y, z in zip(a, b, c, d))


def normality_check(bundle: StructureBundle) -> Check:
    """``N_phi(X, Y) + d eta(X, Y) xi = 0`` on all basis pairs; residual reported per failing pair."""
    miss = _missing(bundle, "eta", "phi")
    xi = _effective_xi(bundle) if bundle.eta is not None else None
    if miss or xi is None:
        return Check(INCOMPLETE, detail={"missing": miss or ["xi"]})
    model = bundle.model
    m = model.dim
    deta = ce_d(model, bundle.eta)
    e = [_unit(m, i) for i in range(m)]
    failures = []
    for i, j in combinations(range(m), 2):
        N = nijenhuis(model, bundle.phi, e[i], e[j])
        c = deta.evaluate(e[i], e[j])
        res = tuple(n + c * x for n, x in zip(N, xi))
        if any(res):
            failures.append({"pair": [i + 1, j + 1], "residual": _vec(res)})
    if not failures:
        return Check(PASS)
    return Check(FAIL, failures[0], {"failing_pairs": [f["pair"] for f in failures]})


def classify(bundle: StructureBundle) -> ClassificationVerdict:
    """Run the whole tower and return the highest rung whose prerequisites all pass."""
    checks: dict[str, Check] = {}
    if bundle.eta is None:
        return ClassificationVerdict(Level.INCOMPLETE, {"contact": Check(INCOMPLETE, detail={"missing": ["eta"]})})
    model = bundle.model
    try:
        cv = is_contact(model, bundle.eta)
        checks["contact"] = Check(PASS if cv else FAIL, None if cv else {"top_coefficient": cv.top_coefficient},
                                  {"top_coefficient": cv.top_coefficient})
    except InputError as exc:
        checks["contact"] = Check(FAIL, {"reason": str(exc)})
        cv = None
    if cv:
        reeb = reeb_field(model, bundle.eta)
        if bundle.xi is None:
            checks["reeb"] = Check(PASS, detail={"xi": _vec(reeb), "derived": True})
            bundle = bundle.with_fields(xi=reeb)
        elif tuple(bundle.xi) == tuple(reeb):
            checks["reeb"] = Check(PASS, detail={"xi": _vec(reeb), "derived": False})
        else:
            checks["reeb"] = Check(FAIL, {"expected": _vec(reeb), "given": _vec(bundle.xi)})
    checks["almost_contact"] = almost_contact_check(bundle)
    checks["metric_compat"] = metric_compat_check(bundle)
    checks["contact_metric"] = contact_metric_check(bundle)
    checks["k_contact"] = k_contact_check(bundle)
    checks["normality"] = normality_check(bundle)

    chain = [
        (Level.CONTACT, ["contact", "reeb"]),
        (Level.CONTACT_METRIC, ["almost_contact", "metric_compat", "contact_metric"]),
        (Level.K_CONTACT, ["k_contact"]),
        (Level.SASAKIAN, ["normality"]),
    ]
    level = Level.NOT_CONTACT
    for rung, names in chain:
        if all(n in checks and checks[n].passed for n in names):
            level = rung
        else:
            break
    return ClassificationVerdict(level, checks)


# --- transverse structure ----------------------------------------------------


@dataclass(frozen=True)
class TransverseJ:
    d_basis: list
    matrix: Matrix
    square_is_minus_id: bool
    foliated: bool
    integrable: bool
    foliated_witness: Any = None
    integrable_witness: Any = None

    def to_dict(self):
        out = {
            "matrix": _jsonable(self.matrix),
            "square_is_minus_id": self.square_is_minus_id,
            "foliated": self.foliated,
            "integrable": self.integrable,
        }
        if self.foliated_witness is not None:
            out["foliated_witness"] = _jsonable(self.foliated_witness)
        if self.integrable_witness is not None:
            out["integrable_witness"] = _jsonable(self.integrable_witness)
        return out


def transverse_J(bundle: StructureBundle) -> TransverseJ:
    """Restrict ``phi`` to ``D = ker eta``; test ``J^2 = -id``, foliatedness and integrability mod ``xi``."""
    ac = almost_contact_check(bundle)
    if not ac.passed:
        raise InputError(f"transverse_J needs an almost contact structure ({ac.status})")
    model = bundle.model
    m = model.dim
    xi = _effective_xi(bundle)
    basis = distribution_basis(bundle.eta)
    D = Subspace(m, basis)
    cols = []
    for b in basis:
        img = bundle.phi.apply(b)
        if not D.contains(img):
            raise InternalInconsistency("D = ker eta is not phi-invariant")
        cols.append(_coords_in(basis, img))
    k = len(basis)
    J = Matrix.from_columns(cols, k)
    square = (J @ J) == Matrix.identity(k).scale(-1)
    line = Subspace(m, [xi])

    fol_w = None
    for idx, b in enumerate(basis):
        w = tuple(x - y for x, y in zip(model.bracket(xi, bundle.phi.apply(b)),
                                         bundle.phi.apply(model.bracket(xi, b))))
        if not line.contains(w):
            fol_w = {"basis_index": idx + 1, "value": _vec(w)}
            break
    int_w = None
    for i, j in combinations(range(k), 2):
        N = nijenhuis(model, bundle.phi, basis[i], basis[j])
        if not line.contains(N):
            int_w = {"pair": [i + 1, j + 1], "value": _vec(N)}
            break
    return TransverseJ(basis, J, square, fol_w is None, int_w is None, fol_w, int_w)


def _coords_in(basis, v):
    """Coordinates of ``v`` in a reduced-echelon ``basis``."""
    return Subspace(len(v), basis).coordinates(v) if basis else ()


def synthesize_structure(model: LieAlgebra, eta: Form, xi: Sequence, transverse_metric, J_bar: Matrix) -> StructureBundle:
    """Build ``(g, xi, eta, phi)`` from transverse data on ``D = ker eta``.

    ``g`` is the transverse metric on ``D``, ``xi`` has unit length and is
    orthogonal to ``D``; ``phi`` is ``J_bar`` on ``D`` and kills ``xi``. Both
    matrices are given in the basis returned by ``distribution_basis(eta)``.
    """
    m = model.dim
    xi = tuple(xi)
    if sum(a * b for a, b in zip(eta.to_vector(), xi)) != 1:
        raise InputError("eta(xi) must be 1")
    basis = distribution_basis(eta)
    k = len(basis)
    gbar = transverse_metric.matrix if isinstance(transverse_metric, Gram) else transverse_metric
    if gbar.shape != (k, k) or J_bar.shape != (k, k):
        raise InputError(f"transverse data must be {k}x{k}")
    try:
        Gram(gbar)
    except LinalgError as exc:
        raise InputError(f"transverse metric rejected: {exc}") from None
    if J_bar @ J_bar != Matrix.identity(k).scale(-1):
        raise InputError("J_bar^2 != -id")
    if J_bar.T @ gbar @ J_bar != gbar:
        raise InputError("transverse metric is not J_bar-invariant")
    P = Matrix.from_columns(basis + [xi], m)
    Pinv = P.inverse()
    G = Pinv.T @ block_diag(gbar, Matrix.identity(1)) @ Pinv
    phi = P @ block_diag(J_bar, Matrix.zeros(1, 1)) @ Pinv
    bundle = StructureBundle(model, eta, xi, phi, Gram(G))
    if not (almost_contact_check(bundle).passed and metric_compat_check(bundle).passed):
        raise InternalInconsistency("synthesized structure is not almost contact metric")
    return bundle
