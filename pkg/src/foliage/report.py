"""Full cohomology/obstruction reports for a model document, rendered as JSON or markdown."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .basic import (
    basic_subcomplex,
    betti,
    full_complex,
    hard_lefschetz_check,
    harmonic_space,
    homological_orientability,
    inclusion_map,
    massey_scan,
    symplectic_obstruction,
)
from .bigraded import (
    aeppli,
    bott_chern,
    build_bigraded,
    ddbar_lemma_check,
    dolbeault,
    duality_check,
    frolicher_E1_collapse,
    frolicher_inequality,
    kahler_audit,
    kahler_form_from_metric,
    laplacians,
    lefschetz_ops,
    kahler_hodge_checks,
    transverse_star,
)
from .contact import CONVENTION, Level, classify, is_contact
from .document import ModelDocument
from .errors import InputError, InternalInconsistency
from .exterior import Form
from .linalg import Matrix
from .scalars import Gauss, format_scalar

__all__ = ["ASSUMPTIONS", "build_report", "render_report", "render_json", "render_markdown", "flatten"]

ASSUMPTIONS = [
    "cohomology of left-invariant forms stands in for the cohomology of the compact quotient",
    "d has no factor 1/2: d eta(X, Y) = -eta([X, Y])",
    "Kähler form w(X, Y) = g(JX, Y); (1,0)-forms satisfy a(JX) = i a(X)",
    "duality reads H_BC^{p,s} -> H_A^{q-p,q-s} with q the complex codimension",
    "Gram defaults to the identity when the document gives no metric",
]


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, (Fraction, Gauss)):
        return format_scalar(x)
    if isinstance(x, Form):
        return str(x)
    if isinstance(x, Matrix):
        return [[format_scalar(v) for v in r] for r in x.rows]
    if isinstance(x, Level):
        return x.value
    return str(x)


def _bideg_table(table):
    return {f"{r},{s}": v for (r, s), v in sorted(table.items())}


class _Context:
    """Shared objects for one report; built once before any section runs."""

    def __init__(self, doc: ModelDocument):
        self.doc = doc
        self.model = doc.model()
        self.full = full_complex(self.model)
        self.leaf = doc.leaf_direction(self.model)
        if doc.foliation_dim == 0:
            self.basic = self.full
        elif self.leaf is not None:
            self.basic = basic_subcomplex(self.model, self.leaf)
        else:
            self.basic = None
        eta = doc.eta_form()
        self.eta = eta
        self.contact = bool(eta is not None and self.model.dim % 2 and is_contact(self.model, eta))
        self.gram = doc.gram()
        self.gram_label = "document-metric" if self.gram is not None else "identity"
        self.classification = classify(doc.bundle(self.model))
        self.bigraded = None
        self.bigraded_error = None
        J = doc.complex_structure()
        if self.basic is None:
            self.bigraded_error = "no leaf direction for the foliation"
        elif J is None:
            self.bigraded_error = "no transverse complex structure (J or phi) given"
        else:
            try:
                self.bigraded = build_bigraded(self.basic, J, self.gram)
            except InputError as exc:
                self.bigraded_error = str(exc)
        self.omega = None
        self.omega_source = None
        if self.bigraded is not None:
            if doc.omega is not None:
                self.omega, self.omega_source = doc.omega_form(), "document"
            else:
                try:
                    self.omega = kahler_form_from_metric(self.model.dim, J, self.gram)
                    self.omega_source = "g(J., .)"
                except InputError as exc:
                    self.omega_source = f"unavailable: {exc}"


def _skipped(reason):
    return {"skipped": reason}


def _section_classification(ctx: _Context):
    return {
        "classification": ctx.classification.level.value,
        "classification_checks": ctx.classification.to_dict()["sub_checks"],
    }


def _section_betti(ctx: _Context):
    out = {"de_rham_betti": betti(ctx.full)}
    out["basic_betti"] = betti(ctx.basic, trim=True) if ctx.basic is not None else None
    harmonic = harmonic_space(ctx.full)
    out["harmonic_dims_match"] = [h.dim for h in harmonic] == out["de_rham_betti"]
    return out


def _section_hodge(ctx: _Context):
    BC = ctx.bigraded
    if BC is None:
        return {"hodge": _skipped(ctx.bigraded_error)}
    return {
        "hodge": {
            "q": BC.q,
            "space_dims": [[BC.dims[(r, s)] for s in range(BC.q + 1)] for r in range(BC.q + 1)],
            "dolbeault": dolbeault(BC).rows(),
            "bott_chern": bott_chern(BC).rows(),
            "aeppli": aeppli(BC).rows(),
        }
    }


def _section_symplectic(ctx: _Context):
    if not ctx.contact:
        return {"symplectic_kernel": _skipped("eta is absent or not contact")}
    sv = symplectic_obstruction(ctx.model, ctx.eta)
    inc = inclusion_map(ctx.model, ctx.leaf)
    out = sv.to_dict()
    out["inclusion_kernel_dims"] = [d.kernel_dim for d in inc]
    return {"symplectic_kernel": out}


def _section_orientability(ctx: _Context):
    if ctx.basic is None:
        return {"homological_orientability": _skipped("no leaf direction for the foliation")}
    return {"homological_orientability": homological_orientability(ctx.model, ctx.leaf).to_dict()}


def _section_lefschetz(ctx: _Context):
    if not ctx.contact:
        return {"hard_lefschetz": _skipped("eta is absent or not contact")}
    verdicts = hard_lefschetz_check(ctx.model, ctx.eta, ctx.gram)
    all_iso = all(v.isomorphism for v in verdicts)
    if ctx.classification.level == Level.SASAKIAN and not all_iso:
        raise InternalInconsistency("a Sasakian bundle fails Hard Lefschetz with its own metric")
    return {
        "hard_lefschetz": {
            "gram": ctx.gram_label,
            "per_p": [v.to_dict() for v in verdicts],
            "all_isomorphisms": all_iso,
            "sasakian_excluded": not all_iso,
        }
    }


def _section_frolicher(ctx: _Context):
    BC = ctx.bigraded
    if BC is None:
        return {"frolicher": _skipped(ctx.bigraded_error), "ddbar_lemma": _skipped(ctx.bigraded_error)}
    dd = ddbar_lemma_check(BC)
    ineq = frolicher_inequality(BC, ddbar=dd)
    return {
        "frolicher": {"inequality": ineq["per_degree"], "equality_all_k": ineq["equality_all_k"],
                      "E1": frolicher_E1_collapse(BC)},
        "ddbar_lemma": {
            "holds": dd["holds"],
            "per_bidegree": {f"{r},{s}": v for (r, s), v in sorted(dd["per_bidegree"].items())},
        },
    }


def _section_massey(ctx: _Context):
    out = {"de_rham": massey_scan(ctx.full, [1]).to_dict()}
    if ctx.basic is not None:
        out["basic"] = massey_scan(ctx.basic, [1]).to_dict()
    return {"massey": out}


def _section_kahler(ctx: _Context):
    BC = ctx.bigraded
    if BC is None:
        return {"kahler": _skipped(ctx.bigraded_error)}
    laps = laplacians(BC)
    out = {
        "laplacian_kernel_dims": {name: _bideg_table(t) for name, t in laps.kernel_dims.items()},
        "decompositions_exact": all(
            v["spans"] and v["direct"] and v["orthogonal"] for d in laps.decompositions.values() for v in d.values()
        ),
    }
    orientable = BC.basic.dims[2 * BC.q] == 1 and BC.basic.cohomology[2 * BC.q].dim == 1
    if orientable:
        star = transverse_star(BC)
        out["star"] = star.to_dict()
        out["duality"] = duality_check(BC, star, laps)
    else:
        out["star"] = _skipped("foliation is not homologically orientable")
    if ctx.omega is None:
        out["omega"] = _skipped(ctx.omega_source or "no Kähler form")
        return {"kahler": out}
    audit = kahler_audit(BC, ctx.omega)
    out["omega"] = {"form": str(ctx.omega), "source": ctx.omega_source, "audit": audit}
    if audit["passed"]:
        ops = lefschetz_ops(BC, ctx.omega)
        if not ops.all_zero:
            bad = [k for k, r in ops.residuals.items() if not r.is_zero()]
            raise InternalInconsistency(f"Kähler identities fail on an audited Kähler structure: {bad}")
        out["identities"] = ops.to_dict()
        if orientable:
            out["hodge_structure"] = kahler_hodge_checks(BC, ctx.omega)
    return {"kahler": out}


_SECTIONS = [
    ("classification", _section_classification),
    ("betti", _section_betti),
    ("hodge", _section_hodge),
    ("symplectic", _section_symplectic),
    ("orientability", _section_orientability),
    ("lefschetz", _section_lefschetz),
    ("frolicher", _section_frolicher),
    ("massey", _section_massey),
    ("kahler", _section_kahler),
]


def build_report(doc: ModelDocument, jobs: int = 1) -> dict:
    """Every section of the report; ``jobs > 1`` computes sections concurrently with a fixed merge order."""
    ctx = _Context(doc)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda item: item[1](ctx), _SECTIONS))
    else:
        parts = [fn(ctx) for _, fn in _SECTIONS]
    merged = {}
    for p in parts:
        merged.update(p)

    kahler = merged["kahler"]
    audit_passed = isinstance(kahler.get("omega"), dict) and kahler["omega"].get("audit", {}).get("passed", False)
    basic_massey = merged["massey"].get("basic")
    if audit_passed and basic_massey is not None and not basic_massey["all_vanish"]:
        raise InternalInconsistency("a nonvanishing basic Massey product on a transversely Kähler foliation")

    report = {
        "model": doc.name,
        "dimension": doc.dimension,
        "foliation_dim": doc.foliation_dim,
        "convention": CONVENTION,
        "assumptions": ASSUMPTIONS,
        "classification": merged["classification"],
        "classification_checks": merged["classification_checks"],
        "de_rham_betti": merged["de_rham_betti"],
        "basic_betti": merged["basic_betti"],
        "hodge": merged["hodge"],
        "obstructions": {
            "symplectic_kernel": merged["symplectic_kernel"],
            "homological_orientability": merged["homological_orientability"],
            "hard_lefschetz": merged["hard_lefschetz"],
            "frolicher": merged["frolicher"],
            "ddbar_lemma": merged["ddbar_lemma"],
            "massey": merged["massey"],
        },
        "kahler": kahler,
        "oracle_agreement": _agreement(merged),
    }
    return jsonable(report)


def _agreement(merged) -> dict:
    """Internal cross-checks; each either holds or was reported as an internal inconsistency."""
    out = {"harmonic_dims_equal_betti": merged["harmonic_dims_match"]}
    hodge = merged["hodge"]
    if "skipped" not in hodge:
        out["laplacian_kernels_equal_cohomology"] = True
        out["bott_chern_aeppli_conjugation_symmetric"] = True
    fro = merged["frolicher"]
    if "skipped" not in fro:
        out["frolicher_equality_matches_ddbar_lemma"] = fro["equality_all_k"] == merged["ddbar_lemma"]["holds"]
    sk = merged["symplectic_kernel"]
    if "skipped" not in sk:
        out["symplectic_obstruction_consistent"] = sk["verdict"] == "obstruction-consistent"
    return out


def render_json(report: dict) -> str:
    return json.dumps(report, separators=(",", ":"), ensure_ascii=False) + "\n"


def flatten(data, prefix="") -> list[tuple[str, object]]:
    """Leaves of a JSON value as ``(path, value)``; lists of scalars count as one leaf."""
    if isinstance(data, dict):
        if not data:
            return [(prefix, {})]
        out = []
        for k, v in data.items():
            out += flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(data, list) and any(isinstance(v, (dict, list)) for v in data):
        out = []
        for n, v in enumerate(data):
            out += flatten(v, f"{prefix}[{n}]")
        return out
    return [(prefix, data)]


def render_markdown(report: dict) -> str:
    lines = [f"# Report for {report['model']}", ""]
    current = None
    for path, value in flatten(report):
        head = path.split(".")[0].split("[")[0]
        if head != current:
            if current is not None:
                lines.append("")
            lines.append(f"## {head}")
            current = head
        lines.append(f"- `{path}`: {json.dumps(value, separators=(',', ':'), ensure_ascii=False)}")
    return "\n".join(lines) + "\n"


def render_report(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "md":
        return render_markdown(report)
    raise ValueError(f"unknown format {fmt!r}")
