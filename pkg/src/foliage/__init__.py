"""Exact audits of contact/Sasakian structures and basic, de Rham and bigraded cohomology on Lie algebra models."""

from .basic import (
    basic_subcomplex,
    betti,
    cohomology,
    full_complex,
    hard_lefschetz_check,
    harmonic_space,
    homological_orientability,
    inclusion_map,
    massey_scan,
    massey_triple,
    symplectic_obstruction,
)
from .bigraded import (
    aeppli,
    bott_chern,
    build_bigraded,
    ddbar_lemma_check,
    dolbeault,
    frolicher_E1_collapse,
    frolicher_inequality,
    kahler_audit,
    laplacians,
    lefschetz_ops,
    kahler_hodge_checks,
    transverse_star,
)
from .catalog import builtin_catalog, catalog_entry
from .contact import Level, StructureBundle, classify, is_contact, reeb_field
from .document import ModelDocument, dump_model, parse_model
from .errors import FoliageError, InputError, InternalInconsistency, NotContactError
from .exterior import Form, LieAlgebra, ce_d, validate_algebra, wedge
from .linalg import Gram, Matrix, QuotientSpace, Subspace
from .report import build_report, render_report
from .scalars import Gauss

__all__ = [
    "aeppli",
    "basic_subcomplex",
    "betti",
    "bott_chern",
    "build_bigraded",
    "build_report",
    "builtin_catalog",
    "catalog_entry",
    "ce_d",
    "classify",
    "cohomology",
    "ddbar_lemma_check",
    "dolbeault",
    "dump_model",
    "FoliageError",
    "Form",
    "frolicher_E1_collapse",
    "frolicher_inequality",
    "full_complex",
    "Gauss",
    "Gram",
    "hard_lefschetz_check",
    "harmonic_space",
    "homological_orientability",
    "inclusion_map",
    "InputError",
    "InternalInconsistency",
    "is_contact",
    "kahler_audit",
    "kahler_hodge_checks",
    "laplacians",
    "lefschetz_ops",
    "Level",
    "LieAlgebra",
    "massey_scan",
    "massey_triple",
    "Matrix",
    "ModelDocument",
    "NotContactError",
    "parse_model",
    "QuotientSpace",
    "reeb_field",
    "render_report",
    "StructureBundle",
    "Subspace",
    "symplectic_obstruction",
    "transverse_star",
    "validate_algebra",
    "wedge",
]

__version__ = "0.1.0"
