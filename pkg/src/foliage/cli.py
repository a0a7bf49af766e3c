"""Command-line interface: ``foliage <command> ...``.

Exit codes: 0 computed, 1 invalid input or usage, 2 internal invariant violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .basic import basic_subcomplex, betti, full_complex, hard_lefschetz_check
from .bigraded import aeppli, bott_chern, build_bigraded, dolbeault
from .catalog import builtin_catalog, catalog_entry
from .contact import Level, classify, is_contact
from .document import DocumentError, ModelDocument, dump_model, parse_matrix, parse_model
from .errors import InputError, InternalInconsistency
from .exterior import validate_algebra
from .linalg import Gram, LinalgError
from .report import build_report, render_report

__all__ = ["main", "build_parser"]

THEORIES = ("derham", "basic", "dolbeault", "bc", "aeppli")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="foliage", description="Exact cohomology and structure audits for Lie algebra models.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("validate", help="check a model document and the Jacobi identity")
    sp.add_argument("file")
    sp = sub.add_parser("classify", help="place the structure bundle in the contact/Sasakian tower")
    sp.add_argument("file")
    sp = sub.add_parser("cohomology", help="print Betti numbers or a Hodge diamond")
    sp.add_argument("file")
    sp.add_argument("--theory", required=True, choices=THEORIES)
    sp = sub.add_parser("obstructions", help="symplectic kernel, orientability, Frölicher, ddbar-lemma, Massey")
    sp.add_argument("file")
    sp = sub.add_parser("lefschetz", help="Hard Lefschetz test for the contact form")
    sp.add_argument("file")
    sp.add_argument("--gram", default=None, help="'identity' or a JSON file with a metric matrix")
    sp = sub.add_parser("report", help="full report")
    sp.add_argument("file")
    sp.add_argument("--format", default="json", choices=("json", "md"))
    sp.add_argument("--jobs", type=int, default=1)
    sp = sub.add_parser("catalog", help="built-in models")
    csub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    csub.add_parser("list")
    show = csub.add_parser("show")
    show.add_argument("name")
    return p


def load_document(ref: str) -> ModelDocument:
    """Read a model file; a name that is not an existing file is looked up in the catalog."""
    path = Path(ref)
    if path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise InputError(f"cannot read {ref}: {exc}") from None
        return parse_model(text)
    entry = catalog_entry(ref)
    if entry is None:
        raise InputError(f"no such file or catalog model: {ref}")
    return entry.document


def _load_gram(ref: str | None, doc: ModelDocument):
    if ref is None:
        return doc.gram(), "document-metric" if doc.metric is not None else "identity"
    if ref == "identity":
        return None, "identity"
    try:
        data = json.loads(Path(ref).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read Gram file {ref}: {exc}") from None
    M = parse_matrix(data, doc.dimension)
    try:
        return Gram(M), ref
    except LinalgError as exc:
        raise InputError(f"Gram file {ref}: {exc}") from None


def _cmd_validate(args, out):
    doc = load_document(args.file)
    check = validate_algebra(doc.model())
    if not check.valid:
        raise InputError(f"Jacobi identity fails: {check.describe()}")
    out.write(f"valid: {doc.name} (dimension {doc.dimension}, {len(doc.brackets)} brackets)\n")


def _cmd_classify(args, out):
    doc = load_document(args.file)
    verdict = classify(doc.bundle())
    out.write(f"{verdict.level.value}\n")


def _cmd_cohomology(args, out):
    doc = load_document(args.file)
    model = doc.model()
    if args.theory == "derham":
        out.write(" ".join(map(str, betti(full_complex(model)))) + "\n")
        return
    leaf = doc.leaf_direction(model)
    if doc.foliation_dim == 0:
        basic = full_complex(model)
    elif leaf is None:
        raise InputError("basic cohomology needs xi or a contact eta")
    else:
        basic = basic_subcomplex(model, leaf)
    if args.theory == "basic":
        out.write(" ".join(map(str, betti(basic, trim=True))) + "\n")
        return
    J = doc.complex_structure()
    if J is None:
        raise InputError("bigraded cohomology needs J (or phi for a foliation of dimension 1)")
    BC = build_bigraded(basic, J, doc.gram())
    diamond = {"dolbeault": dolbeault, "bc": bott_chern, "aeppli": aeppli}[args.theory](BC)
    for row in diamond.rows():
        out.write(" ".join(map(str, row)) + "\n")


def _cmd_obstructions(args, out):
    report = build_report(load_document(args.file))
    out.write(json.dumps(report["obstructions"], indent=2, ensure_ascii=False) + "\n")


def _cmd_lefschetz(args, out):
    doc = load_document(args.file)
    model = doc.model()
    eta = doc.eta_form()
    if eta is None or not doc.dimension % 2 or not is_contact(model, eta):
        raise InputError("Hard Lefschetz needs a contact form eta")
    gram, label = _load_gram(args.gram, doc)
    verdicts = hard_lefschetz_check(model, eta, gram)
    out.write(f"gram: {label}\n")
    for v in verdicts:
        line = f"p={v.p} H^{v.source_degree} -> H^{v.target_degree}: {v.status}"
        if v.rank is not None:
            line += f" (rank {v.rank}, dims {v.source_dim} -> {v.target_dim})"
        if v.witness is not None:
            line += f" witness {v.witness}"
        out.write(line + "\n")
    uses_own_metric = args.gram is None or (args.gram == "identity" and doc.metric is not None
                                            and doc.gram() == Gram.identity(doc.dimension))
    if (uses_own_metric and classify(doc.bundle(model)).level == Level.SASAKIAN
            and not all(v.isomorphism for v in verdicts)):
        raise InternalInconsistency("a Sasakian bundle fails Hard Lefschetz with its own metric")


def _cmd_report(args, out):
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    report = build_report(load_document(args.file), jobs=args.jobs)
    out.write(render_report(report, args.format))


def _cmd_catalog(args, out):
    if args.action == "list":
        for e in builtin_catalog():
            out.write(f"{e.name}\t{e.expected}\t{e.document.description}\n")
        return
    entry = catalog_entry(args.name)
    if entry is None:
        raise InputError(f"unknown catalog model: {args.name}")
    out.write(dump_model(entry.document))


_COMMANDS = {
    "validate": _cmd_validate,
    "classify": _cmd_classify,
    "cohomology": _cmd_cohomology,
    "obstructions": _cmd_obstructions,
    "lefschetz": _cmd_lefschetz,
    "report": _cmd_report,
    "catalog": _cmd_catalog,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return 1
    except DocumentError as exc:
        for issue in exc.issues:
            err.write(f"error: {issue}\n")
        return 1
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except InternalInconsistency as exc:
        err.write(f"internal inconsistency: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
