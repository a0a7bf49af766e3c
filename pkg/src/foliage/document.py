"""JSON model documents: parsing with full error collection, and canonical dumping.

A document looks like::

    {"name": "h3", "dimension": 3,
     "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "1"}}],
     "foliation_dim": 1,
     "structures": {"eta": ["0", "0", "1"], "phi": [[...], ...], "metric": "identity"},
     "J": [[...], ...], "omega": {"1,2": "1"}}

Rationals are JSON integers or strings ``"p/q"``. Matrices are row-major and
act on column vectors; ``"identity"`` is accepted for ``phi``, ``metric`` and ``J``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Any

from .contact import StructureBundle, is_contact, reeb_field
from .errors import InputError
from .exterior import Form, LieAlgebra
from .linalg import Gram, LinalgError, Matrix
from .scalars import format_scalar, parse_rational

__all__ = ["DocumentError", "ModelDocument", "ParseIssue", "parse_model", "parse_matrix", "dump_model", "document_from_dict"]

_TOP_KEYS = {"name", "dimension", "brackets", "foliation_dim", "structures", "J", "omega", "description"}
_STRUCTURE_KEYS = {"eta", "xi", "phi", "metric"}


@dataclass(frozen=True)
class ParseIssue:
    code: str
    path: str
    message: str

    def __str__(self):
        return f"{self.code} at {self.path}: {self.message}"


class DocumentError(InputError):
    """A model document failed validation; ``issues`` lists every problem found."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


@dataclass(frozen=True)
class ModelDocument:
    name: str
    dimension: int
    brackets: tuple = ()
    foliation_dim: int = 0
    eta: tuple | None = None
    xi: tuple | None = None
    phi: Matrix | None = None
    metric: Matrix | None = None
    J: Matrix | None = None
    omega: tuple | None = None
    description: str = field(default="", compare=False)

    def model(self) -> LieAlgebra:
        return LieAlgebra.from_brackets(self.dimension, {ij: dict(c) for ij, c in self.brackets}, name=self.name)

    def eta_form(self) -> Form | None:
        return None if self.eta is None else Form.from_vector(self.dimension, 1, self.eta)

    def gram(self) -> Gram | None:
        return None if self.metric is None else Gram(self.metric)

    def bundle(self, model: LieAlgebra | None = None) -> StructureBundle:
        return StructureBundle(model or self.model(), self.eta_form(), self.xi, self.phi, self.gram())

    def leaf_direction(self, model: LieAlgebra | None = None) -> tuple | None:
        """The vector spanning the foliation: ``xi`` if given, else the Reeb field of a contact ``eta``."""
        if self.foliation_dim == 0:
            return None
        if self.xi is not None:
            return self.xi
        model = model or self.model()
        eta = self.eta_form()
        if eta is not None and self.dimension % 2 and is_contact(model, eta):
            return reeb_field(model, eta)
        return None

    def complex_structure(self) -> Matrix | None:
        if self.J is not None:
            return self.J
        if self.foliation_dim == 1:
            return self.phi
        return None

    def omega_form(self) -> Form | None:
        if self.omega is None:
            return None
        return Form(self.dimension, 2, {(1 << (i - 1)) | (1 << (j - 1)): c for (i, j), c in self.omega})

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"name": self.name}
        if self.description:
            out["description"] = self.description
        out["dimension"] = self.dimension
        out["brackets"] = [
            {"i": i, "j": j, "coeffs": {str(k): format_scalar(c) for k, c in coeffs}}
            for (i, j), coeffs in self.brackets
        ]
        out["foliation_dim"] = self.foliation_dim
        structures = {}
        if self.eta is not None:
            structures["eta"] = [format_scalar(x) for x in self.eta]
        if self.xi is not None:
            structures["xi"] = [format_scalar(x) for x in self.xi]
        if self.phi is not None:
            structures["phi"] = _dump_matrix(self.phi)
        if self.metric is not None:
            structures["metric"] = _dump_matrix(self.metric)
        if structures:
            out["structures"] = structures
        if self.J is not None:
            out["J"] = _dump_matrix(self.J)
        if self.omega is not None:
            out["omega"] = {f"{i},{j}": format_scalar(c) for (i, j), c in self.omega}
        return out


def _dump_matrix(M: Matrix):
    if M == Matrix.identity(M.nrows):
        return "identity"
    return [[format_scalar(x) for x in row] for row in M.rows]


def dump_model(doc: ModelDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2, ensure_ascii=False) + "\n"


class _Collector:
    def __init__(self):
        self.issues = []

    def add(self, code, path, message):
        self.issues.append(ParseIssue(code, path, message))

    def rational(self, value, path):
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            self.add("MalformedRational", path, f"expected an integer or 'p/q' string, got {value!r}")
            return None
        if isinstance(value, int):
            return Fraction(value)
        try:
            return parse_rational(value)
        except (ValueError, ZeroDivisionError):
            self.add("MalformedRational", path, f"cannot parse {value!r} as a rational")
            return None

    def integer(self, value, path):
        if isinstance(value, bool) or not isinstance(value, int):
            self.add("InvalidType", path, f"expected an integer, got {value!r}")
            return None
        return value

    def index(self, value, path, dim):
        if isinstance(value, str) and value.strip().lstrip("+").isdigit():
            value = int(value)
        k = self.integer(value, path)
        if k is None:
            return None
        if dim is not None and not 1 <= k <= dim:
            self.add("IndexOutOfRange", path, f"index {k} outside 1..{dim}")
            return None
        return k

    def vector(self, value, path, dim):
        if not isinstance(value, list):
            self.add("InvalidType", path, "expected a list")
            return None
        if dim is not None and len(value) != dim:
            self.add("DimensionMismatch", path, f"expected {dim} entries, got {len(value)}")
        entries = [self.rational(x, f"{path}[{n}]") for n, x in enumerate(value)]
        if any(e is None for e in entries) or (dim is not None and len(entries) != dim):
            return None
        return tuple(entries)

    def matrix(self, value, path, dim):
        if value == "identity":
            return Matrix.identity(dim) if dim is not None else None
        if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
            self.add("InvalidType", path, "expected 'identity' or a list of rows")
            return None
        ok = True
        if dim is not None and (len(value) != dim or any(len(r) != dim for r in value)):
            self.add("DimensionMismatch", path, f"expected a {dim}x{dim} matrix")
            ok = False
        rows = [[self.rational(x, f"{path}[{a}][{b}]") for b, x in enumerate(r)] for a, r in enumerate(value)]
        if not ok or dim is None or any(x is None for r in rows for x in r):
            return None
        return Matrix(rows, dim)


def parse_matrix(data: Any, dim: int) -> Matrix:
    """A ``dim x dim`` matrix value ('identity' or rows of rationals) outside a document."""
    col = _Collector()
    M = col.matrix(data, "$", dim)
    if col.issues or M is None:
        raise DocumentError(col.issues)
    return M


def _reject_floats(text):
    return Decimal(text)


def parse_model(text: str) -> ModelDocument:
    """Parse and validate a JSON model document, reporting every problem at once."""
    try:
        data = json.loads(text, parse_float=_reject_floats)
    except json.JSONDecodeError as exc:
        raise DocumentError([ParseIssue("MalformedJSON", "$", str(exc))]) from None
    return document_from_dict(data)


def document_from_dict(data: Any) -> ModelDocument:
    col = _Collector()
    if not isinstance(data, dict):
        raise DocumentError([ParseIssue("InvalidType", "$", "document must be a JSON object")])
    for key in sorted(set(data) - _TOP_KEYS):
        col.add("UnknownField", f"$.{key}", "unrecognised field")

    name = data.get("name")
    if not isinstance(name, str) or not name:
        col.add("MissingField" if name is None else "InvalidType", "$.name", "a non-empty string name is required")
        name = ""
    description = data.get("description", "")
    if not isinstance(description, str):
        col.add("InvalidType", "$.description", "expected a string")
        description = ""

    dim = None
    if "dimension" not in data:
        col.add("MissingField", "$.dimension", "dimension is required")
    else:
        dim = col.integer(data["dimension"], "$.dimension")
        if dim is not None and dim < 1:
            col.add("InvalidValue", "$.dimension", "dimension must be positive")
            dim = None

    brackets = {}
    raw = data.get("brackets", [])
    if not isinstance(raw, list):
        col.add("InvalidType", "$.brackets", "expected a list")
        raw = []
    for n, entry in enumerate(raw):
        path = f"$.brackets[{n}]"
        if not isinstance(entry, dict):
            col.add("InvalidType", path, "expected an object with i, j, coeffs")
            continue
        for key in sorted(set(entry) - {"i", "j", "coeffs"}):
            col.add("UnknownField", f"{path}.{key}", "unrecognised field")
        missing = [k for k in ("i", "j", "coeffs") if k not in entry]
        for k in missing:
            col.add("MissingField", f"{path}.{k}", "required")
        if missing:
            continue
        i = col.index(entry["i"], f"{path}.i", dim)
        j = col.index(entry["j"], f"{path}.j", dim)
        if i is not None and j is not None and i >= j:
            col.add("IndexOrder", path, f"need i < j, got i={i}, j={j}")
            i = None
        coeffs = entry["coeffs"]
        if not isinstance(coeffs, dict):
            col.add("InvalidType", f"{path}.coeffs", "expected an object index -> rational")
            continue
        parsed = {}
        for key, val in coeffs.items():
            k = col.index(key, f"{path}.coeffs.{key}", dim)
            c = col.rational(val, f"{path}.coeffs.{key}")
            if k is not None and c is not None and c:
                parsed[k] = c
        if i is None or j is None:
            continue
        if (i, j) in brackets:
            col.add("DuplicateBracket", path, f"bracket [e{i}, e{j}] given twice")
            continue
        brackets[(i, j)] = parsed

    structures = data.get("structures", {})
    if not isinstance(structures, dict):
        col.add("InvalidType", "$.structures", "expected an object")
        structures = {}
    for key in sorted(set(structures) - _STRUCTURE_KEYS):
        col.add("UnknownField", f"$.structures.{key}", "unrecognised field")
    eta = col.vector(structures["eta"], "$.structures.eta", dim) if "eta" in structures else None
    xi = col.vector(structures["xi"], "$.structures.xi", dim) if "xi" in structures else None
    phi = col.matrix(structures["phi"], "$.structures.phi", dim) if "phi" in structures else None
    metric = col.matrix(structures["metric"], "$.structures.metric", dim) if "metric" in structures else None
    if metric is not None:
        try:
            Gram(metric)
        except LinalgError as exc:
            col.add("InvalidValue", "$.structures.metric", str(exc))
    J = col.matrix(data["J"], "$.J", dim) if "J" in data else None
    if xi is not None and not any(xi):
        col.add("InvalidValue", "$.structures.xi", "xi must be nonzero")

    default_fdim = 1 if ("eta" in structures or "xi" in structures) else 0
    fdim = data.get("foliation_dim", default_fdim)
    if fdim not in (0, 1) or isinstance(fdim, bool):
        col.add("InvalidValue", "$.foliation_dim", "foliation_dim must be 0 or 1")
        fdim = default_fdim
    if fdim == 0 and "xi" in structures:
        col.add("InvalidValue", "$.foliation_dim", "xi given but foliation_dim is 0")

    omega = None
    if "omega" in data:
        raw_w = data["omega"]
        if not isinstance(raw_w, dict):
            col.add("InvalidType", "$.omega", "expected an object 'i,j' -> rational")
        else:
            terms = {}
            for key, val in raw_w.items():
                path = f"$.omega.{key}"
                parts = key.split(",") if isinstance(key, str) else []
                if len(parts) != 2:
                    col.add("InvalidValue", path, "keys must look like 'i,j'")
                    continue
                i = col.index(parts[0].strip(), path, dim)
                j = col.index(parts[1].strip(), path, dim)
                c = col.rational(val, path)
                if i is None or j is None or c is None:
                    continue
                if i >= j:
                    col.add("IndexOrder", path, f"need i < j, got i={i}, j={j}")
                    continue
                if (i, j) in terms:
                    col.add("DuplicateBracket", path, "component given twice")
                    continue
                if c:
                    terms[(i, j)] = c
            omega = tuple(sorted(terms.items()))

    if col.issues:
        raise DocumentError(col.issues)
    return ModelDocument(
        name=name,
        dimension=dim,
        brackets=tuple(sorted((ij, tuple(sorted(c.items()))) for ij, c in brackets.items() if c)),
        foliation_dim=fdim,
        eta=eta,
        xi=xi,
        phi=phi,
        metric=metric,
        J=J,
        omega=omega,
        description=description,
    )
