"""Built-in example models with their expected classification."""

from __future__ import annotations

from dataclasses import dataclass

from .document import ModelDocument, document_from_dict

__all__ = ["CatalogEntry", "builtin_catalog", "catalog_entry", "catalog_names"]


@dataclass(frozen=True)
class CatalogEntry:
    document: ModelDocument
    expected: str

    @property
    def name(self):
        return self.document.name


def _unit(dim, k):
    return ["1" if i == k else "0" for i in range(1, dim + 1)]


def _rotation(dim, pairs):
    """Row-major matrix with ``e_a -> e_b`` and ``e_b -> -e_a`` for each pair."""
    rows = [["0"] * dim for _ in range(dim)]
    for a, b in pairs:
        rows[b - 1][a - 1] = "1"
        rows[a - 1][b - 1] = "-1"
    return rows


def _heisenberg(n):
    dim = 2 * n + 1
    pairs = [(2 * k - 1, 2 * k) for k in range(1, n + 1)]
    return {
        "name": f"h{dim}",
        "description": f"Heisenberg algebra of dimension {dim} with its standard Sasakian structure",
        "dimension": dim,
        "brackets": [{"i": a, "j": b, "coeffs": {str(dim): "1"}} for a, b in pairs],
        "foliation_dim": 1,
        "structures": {
            "eta": _unit(dim, dim),
            "xi": _unit(dim, dim),
            "phi": _rotation(dim, pairs),
            "metric": "identity",
        },
    }


_ENTRIES = [
    (
        {
            "name": "abelian3",
            "description": "abelian R^3 with eta = e^3, which is not contact",
            "dimension": 3,
            "brackets": [],
            "foliation_dim": 1,
            "structures": {"eta": _unit(3, 3), "xi": _unit(3, 3)},
        },
        "NotContact",
    ),
    (_heisenberg(1), "Sasakian"),
    (_heisenberg(2), "Sasakian"),
    (_heisenberg(3), "Sasakian"),
    (
        {
            "name": "kt4",
            "description": "h3 x R with an integrable complex structure and a non-closed candidate Kähler form",
            "dimension": 4,
            "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "1"}}],
            "foliation_dim": 0,
            "structures": {"metric": "identity"},
            "J": _rotation(4, [(1, 2), (3, 4)]),
            "omega": {"1,2": "1", "3,4": "1"},
        },
        "Incomplete",
    ),
    (
        {
            "name": "x5",
            "description": "five-dimensional nilpotent algebra with a K-contact structure that is not normal",
            "dimension": 5,
            "brackets": [
                {"i": 1, "j": 2, "coeffs": {"4": "1"}},
                {"i": 1, "j": 3, "coeffs": {"5": "1"}},
                {"i": 2, "j": 4, "coeffs": {"5": "1"}},
            ],
            "foliation_dim": 1,
            "structures": {
                "eta": _unit(5, 5),
                "xi": _unit(5, 5),
                "phi": _rotation(5, [(1, 3), (2, 4)]),
                "metric": "identity",
            },
        },
        "KContact",
    ),
    (
        {
            "name": "sl2",
            "description": "sl(2) with a contact metric structure whose Reeb field is not Killing",
            "dimension": 3,
            "brackets": [
                {"i": 1, "j": 2, "coeffs": {"3": "1"}},
                {"i": 1, "j": 3, "coeffs": {"1": "-1"}},
                {"i": 2, "j": 3, "coeffs": {"2": "1"}},
            ],
            "foliation_dim": 1,
            "structures": {
                "eta": _unit(3, 3),
                "xi": _unit(3, 3),
                "phi": _rotation(3, [(1, 2)]),
                "metric": "identity",
            },
        },
        "ContactMetric",
    ),
]


def builtin_catalog() -> list[CatalogEntry]:
    return [CatalogEntry(document_from_dict(d), expected) for d, expected in _ENTRIES]


def catalog_names() -> list[str]:
    return [d["name"] for d, _ in _ENTRIES]


def catalog_entry(name: str) -> CatalogEntry | None:
    for d, expected in _ENTRIES:
        if d["name"] == name:
            return CatalogEntry(document_from_dict(d), expected)
    return None
