"""The ``lbz-1`` document format for structure tables.

A JSON object::

    {"format": "lbz-1", "convention": "right", "field": "GF(5)", "dim": 2,
     "basis": ["a", "b"],
     "products": [{"left": "b", "right": "b", "value": {"a": "1"}}, ...]}

Omitted products are zero.  Scalars are strings: ``"a/b"`` or ``"a"`` over Q,
``"k"`` with ``0 <= k < p`` over GF(p).
"""

from __future__ import annotations

import json
from pathlib import Path

from .algcore import CONVENTIONS, StructureTable
from .errors import LeibnizError, ParseError
from .exactfield import FieldSpec

FORMAT = "lbz-1"
_TOP_KEYS = {"format", "convention", "field", "dim", "basis", "products"}
_PRODUCT_KEYS = {"left", "right", "value"}


def from_document(doc: dict) -> StructureTable:
    if not isinstance(doc, dict):
        raise ParseError("document must be an object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ParseError(f"unknown fields: {', '.join(sorted(unknown))}")
    missing = _TOP_KEYS - set(doc)
    if missing:
        raise ParseError(f"missing fields: {', '.join(sorted(missing))}")
    if doc["format"] != FORMAT:
        raise ParseError(f"unsupported format {doc['format']!r}")
    if doc["convention"] not in CONVENTIONS:
        raise ParseError(f"convention must be 'right' or 'left', got {doc['convention']!r}")
    if not isinstance(doc["field"], str):
        raise ParseError("field must be a string")
    fld = FieldSpec.parse(doc["field"])
    n, basis = doc["dim"], doc["basis"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError(f"bad dim {n!r}")
    if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis):
        raise ParseError("basis must be a list of strings")
    if len(basis) != n or len(set(basis)) != n:
        raise ParseError("basis must list dim distinct labels")
    index = {lab: i for i, lab in enumerate(basis)}
    table = [[[fld.zero] * n for _ in range(n)] for _ in range(n)]
    seen = set()
    if not isinstance(doc["products"], list):
        raise ParseError("products must be a list")
    for prod in doc["products"]:
        if not isinstance(prod, dict):
            raise ParseError("each product must be an object")
        if set(prod) != _PRODUCT_KEYS:
            raise ParseError(f"product entries need exactly {sorted(_PRODUCT_KEYS)}")
        a, b, value = prod["left"], prod["right"], prod["value"]
        if a not in index or b not in index:
            raise ParseError(f"unknown basis label in product [{a}, {b}]")
        if (a, b) in seen:
            raise ParseError(f"duplicate product [{a}, {b}]")
        seen.add((a, b))
        if not isinstance(value, dict):
            raise ParseError("product value must be an object")
        vec = table[index[a]][index[b]]
        for lab, text in value.items():
            if lab not in index:
                raise ParseError(f"unknown basis label {lab!r} in value of [{a}, {b}]")
            vec[index[lab]] = fld.parse_scalar(text)
    try:
        return StructureTable(fld, n, tuple(basis), tuple(tuple(tuple(c) for c in r) for r in table),
                              doc["convention"])
    except LeibnizError as exc:
        raise ParseError(str(exc)) from None


def to_document(L: StructureTable) -> dict:
    """Canonical document: nonzero products in basis order, nonzero coordinates only."""
    labels = L.basis_labels
    products = []
    for i in range(L.dim):
        for j in range(L.dim):
            vec = L.table[i][j]
            if any(vec):
                products.append({
                    "left": labels[i],
                    "right": labels[j],
                    "value": {labels[k]: L.field.format(c) for k, c in enumerate(vec) if c},
                })
    return {
        "format": FORMAT,
        "convention": L.convention,
        "field": str(L.field),
        "dim": L.dim,
        "basis": list(labels),
        "products": products,
    }


def loads(text: str) -> StructureTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    return from_document(doc)


def dumps(L: StructureTable) -> str:
    return json.dumps(to_document(L), indent=2) + "\n"


def load(path: str | Path) -> StructureTable:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(exc)) from None
    return loads(text)


def dump(L: StructureTable, path: str | Path) -> None:
    Path(path).write_text(dumps(L))
