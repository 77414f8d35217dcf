"""JSON algebra files.

Scalars are always strings (``"3"``, ``"-1/2"``) so that round trips are
exact.  Map and form entries are ``[i, j, value]``; for maps this means
``map(e_j)`` has coefficient ``value`` on ``e_i``.  Example::

    {"field": "Q", "dim": 2,
     "products": {"dot": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]]},
     "maps": {"alpha": [[0, 0, "1"]]},
     "forms": {"B": [[0, 1, "1"], [1, 0, "1"]]}}
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .core import MAX_DIM, Algebra, StructureBundle, make_algebra, make_form, make_operator
from .errors import HomNovikovError
from .fields import Field, parse_field


class SpecFileError(HomNovikovError, ValueError):
    """Malformed spec file."""


@dataclass
class SpecDocument:
    field: Field
    dim: int
    basis: list | None = None
    products: dict = dc_field(default_factory=dict)
    maps: dict = dc_field(default_factory=dict)
    forms: dict = dc_field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, SpecDocument):
            return NotImplemented
        return to_dict(self) == to_dict(other)


def _scalar(value, where: str) -> str:
    if not isinstance(value, str):
        raise SpecFileError(f"{where}: scalars must be strings like \"1/2\", got {value!r}")
    return value


def _index(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecFileError(f"{where}: index must be an integer, got {value!r}")
    return value


def from_dict(data: dict, field: Field | None = None) -> SpecDocument:
    if not isinstance(data, dict):
        raise SpecFileError("spec file must be a JSON object")
    unknown = set(data) - {"field", "dim", "basis", "products", "maps", "forms"}
    if unknown:
        raise SpecFileError(f"unknown keys {sorted(unknown)}")
    if field is None:
        field = parse_field(data.get("field", "Q"))
    dim = data.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
        raise SpecFileError("dim must be a non-negative integer")
    if dim > MAX_DIM:
        raise SpecFileError(f"dim {dim} exceeds cap {MAX_DIM}")
    basis = data.get("basis")
    if basis is not None and (not isinstance(basis, list) or len(basis) != dim):
        raise SpecFileError("basis must list one name per dimension")
    doc = SpecDocument(field, dim, basis)
    for name, entries in (data.get("products") or {}).items():
        rows = []
        for e in entries:
            if not isinstance(e, list) or len(e) != 4:
                raise SpecFileError(f"product {name!r}: entries are [i, j, k, \"p/q\"]")
            where = f"product {name!r}"
            rows.append((*(_index(x, where) for x in e[:3]), _scalar(e[3], where)))
        doc.products[name] = make_algebra(dim, rows, field, name)
    for key, maker, cls in (("maps", make_operator, "map"), ("forms", make_form, "form")):
        target = doc.maps if key == "maps" else doc.forms
        for name, entries in (data.get(key) or {}).items():
            rows = []
            for e in entries:
                if not isinstance(e, list) or len(e) != 3:
                    raise SpecFileError(f"{cls} {name!r}: entries are [i, j, \"p/q\"]")
                where = f"{cls} {name!r}"
                rows.append((_index(e[0], where), _index(e[1], where), _scalar(e[2], where)))
            target[name] = maker(dim, rows, field, name)
    return doc


def _nonzero(field: Field, arr: np.ndarray):
    for idx in zip(*np.nonzero(arr != 0)):
        idx = tuple(int(i) for i in idx)
        yield [*idx, field.format(arr[idx])]


def to_dict(doc: SpecDocument) -> dict:
    out = {"field": doc.field.name, "dim": doc.dim}
    if doc.basis is not None:
        out["basis"] = list(doc.basis)
    out["products"] = {k: list(_nonzero(doc.field, a.c)) for k, a in sorted(doc.products.items())}
    out["maps"] = {k: list(_nonzero(doc.field, m.m)) for k, m in sorted(doc.maps.items())}
    out["forms"] = {k: list(_nonzero(doc.field, b.b)) for k, b in sorted(doc.forms.items())}
    return out


def dumps(doc: SpecDocument) -> str:
    return json.dumps(to_dict(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_bytes(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise SpecFileError(f"cannot read {path}: {exc.strerror}") from None


def loads(raw: bytes | str, field: Field | None = None) -> SpecDocument:
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SpecFileError(f"invalid JSON: {exc}") from None
    return from_dict(data, field)


def load(path, field: Field | None = None) -> SpecDocument:
    return loads(read_bytes(path), field)


def digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


_ROLE_DEFAULTS = {
    "dot": ("dot",),
    "star": ("star",),
    "alpha": ("alpha",),
    "partial": ("del", "partial"),
    "form": ("B", "form"),
}


def bind(doc: SpecDocument, bindings: dict | None = None, need: set | frozenset = frozenset()) -> StructureBundle:
    """Assemble a bundle from named components.

    ``bindings`` maps roles (``dot``, ``star``, ``alpha``, ``partial``,
    ``form``) to component names.  Unbound roles fall back to components
    with the role's own name; a lone product becomes ``star``, and a lone
    map or form fills a role listed in ``need``.
    """
    bindings = {k: v for k, v in (bindings or {}).items() if v is not None}
    pools = {"dot": doc.products, "star": doc.products, "alpha": doc.maps, "partial": doc.maps, "form": doc.forms}
    got = {}
    for role, pool in pools.items():
        if role in bindings:
            name = bindings[role]
            if name not in pool:
                raise SpecFileError(f"no component named {name!r} for role {role}")
            got[role] = pool[name]
            continue
        for name in _ROLE_DEFAULTS[role]:
            if name in pool:
                got[role] = pool[name]
                break
    if "dot" not in got and "star" not in got:
        if len(doc.products) == 1:
            got["star"] = next(iter(doc.products.values()))
        elif not doc.products and doc.dim == 0:
            got["star"] = make_algebra(0, [], doc.field, "empty")
        else:
            raise SpecFileError("cannot tell which product to use; pass --dot/--star")
    for role, pool in (("alpha", doc.maps), ("partial", doc.maps), ("form", doc.forms)):
        if role in need and role not in got and len(pool) == 1:
            got[role] = next(iter(pool.values()))
    return StructureBundle(basis=tuple(doc.basis) if doc.basis else None, **got)


def from_bundle(bundle: StructureBundle, extra_maps: dict | None = None) -> SpecDocument:
    """Spec document holding a bundle's components under their role names."""
    doc = SpecDocument(bundle.field, bundle.dim, list(bundle.basis) if bundle.basis else None)
    for role in ("dot", "star"):
        if getattr(bundle, role) is not None:
            doc.products[role] = getattr(bundle, role)
    if bundle.alpha is not None:
        doc.maps["alpha"] = bundle.alpha
    if bundle.partial is not None:
        doc.maps["del"] = bundle.partial
    doc.maps.update(extra_maps or {})
    if bundle.form is not None:
        doc.forms["B"] = bundle.form
    return doc


def from_algebra(A: Algebra, role: str = "star") -> SpecDocument:
    return SpecDocument(A.field, A.dim, products={role: A})


__all__ = [
    "SpecDocument", "SpecFileError", "bind", "digest", "dumps", "from_algebra", "from_bundle", "from_dict",
    "load", "loads", "read_bytes", "to_dict",
]
