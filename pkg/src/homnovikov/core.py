"""Structure-constant algebras, linear operators and bilinear forms.

An :class:`Algebra` of dimension ``n`` stores a dense tensor ``c`` with
``e_i e_j = sum_k c[i, j, k] e_k``.  Operators use the column convention
``op(e_j) = sum_i m[i, j] e_i``.  All values are immutable.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, NamedTuple

import numpy as np

from . import linalg
from .errors import DimensionError, FieldMismatchError, MissingRoleError
from .fields import QQ, Field

MAX_DIM = 64


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Algebra:
    field: Field
    c: np.ndarray
    label: str = ""

    def __post_init__(self):
        c = np.asarray(self.c)
        if c.ndim != 3 or len(set(c.shape)) > 1:
            raise DimensionError(f"structure tensor must be n x n x n, got {c.shape}")
        if c.shape[0] > MAX_DIM:
            raise DimensionError(f"dimension {c.shape[0]} exceeds cap {MAX_DIM}")
        object.__setattr__(self, "c", _frozen(self.field.array(c).reshape(c.shape)))

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def __eq__(self, other):
        return (
            isinstance(other, Algebra)
            and self.field == other.field
            and self.c.shape == other.c.shape
            and bool(np.all(self.c == other.c))
        )

    __hash__ = None

    def __repr__(self):
        return f"Algebra(dim={self.dim}, field={self.field!r}, label={self.label!r})"

    def opposite_commutator(self) -> np.ndarray:
        return self.field.reduce(self.c - self.c.transpose(1, 0, 2))

    def relabel(self, label: str) -> "Algebra":
        return replace(self, label=label)


@dataclass(frozen=True, eq=False)
class LinearOperator:
    field: Field
    m: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator matrix must be square, got {m.shape}")
        object.__setattr__(self, "m", _frozen(self.field.array(m).reshape(m.shape)))

    @property
    def dim(self) -> int:
        return self.m.shape[0]

    @classmethod
    def identity(cls, field: Field, n: int, label: str = "id") -> "LinearOperator":
        return cls(field, field.eye(n), label)

    @classmethod
    def zero(cls, field: Field, n: int, label: str = "0") -> "LinearOperator":
        return cls(field, field.zeros((n, n)), label)

    @classmethod
    def diagonal(cls, field: Field, entries, label: str = "") -> "LinearOperator":
        entries = list(entries)
        m = field.zeros((len(entries), len(entries)))
        for i, v in enumerate(entries):
            m[i, i] = field(v)
        return cls(field, m, label)

    def apply(self, x) -> np.ndarray:
        x = self.field.array(x) if not isinstance(x, np.ndarray) else x
        return self.field.matmul(self.m, x)

    def compose(self, other: "LinearOperator") -> "LinearOperator":
        """``self o other``."""
        self.field.require_same(other.field)
        return LinearOperator(self.field, self.field.matmul(self.m, other.m), f"{self.label}*{other.label}")

    def power(self, k: int) -> "LinearOperator":
        return LinearOperator(self.field, linalg.matrix_power(self.field, self.m, k), f"{self.label}^{k}")

    def det(self):
        return linalg.det(self.field, self.m)

    def inverse(self) -> "LinearOperator":
        return LinearOperator(self.field, linalg.inverse(self.field, self.m), f"{self.label}^-1")

    def is_identity(self) -> bool:
        return bool(np.all(self.m == self.field.eye(self.dim)))

    def __eq__(self, other):
        return (
            isinstance(other, LinearOperator)
            and self.field == other.field
            and self.m.shape == other.m.shape
            and bool(np.all(self.m == other.m))
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class BilinearForm:
    field: Field
    b: np.ndarray
    label: str = ""

    def __post_init__(self):
        b = np.asarray(self.b)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise DimensionError(f"form matrix must be square, got {b.shape}")
        object.__setattr__(self, "b", _frozen(self.field.array(b).reshape(b.shape)))

    @property
    def dim(self) -> int:
        return self.b.shape[0]

    def __call__(self, x, y):
        f = self.field
        if self.dim == 0:
            return f.zero()
        return f.einsum("i,i->", f.array(list(x)), f.matmul(self.b, f.array(list(y))))

    def __eq__(self, other):
        return (
            isinstance(other, BilinearForm)
            and self.field == other.field
            and self.b.shape == other.b.shape
            and bool(np.all(self.b == other.b))
        )

    __hash__ = None


ROLE_NAMES = ("dot", "star", "alpha", "partial", "form")


@dataclass(frozen=True)
class StructureBundle:
    """Algebra data a validator or construction reads.

    ``dot`` is the commutative-associative product, ``star`` the Novikov
    one; single-product checks read ``star`` when present, else ``dot``.
    """

    dot: Algebra | None = None
    star: Algebra | None = None
    alpha: LinearOperator | None = None
    partial: LinearOperator | None = None
    form: BilinearForm | None = None
    lam: object = None
    basis: tuple[str, ...] | None = None

    def __post_init__(self):
        parts = [x for x in (self.dot, self.star, self.alpha, self.partial, self.form) if x is not None]
        if self.dot is None and self.star is None:
            raise MissingRoleError("a bundle needs at least one product")
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise DimensionError(f"bundle components disagree on dimension: {sorted(dims)}")
        fields = {p.field for p in parts}
        if len(fields) != 1:
            raise FieldMismatchError("bundle components live over different fields")
        if self.basis is not None and len(self.basis) != parts[0].dim:
            raise DimensionError("basis names do not match dimension")

    @property
    def dim(self) -> int:
        return self.product.dim

    @property
    def field(self) -> Field:
        return self.product.field

    @property
    def product(self) -> Algebra:
        return self.star if self.star is not None else self.dot

    def get(self, role: str):
        if role == "product":
            return self.product
        value = getattr(self, role)
        if value is None:
            raise MissingRoleError(f"bundle has no {role!r}")
        return value

    def with_(self, **changes) -> "StructureBundle":
        return replace(self, **changes)

    def alpha_or_identity(self) -> LinearOperator:
        return self.alpha if self.alpha is not None else LinearOperator.identity(self.field, self.dim)


def make_algebra(dim: int, entries: Iterable, field: Field = QQ, label: str = "") -> Algebra:
    """Dense algebra from sparse ``(i, j, k, value)`` entries; unlisted entries are zero."""
    if dim < 0:
        raise DimensionError("negative dimension")
    if dim > MAX_DIM:
        raise DimensionError(f"dimension {dim} exceeds cap {MAX_DIM}")
    c = field.zeros((dim, dim, dim))
    seen = set()
    for i, j, k, value in entries:
        if not all(0 <= t < dim for t in (i, j, k)):
            raise DimensionError(f"index ({i}, {j}, {k}) out of range for dim {dim}")
        if (i, j, k) in seen:
            raise ValueError(f"duplicate entry ({i}, {j}, {k})")
        seen.add((i, j, k))
        c[i, j, k] = field(value)
    return Algebra(field, c, label)


def make_operator(dim: int, entries: Iterable, field: Field = QQ, label: str = "") -> LinearOperator:
    """Operator from ``(i, j, value)`` entries meaning ``op(e_j)`` has coefficient ``value`` on ``e_i``."""
    m = field.zeros((dim, dim))
    seen = set()
    for i, j, value in entries:
        if not (0 <= i < dim and 0 <= j < dim):
            raise DimensionError(f"index ({i}, {j}) out of range for dim {dim}")
        if (i, j) in seen:
            raise ValueError(f"duplicate entry ({i}, {j})")
        seen.add((i, j))
        m[i, j] = field(value)
    return LinearOperator(field, m, label)


def make_form(dim: int, entries: Iterable, field: Field = QQ, label: str = "") -> BilinearForm:
    b = field.zeros((dim, dim))
    seen = set()
    for i, j, value in entries:
        if not (0 <= i < dim and 0 <= j < dim):
            raise DimensionError(f"index ({i}, {j}) out of range for dim {dim}")
        if (i, j) in seen:
            raise ValueError(f"duplicate entry ({i}, {j})")
        seen.add((i, j))
        b[i, j] = field(value)
    return BilinearForm(field, b, label)


def zero_algebra(field: Field, n: int, label: str = "zero") -> Algebra:
    return Algebra(field, field.zeros((n, n, n)), label)


def twist_tensor(field: Field, c: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Structure tensor of ``op o mu``: apply ``m`` to every product."""
    return field.einsum("ijm,lm->ijl", c, m)


def _vec(A, x) -> np.ndarray:
    x = np.asarray(x) if isinstance(x, np.ndarray) else A.field.array(list(x))
    if x.shape != (A.dim,):
        raise DimensionError(f"vector of shape {x.shape} used with dim {A.dim}")
    return x


def multiply(A: Algebra, x, y) -> np.ndarray:
    x, y = _vec(A, x), _vec(A, y)
    f = A.field
    return f.einsum("i,ik->k", x, f.einsum("j,ijk->ik", y, A.c))


def associator(A: Algebra, x, y, z) -> np.ndarray:
    """``(xy)z - x(yz)``."""
    f = A.field
    return f.reduce(multiply(A, multiply(A, x, y), z) - multiply(A, x, multiply(A, y, z)))


class MapProperties(NamedTuple):
    endomorphism: bool
    automorphism: bool
    involution: bool
    derivation: bool


def map_properties(A: Algebra, op: LinearOperator) -> MapProperties:
    from .identities import Identity, check_identity

    if A.dim != op.dim:
        raise DimensionError(f"operator dim {op.dim} vs algebra dim {A.dim}")
    A.field.require_same(op.field)
    endo = check_identity(StructureBundle(star=A, alpha=op), Identity.MORPHISM).holds
    auto = endo and op.det() != 0
    invol = op.compose(op).is_identity()
    der = check_identity(StructureBundle(star=A, partial=op), Identity.DERIVATION).holds
    return MapProperties(endo, auto, invol, der)
