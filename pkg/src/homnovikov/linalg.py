"""Exact linear algebra over :class:`~homnovikov.fields.Field`.

Determinants use fraction-free (Bareiss) elimination over Q after clearing
denominators; over GF(p) plain Gaussian elimination is already exact.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

from .errors import DimensionError
from .fields import Field


def _bareiss(rows: list[list[int]]) -> int:
    n = len(rows)
    a = [r[:] for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det(field: Field, m: np.ndarray):
    m = np.asarray(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionError(f"determinant of non-square {m.shape}")
    if n == 0:
        return field.one()
    if field.p is None:
        rows = [[Fraction(x) for x in row] for row in m]
        scales = [lcm(*(x.denominator for x in row)) for row in rows]
        ints = [[int(x * s) for x in row] for row, s in zip(rows, scales)]
        total = 1
        for s in scales:
            total *= s
        return Fraction(_bareiss(ints), total)
    p = field.p
    a = [[int(x) % p for x in row] for row in m]
    result = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            result = -result
        result = result * a[k][k] % p
        inv = pow(a[k][k], -1, p)
        for r in range(k + 1, n):
            f = a[r][k] * inv % p
            if f:
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[k])]
    return result % p


def rref(field: Field, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns; the form is unique."""
    m = np.asarray(m)
    rows, cols = m.shape
    a = [[field(x) for x in row] for row in m]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        a[r] = [_mul(field, x, inv) for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [_sub(field, x, _mul(field, f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    out = field.zeros((rows, cols))
    for i in range(rows):
        for j in range(cols):
            out[i, j] = a[i][j]
    return out, pivots


def _mul(field, x, y):
    return x * y if field.p is None else x * y % field.p


def _sub(field, x, y):
    return x - y if field.p is None else (x - y) % field.p


def rank(field: Field, m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(field, m)[1])


def nullspace(field: Field, m: np.ndarray) -> np.ndarray:
    """Basis of ``{x : m @ x = 0}`` as rows."""
    m = np.asarray(m)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return field.eye(cols)
    red, pivots = rref(field, m)
    free = [c for c in range(cols) if c not in pivots]
    basis = field.zeros((len(free), cols))
    for t, fcol in enumerate(free):
        basis[t, fcol] = field.one()
        for r, pcol in enumerate(pivots):
            basis[t, pcol] = field.neg(red[r, fcol])
    return basis


def inverse(field: Field, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    n = m.shape[0]
    aug = np.concatenate([m.astype(object), field.eye(n).astype(object)], axis=1)
    red, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return field.array(red[:, n:])


def solve(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution of ``a @ x = b`` or ``None`` when inconsistent."""
    a = np.asarray(a)
    rows, cols = a.shape
    aug = np.concatenate([a.astype(object), np.asarray(b, dtype=object).reshape(rows, 1)], axis=1)
    red, pivots = rref(field, aug)
    if cols in pivots:
        return None
    x = field.zeros(cols)
    for r, c in enumerate(pivots):
        x[c] = red[r, cols]
    return x


def matrix_power(field: Field, m: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        raise ValueError("negative power")
    out = field.eye(m.shape[0])
    base = m
    while k:
        if k & 1:
            out = field.matmul(out, base)
        base = field.matmul(base, base)
        k >>= 1
    return out


class Subspace:
    """Subspace of ``field**n`` held as a canonical RREF basis (rows)."""

    def __init__(self, field: Field, n: int, vectors=()):
        self.field = field
        self.n = n
        vecs = [list(v) for v in vectors]
        if vecs:
            red, pivots = rref(field, np.array(vecs, dtype=object))
            self.basis = field.array(red[: len(pivots)]).reshape(len(pivots), n)
        else:
            self.basis = field.zeros((0, n))
        self.basis.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, v) -> bool:
        if self.dim == 0:
            return all(x == 0 for x in v)
        stacked = np.concatenate([self.basis.astype(object), np.array([list(v)], dtype=object)])
        return rank(self.field, stacked) == self.dim

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.n == other.n
            and np.array_equal(self.basis, other.basis)
        )

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n}, field={self.field!r})"
