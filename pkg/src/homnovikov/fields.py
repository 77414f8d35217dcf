"""Exact scalar fields: the rationals and prime fields GF(p).

Scalars are plain Python values: :class:`fractions.Fraction` over Q and
``int`` residues in ``[0, p)`` over GF(p).  Arrays of scalars are numpy
arrays with ``dtype=object`` (Q) or ``int64`` (GF(p)); every arithmetic
helper here keeps them reduced.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import FieldMismatchError, ScalarError

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """Either Q (``p is None``) or GF(p) for a prime ``p < 2**16``."""

    def __init__(self, p: int | None = None):
        if p is not None:
            if not _is_prime(p):
                raise ScalarError(f"{p} is not prime")
            if p >= 2**16:
                raise ScalarError(f"prime {p} too large, need p < 2**16")
        self.p = p

    # identity -----------------------------------------------------------
    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def dtype(self):
        return object if self.p is None else np.int64

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"GF({self.p})"

    def require_same(self, other: "Field") -> None:
        if self != other:
            raise FieldMismatchError(f"cannot mix {self.name} and {other.name}")

    # scalars ------------------------------------------------------------
    def __call__(self, value) -> Fraction | int:
        """Coerce ``value`` (int, Fraction, or ``"p/q"`` text) into this field."""
        if isinstance(value, str):
            value = parse_rational(value)
        if isinstance(value, (bool, np.bool_)):
            value = int(value)
        if isinstance(value, np.integer):
            value = int(value)
        if not isinstance(value, (int, Fraction)):
            raise ScalarError(f"not an exact scalar: {value!r}")
        if self.p is None:
            return Fraction(value)
        value = Fraction(value)
        den = value.denominator % self.p
        if den == 0:
            raise ScalarError(f"denominator of {value} vanishes in {self.name}")
        return value.numerator * pow(den, -1, self.p) % self.p

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def neg(self, x):
        return -x if self.p is None else (-x) % self.p

    def format(self, x) -> str:
        if self.p is None:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x) % self.p)

    # arrays -------------------------------------------------------------
    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.p is None:
            return arr
        return np.mod(arr, self.p)

    def array(self, data) -> np.ndarray:
        if self.p is not None and isinstance(data, np.ndarray) and data.dtype.kind in "iu":
            return np.mod(data.astype(np.int64), self.p)
        arr = np.array(data, dtype=object)
        if arr.size:
            arr = np.vectorize(self, otypes=[object])(arr)
        if self.p is None:
            return arr.astype(object)
        return arr.astype(np.int64)

    def zeros(self, shape) -> np.ndarray:
        if self.p is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one()
        return out

    def einsum(self, subscripts: str, *operands) -> np.ndarray:
        """Reduced einsum; callers contract two operands at a time so int64 never overflows."""
        out = np.einsum(subscripts, *operands)
        if self.p is None:
            if np.ndim(out) == 0:
                return Fraction(out)
            return out
        return np.mod(out, self.p)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a @ b)

    def to_python(self, arr) -> list:
        """Nested lists of exact Python scalars (Fraction or int)."""
        arr = np.asarray(arr, dtype=object)
        if self.p is None:
            return np.vectorize(Fraction, otypes=[object])(arr).tolist() if arr.size else arr.tolist()
        return np.vectorize(int, otypes=[object])(arr).tolist() if arr.size else arr.tolist()


QQ = Field(None)


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL.match(text)
    if m is None:
        raise ScalarError(f"malformed rational {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ScalarError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def parse_field(text: str) -> Field:
    """Accepts ``Q``/``QQ``, ``GF(p)`` and ``GF:p``."""
    t = text.strip()
    if t in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"GF(?:\((\d+)\)|:(\d+))", t)
    if m is None:
        raise ScalarError(f"unknown field {text!r}")
    return GF(int(m.group(1) or m.group(2)))
