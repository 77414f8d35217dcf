"""Two infinite-dimensional example families as finitely supported graded vectors.

``laurent``
    Laurent polynomials in ``t`` plus a second copy ``theta * t^n`` with
    ``theta**2 = 0``.  Basis indices are ``(n, parity)``.  Products: ``dot``
    (ordinary), ``star1`` (``x del(y)``), ``bullet`` (``alpha(xy)``) and
    ``star2`` (``alpha(x del(y))``); maps ``del`` (drop the theta part) and
    ``alpha`` (``t^n -> (t + c)^n``, theta part to zero).  Anything that
    applies ``alpha`` to a negative power of ``t`` raises
    :class:`~homnovikov.errors.RestrictionError`.

``indexed``
    Basis ``x_a`` for ``a`` in Z, parameters ``q``, ``s`` (with ``f(a) = s a``)
    and ``beta``.  Products ``dot56`` (alias ``dot``: ``x_{a+b+q}``),
    ``star`` (``f(b+q) x_{a+b+q}``), ``bullet`` (``beta^(a+b+2q) x_{a+b+q}``)
    and ``hstar`` (``beta^(a+b+2q) f(b+q) x_{a+b+q}``); maps ``del``
    (``f(a+q) x_a``), ``del2`` (``x_{-q} * x_a - x_a * x_{-q}``, evaluated
    literally) and ``alpha`` (``beta^(a+q) x_a``).

Everything is exact (:class:`fractions.Fraction`) and no product output is
ever truncated except by :func:`embed_window` in quotient mode.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import NamedTuple

from .core import Algebra, LinearOperator, StructureBundle
from .errors import NotClosedError, RestrictionError
from .fields import QQ
from .identities import CATALOG, KINDS, NONDEGENERATE, Identity, Report, ReportEntry, Verdict, Witness, formula


class GradedIndex(NamedTuple):
    grade: int
    parity: int = 0

    def name(self, variant: str = "laurent") -> str:
        if variant == "indexed":
            return f"x_{self.grade}"
        n = self.grade
        mono = "1" if n == 0 else "t" if n == 1 else f"t^{n}"
        if self.parity == 0:
            return mono
        return "theta" if n == 0 else f"theta*{mono}"


class SparseElement:
    """Finite linear combination of :class:`GradedIndex` basis vectors."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for k, v in (terms or {}).items():
            v = Fraction(v)
            if v:
                clean[GradedIndex(*k)] = v
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def basis(cls, grade: int, parity: int = 0, coeff=1) -> "SparseElement":
        return cls({GradedIndex(grade, parity): coeff})

    @classmethod
    def zero(cls) -> "SparseElement":
        return cls()

    def _combine(self, other, sign):
        if not isinstance(other, SparseElement):
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + sign * v
        return SparseElement(out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return SparseElement({k: -v for k, v in self.terms.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, SparseElement):
            return NotImplemented
        scalar = Fraction(scalar)
        return SparseElement({k: v * scalar for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, SparseElement) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def items(self):
        return self.terms.items()

    @property
    def support(self) -> list[GradedIndex]:
        return list(self.terms)

    def format(self, variant: str = "laurent") -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, v in self.terms.items():
            coeff = "" if v == 1 else "-" if v == -1 else f"{v}*"
            parts.append(f"{coeff}{k.name(variant)}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"SparseElement({self.format()})"


def _frac(x) -> Fraction:
    if isinstance(x, str):
        from .fields import parse_rational

        return parse_rational(x)
    return Fraction(x)


@dataclass(frozen=True)
class FamilySpec:
    variant: str
    c: Fraction = Fraction(0)
    q: int = 0
    s: Fraction = Fraction(1)
    beta: Fraction = Fraction(1)

    def __post_init__(self):
        if self.variant not in ("laurent", "indexed"):
            raise ValueError(f"unknown family {self.variant!r}")
        object.__setattr__(self, "c", _frac(self.c))
        object.__setattr__(self, "s", _frac(self.s))
        object.__setattr__(self, "beta", _frac(self.beta))
        object.__setattr__(self, "q", int(self.q))
        if self.s == 0:
            raise ValueError("s must be nonzero")
        if self.beta == 0:
            raise ValueError("beta must be nonzero")

    def f(self, a: int) -> Fraction:
        return self.s * a

    @property
    def products(self) -> tuple[str, ...]:
        if self.variant == "laurent":
            return ("dot", "star1", "bullet", "star2")
        return ("dot56", "dot", "star", "bullet", "hstar")

    @property
    def maps(self) -> tuple[str, ...]:
        return ("del", "alpha") if self.variant == "laurent" else ("del", "del2", "alpha")


# ---------------------------------------------------------------------------
# basis rules


@lru_cache(maxsize=4096)
def _shifted_power(c: Fraction, n: int) -> SparseElement:
    """``(t + c)^n`` for ``n >= 0``."""
    return SparseElement({(k, 0): comb(n, k) * c ** (n - k) for k in range(n + 1)})


def _laurent_alpha_basis(spec: FamilySpec, g: GradedIndex) -> SparseElement:
    if g.parity == 1:
        return SparseElement()
    if g.grade < 0:
        raise RestrictionError(f"alpha(t^{g.grade}) is not a Laurent polynomial")
    return _shifted_power(spec.c, g.grade)


def _restrict(x: GradedIndex, y: GradedIndex, name: str) -> None:
    for g in (x, y):
        if g.parity == 0 and g.grade < 0:
            raise RestrictionError(f"{name} needs non-negative t-grades, got t^{g.grade}")


def _laurent_product(spec: FamilySpec, name: str, x: GradedIndex, y: GradedIndex) -> SparseElement:
    if name == "dot":
        if x.parity + y.parity > 1:
            return SparseElement()
        return SparseElement.basis(x.grade + y.grade, x.parity + y.parity)
    if name == "star1":
        if y.parity == 1:
            return SparseElement()
        return SparseElement.basis(x.grade + y.grade, x.parity)
    if name == "bullet":
        _restrict(x, y, name)
        if x.parity or y.parity:
            return SparseElement()
        return _shifted_power(spec.c, x.grade + y.grade)
    if name == "star2":
        _restrict(x, y, name)
        if x.parity or y.parity:
            return SparseElement()
        return _shifted_power(spec.c, x.grade + y.grade)
    raise KeyError(f"laurent family has no product {name!r}")


def _indexed_product(spec: FamilySpec, name: str, x: GradedIndex, y: GradedIndex) -> SparseElement:
    if x.parity or y.parity:
        raise RestrictionError("indexed family has no odd part")
    a, b, q = x.grade, y.grade, spec.q
    out = a + b + q
    if name in ("dot56", "dot"):
        return SparseElement.basis(out)
    if name == "star":
        return SparseElement.basis(out, 0, spec.f(b + q))
    if name == "bullet":
        return SparseElement.basis(out, 0, spec.beta ** (a + b + 2 * q))
    if name == "hstar":
        return SparseElement.basis(out, 0, spec.beta ** (a + b + 2 * q) * spec.f(b + q))
    raise KeyError(f"indexed family has no product {name!r}")


def _basis_map(spec: FamilySpec, name: str, g: GradedIndex) -> SparseElement:
    if spec.variant == "laurent":
        if name == "del":
            return SparseElement() if g.parity else SparseElement.basis(g.grade)
        if name == "alpha":
            return _laurent_alpha_basis(spec, g)
        raise KeyError(f"laurent family has no map {name!r}")
    if g.parity:
        raise RestrictionError("indexed family has no odd part")
    a, q = g.grade, spec.q
    if name == "del":
        return SparseElement.basis(a, 0, spec.f(a + q))
    if name == "del2":
        unit = SparseElement.basis(-q)
        e = SparseElement.basis(a)
        return family_product(spec, "star", unit, e) - family_product(spec, "star", e, unit)
    if name == "alpha":
        return SparseElement.basis(a, 0, spec.beta ** (a + q))
    raise KeyError(f"indexed family has no map {name!r}")


def _basis_product(spec: FamilySpec, name: str, x: GradedIndex, y: GradedIndex) -> SparseElement:
    if spec.variant == "laurent":
        return _laurent_product(spec, name, x, y)
    return _indexed_product(spec, name, x, y)


# ---------------------------------------------------------------------------
# bilinear / linear extension


def family_product(spec: FamilySpec, name: str, x: SparseElement, y: SparseElement, _cache=None) -> SparseElement:
    """Bilinear extension of the named basis product."""
    if name not in spec.products:
        raise KeyError(f"{spec.variant} family has no product {name!r}")
    acc: dict = {}
    for gx, vx in x.items():
        for gy, vy in y.items():
            key = (name, gx, gy)
            if _cache is not None and key in _cache:
                p = _cache[key]
            else:
                p = _basis_product(spec, name, gx, gy)
                if _cache is not None:
                    _cache[key] = p
            for k, v in p.items():
                acc[k] = acc.get(k, 0) + vx * vy * v
    return SparseElement(acc)


def family_map(spec: FamilySpec, name: str, x: SparseElement, _cache=None) -> SparseElement:
    """Linear extension of the named basis map."""
    if name not in spec.maps:
        raise KeyError(f"{spec.variant} family has no map {name!r}")
    acc: dict = {}
    for g, v in x.items():
        key = (name, g)
        if _cache is not None and key in _cache:
            p = _cache[key]
        else:
            p = _basis_map(spec, name, g)
            if _cache is not None:
                _cache[key] = p
        for k, w in p.items():
            acc[k] = acc.get(k, 0) + v * w
    return SparseElement(acc)


def window_basis(spec: FamilySpec, window: tuple[int, int]) -> list[GradedIndex]:
    lo, hi = window
    if lo > hi:
        raise ValueError(f"empty window {window}")
    parities = (0, 1) if spec.variant == "laurent" else (0,)
    return [GradedIndex(g, p) for g in range(lo, hi + 1) for p in parities]


class _SparseOps:
    """Role bindings for the shared identity formulas."""

    def __init__(self, spec: FamilySpec, roles: dict, product: str | None):
        self.spec = spec
        self.roles = roles
        self._cache: dict = {}
        self._mul = roles.get(product) if product else roles.get("star", roles.get("dot"))

    def _p(self, name, x, y):
        if name is None:
            raise KeyError("no product bound for this identity")
        return family_product(self.spec, name, x, y, self._cache)

    def _m(self, role, x):
        name = self.roles.get(role)
        if name is None:
            raise KeyError(f"no map bound to role {role!r}")
        return family_map(self.spec, name, x, self._cache)

    def mul(self, x, y):
        return self._p(self._mul, x, y)

    def dot(self, x, y):
        return self._p(self.roles.get("dot"), x, y)

    def star(self, x, y):
        return self._p(self.roles.get("star"), x, y)

    def alpha(self, x):
        return self._m("alpha", x)

    def partial(self, x):
        return self._m("partial", x)

    def form(self, x, y):
        raise KeyError("families carry no bilinear form")


def _normalize_roles(roles: dict) -> dict:
    out = dict(roles)
    if "del" in out:
        out["partial"] = out.pop("del")
    return out


def window_verify(
    spec: FamilySpec,
    ident,
    roles: dict,
    window: tuple[int, int],
    product: str | None = None,
) -> Verdict:
    """Check ``ident`` on every basis tuple drawn from ``window``.

    ``roles`` binds identity roles (``dot``, ``star``, ``alpha``, ``del`` /
    ``partial``) to family product and map names.  Outputs may leave the
    window; they are computed in the full family.  The witness tuple holds
    :class:`GradedIndex` values and is the first failure in the window's
    (grade, parity) order.
    """
    ident = Identity(ident)
    roles = _normalize_roles(roles)
    info = CATALOG[ident]
    ops = _SparseOps(spec, roles, product)
    basis = window_basis(spec, window)
    elems = [SparseElement.basis(*g) for g in basis]
    fn = formula(ident)
    used = product or ("star" if "star" in roles else "dot")
    for idx in itertools.product(range(len(basis)), repeat=info.arity):
        lhs, rhs = fn(ops, *(elems[i] for i in idx))
        if lhs != rhs:
            tup = tuple(basis[i] for i in idx)
            return Verdict(False, Witness(ident.value, tup, lhs, rhs, used if "product" in info.roles else None))
    return Verdict(True)


def window_validate(spec: FamilySpec, kind: str, roles: dict, window: tuple[int, int]) -> Report:
    """Window analogue of :func:`homnovikov.identities.validate` (form-free kinds only)."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    entries = []
    for ident, role in KINDS[kind]:
        if ident == NONDEGENERATE or CATALOG[ident].scalar:
            raise ValueError(f"kind {kind!r} needs a bilinear form")
        prod = role if role not in (None, "product") else None
        v = window_verify(spec, ident, roles, window, prod)
        entries.append(ReportEntry(ident.value, prod or (None if role is None else "product"), v))
    return Report(kind, entries)


# ---------------------------------------------------------------------------
# finite embeddings


def _to_column(index: dict, elem: SparseElement, n: int):
    col = QQ.zeros(n)
    outside = []
    for g, v in elem.items():
        if g in index:
            col[index[g]] = v
        else:
            outside.append(g)
    return col, outside


def embed_window(spec: FamilySpec, roles: dict, window: tuple[int, int], quotient: bool = False) -> StructureBundle:
    """Finite-dimensional bundle whose structure constants agree with the family on ``window``.

    Without ``quotient`` every product and map must stay inside the window.
    With ``quotient=True`` components that leave the window are dropped,
    which is only allowed when the escaped basis vectors span a subspace that
    products and maps never send back into the window (checked on every
    escaped vector against the window basis).
    """
    roles = _normalize_roles(roles)
    basis = window_basis(spec, window)
    n = len(basis)
    index = {g: i for i, g in enumerate(basis)}
    elems = [SparseElement.basis(*g) for g in basis]
    cache: dict = {}
    escaped: set = set()

    def record(out, what):
        if out:
            if not quotient:
                raise NotClosedError(f"{what} leaves the window at {out[0].name(spec.variant)}")
            escaped.update(out)

    parts = {}
    for role in ("dot", "star"):
        name = roles.get(role)
        if name is None:
            continue
        c = QQ.zeros((n, n, n))
        for i, j in itertools.product(range(n), repeat=2):
            col, out = _to_column(index, family_product(spec, name, elems[i], elems[j], cache), n)
            record(out, f"{name}({basis[i].name(spec.variant)}, {basis[j].name(spec.variant)})")
            c[i, j] = col
        parts[role] = (name, Algebra(QQ, c, name))
    for role in ("alpha", "partial"):
        name = roles.get(role)
        if name is None:
            continue
        m = QQ.zeros((n, n))
        for j in range(n):
            col, out = _to_column(index, family_map(spec, name, elems[j], cache), n)
            record(out, f"{name}({basis[j].name(spec.variant)})")
            m[:, j] = col
        parts[role] = (name, LinearOperator(QQ, m, name))

    if escaped:
        _check_ideal(spec, parts, sorted(escaped), index, elems, cache)

    return StructureBundle(
        dot=parts.get("dot", (None, None))[1],
        star=parts.get("star", (None, None))[1],
        alpha=parts.get("alpha", (None, None))[1],
        partial=parts.get("partial", (None, None))[1],
        basis=tuple(g.name(spec.variant) for g in basis),
    )


def _check_ideal(spec, parts, escaped, index, elems, cache) -> None:
    for u in escaped:
        eu = SparseElement.basis(*u)
        images = []
        for role, (name, _) in parts.items():
            if role in ("dot", "star"):
                for e in elems:
                    images.append((f"{name}", family_product(spec, name, eu, e, cache)))
                    images.append((f"{name}", family_product(spec, name, e, eu, cache)))
            else:
                images.append((name, family_map(spec, name, eu, cache)))
        for what, img in images:
            back = [g for g in img.support if g in index]
            if back:
                raise NotClosedError(
                    f"quotient is not well defined: {what} sends escaped {u.name(spec.variant)} "
                    f"back to {back[0].name(spec.variant)}"
                )


__all__ = [
    "FamilySpec", "GradedIndex", "SparseElement", "embed_window", "family_map", "family_product",
    "window_basis", "window_validate", "window_verify",
]
