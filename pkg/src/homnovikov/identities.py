"""The identity catalog and the engine that checks it.

Every cataloged identity is multilinear, so it holds on the whole algebra
iff it holds on every tuple of basis vectors.  Two independent evaluation
routes live here:

* :func:`check_identity` builds, for each identity, the full tensor of both
  sides over all basis tuples with pairwise contractions and reports the
  lexicographically smallest failing tuple.
* :func:`random_sanity` evaluates the identity's textbook formula on batches
  of random vectors.  It never sees basis tuples, which makes it an oracle
  for the multilinearity reduction.

The formula table is also reused for sparse infinite-dimensional families
(:mod:`homnovikov.families`), which only need ``mul``/``alpha``/... callables
and ``+``/``-`` on their elements.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from . import linalg
from .core import StructureBundle
from .errors import MissingRoleError


class Identity(str, enum.Enum):
    RIGHT_COMMUTE = "right-commute"
    LEFT_SYMMETRY = "left-symmetry"
    COMMUTATIVITY = "commutativity"
    ASSOCIATIVITY = "associativity"
    HOM_ASSOCIATIVITY = "hom-associativity"
    HOM_RIGHT_COMMUTE = "hom-right-commute"
    HOM_LEFT_SYMMETRY = "hom-left-symmetry"
    SKEW_SYMMETRY = "skew-symmetry"
    HOM_JACOBI = "hom-jacobi"
    J1 = "j1"
    J2 = "j2"
    NP1 = "np-1"
    NP2 = "np-2"
    HOM_NP1 = "hom-np-1"
    HOM_NP2 = "hom-np-2"
    MORPHISM = "morphism"
    DERIVATION = "derivation"
    GD2 = "gd2"
    COMMUTE_MAPS = "commute-maps"
    FORM_ASSOC = "form-assoc"
    FORM_LIE_INVARIANCE = "form-lie-invariance"
    FORM_HOM_INVARIANCE = "form-hom-invariance"
    FORM_ALPHA_COMPAT = "form-alpha-compat"
    FORM_SYMMETRY = "form-symmetry"

    def __str__(self):
        return self.value


NONDEGENERATE = "nondegenerate"


# ---------------------------------------------------------------------------
# textbook formulas: f(ops, x, y, z) -> (lhs, rhs)


def _br(o, x, y):
    return o.mul(x, y) - o.mul(y, x)


_FORMULAS: dict[Identity, Callable] = {
    Identity.RIGHT_COMMUTE: lambda o, x, y, z: (o.mul(o.mul(x, y), z), o.mul(o.mul(x, z), y)),
    Identity.LEFT_SYMMETRY: lambda o, x, y, z: (
        o.mul(o.mul(x, y), z) - o.mul(x, o.mul(y, z)),
        o.mul(o.mul(y, x), z) - o.mul(y, o.mul(x, z)),
    ),
    Identity.COMMUTATIVITY: lambda o, x, y: (o.mul(x, y), o.mul(y, x)),
    Identity.ASSOCIATIVITY: lambda o, x, y, z: (o.mul(o.mul(x, y), z), o.mul(x, o.mul(y, z))),
    Identity.HOM_ASSOCIATIVITY: lambda o, x, y, z: (
        o.mul(o.alpha(x), o.mul(y, z)),
        o.mul(o.mul(x, y), o.alpha(z)),
    ),
    Identity.HOM_RIGHT_COMMUTE: lambda o, x, y, z: (
        o.mul(o.mul(x, y), o.alpha(z)),
        o.mul(o.mul(x, z), o.alpha(y)),
    ),
    Identity.HOM_LEFT_SYMMETRY: lambda o, x, y, z: (
        o.mul(o.mul(x, y), o.alpha(z)) - o.mul(o.alpha(x), o.mul(y, z)),
        o.mul(o.mul(y, x), o.alpha(z)) - o.mul(o.alpha(y), o.mul(x, z)),
    ),
    Identity.SKEW_SYMMETRY: lambda o, x, y: (o.mul(x, y), o.mul(y, x) * -1),
    Identity.HOM_JACOBI: lambda o, x, y, z: _zero_rhs(
        o.mul(o.mul(x, y), o.alpha(z)) + o.mul(o.mul(z, x), o.alpha(y)) + o.mul(o.mul(y, z), o.alpha(x))
    ),
    Identity.J1: lambda o, x, y, z: _zero_rhs(
        o.mul(_br(o, x, y), o.alpha(z)) + o.mul(_br(o, y, z), o.alpha(x)) + o.mul(_br(o, z, x), o.alpha(y))
    ),
    Identity.J2: lambda o, x, y, z: _zero_rhs(
        o.mul(o.alpha(x), _br(o, y, z)) + o.mul(o.alpha(y), _br(o, z, x)) + o.mul(o.alpha(z), _br(o, x, y))
    ),
    Identity.NP1: lambda o, x, y, z: (o.star(o.dot(x, y), z), o.dot(x, o.star(y, z))),
    Identity.NP2: lambda o, x, y, z: (
        o.dot(o.star(x, y), z) - o.star(x, o.dot(y, z)),
        o.dot(o.star(y, x), z) - o.star(y, o.dot(x, z)),
    ),
    Identity.HOM_NP1: lambda o, x, y, z: (o.star(o.dot(x, y), o.alpha(z)), o.dot(o.alpha(x), o.star(y, z))),
    Identity.HOM_NP2: lambda o, x, y, z: (
        o.dot(o.star(x, y), o.alpha(z)) - o.star(o.alpha(x), o.dot(y, z)),
        o.dot(o.star(y, x), o.alpha(z)) - o.star(o.alpha(y), o.dot(x, z)),
    ),
    Identity.MORPHISM: lambda o, x, y: (o.alpha(o.mul(x, y)), o.mul(o.alpha(x), o.alpha(y))),
    Identity.DERIVATION: lambda o, x, y: (
        o.partial(o.mul(x, y)),
        o.mul(o.partial(x), y) + o.mul(x, o.partial(y)),
    ),
    Identity.GD2: lambda o, x, y: (o.partial(o.mul(x, o.partial(y))), o.mul(o.partial(x), o.partial(y))),
    Identity.COMMUTE_MAPS: lambda o, x: (o.partial(o.alpha(x)), o.alpha(o.partial(x))),
    Identity.FORM_ASSOC: lambda o, x, y, z: (o.form(o.mul(x, y), z), o.form(x, o.mul(y, z))),
    Identity.FORM_LIE_INVARIANCE: lambda o, x, y, z: (o.form(o.mul(x, y), z), o.form(x, o.mul(y, z))),
    Identity.FORM_HOM_INVARIANCE: lambda o, x, y, z: (
        o.form(o.mul(x, y), o.alpha(z)),
        o.form(o.alpha(x), o.mul(y, z)),
    ),
    Identity.FORM_ALPHA_COMPAT: lambda o, x, y: (o.form(o.alpha(x), y), o.form(x, o.alpha(y))),
    Identity.FORM_SYMMETRY: lambda o, x, y: (o.form(x, y), o.form(y, x)),
}


def _zero_rhs(lhs):
    return lhs, lhs - lhs


class IdentityInfo(NamedTuple):
    arity: int
    roles: frozenset
    scalar: bool


def _info(ident: Identity) -> IdentityInfo:
    name = ident.value
    roles = set()
    if ident in (Identity.NP1, Identity.NP2, Identity.HOM_NP1, Identity.HOM_NP2):
        roles |= {"dot", "star"}
    elif ident is not Identity.COMMUTE_MAPS and ident is not Identity.FORM_SYMMETRY:
        roles.add("product")
    if name.startswith("hom-") or ident in (
        Identity.J1, Identity.J2, Identity.MORPHISM, Identity.COMMUTE_MAPS,
        Identity.FORM_HOM_INVARIANCE, Identity.FORM_ALPHA_COMPAT,
    ):
        roles.add("alpha")
    if ident in (Identity.DERIVATION, Identity.GD2, Identity.COMMUTE_MAPS):
        roles.add("partial")
    if name.startswith("form-"):
        roles.add("form")
    if ident is Identity.FORM_ALPHA_COMPAT:
        roles.discard("product")
    arity = _FORMULAS[ident].__code__.co_argcount - 1
    return IdentityInfo(arity, frozenset(roles), name.startswith("form-"))


CATALOG: dict[Identity, IdentityInfo] = {ident: _info(ident) for ident in Identity}


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Witness:
    identity: str
    tuple: tuple | None
    lhs: object
    rhs: object
    role: str | None = None
    args: list | None = None


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Witness | None = None

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class ReportEntry:
    check: str
    role: str | None
    verdict: Verdict


@dataclass(frozen=True)
class Report:
    kind: str
    entries: list[ReportEntry] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.verdict.holds for e in self.entries)

    def __bool__(self):
        return self.passed

    def failures(self) -> list[ReportEntry]:
        return [e for e in self.entries if not e.verdict.holds]

    def summary(self) -> str:
        lines = [f"{self.kind}: {'pass' if self.passed else 'FAIL'}"]
        for e in self.entries:
            tag = e.check if e.role in (None, "product") else f"{e.check}[{e.role}]"
            mark = "ok" if e.verdict.holds else f"fails at {e.verdict.witness.tuple}"
            lines.append(f"  {tag}: {mark}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# basis-tuple route


def _resolve(bundle: StructureBundle, ident: Identity, product: str | None):
    """Pull the roles ``ident`` reads; returns them and the product role used."""
    info = CATALOG[ident]
    got = {}
    used = None
    for role in info.roles:
        if role == "product":
            used = product or ("star" if bundle.star is not None else "dot")
            got["product"] = bundle.get(used)
        else:
            got[role] = bundle.get(role)
    return got, used


class _BasisTensors:
    """Pairwise contractions producing outer-batched basis evaluations."""

    def __init__(self, field, n):
        self.f = field
        self.n = n
        self.E = field.eye(n)

    def mul(self, c, U, V):
        f = self.f
        T = f.reduce(np.tensordot(U, c, axes=([U.ndim - 1], [0])))
        R = f.reduce(np.tensordot(T, V, axes=([T.ndim - 2], [V.ndim - 1])))
        return np.moveaxis(R, U.ndim - 1, -1)

    def app(self, T, m):
        return self.f.reduce(T @ m.T)

    def rows(self, m):
        return np.ascontiguousarray(m.T)

    def form(self, b, U, V):
        f = self.f
        T = f.reduce(np.tensordot(U, b, axes=([U.ndim - 1], [0])))
        return f.reduce(np.tensordot(T, V, axes=([T.ndim - 1], [V.ndim - 1])))


def _perm(T, src: str):
    """``out[i, j, k, ...] = T[<src order>]`` e.g. ``src='kij'``."""
    return np.einsum(f"{src}...->ijk...", T)


def _basis_sides(bundle, ident: Identity, got: dict):
    n = bundle.dim
    t = _BasisTensors(bundle.field, n)
    E = t.E
    c = got["product"].c if "product" in got else None
    A = t.rows(got["alpha"].m) if "alpha" in got else None
    I = Identity

    if ident is I.RIGHT_COMMUTE:
        L = t.mul(c, t.mul(c, E, E), E)
        return L, _perm(L, "ikj")
    if ident is I.LEFT_SYMMETRY:
        a = t.mul(c, t.mul(c, E, E), E) - t.mul(c, E, t.mul(c, E, E))
        return a, _perm(a, "jik")
    if ident is I.COMMUTATIVITY:
        P = t.mul(c, E, E)
        return P, P.transpose(1, 0, 2)
    if ident is I.SKEW_SYMMETRY:
        P = t.mul(c, E, E)
        return P, -P.transpose(1, 0, 2)
    if ident is I.ASSOCIATIVITY:
        return t.mul(c, t.mul(c, E, E), E), t.mul(c, E, t.mul(c, E, E))
    if ident is I.HOM_ASSOCIATIVITY:
        return t.mul(c, A, t.mul(c, E, E)), t.mul(c, t.mul(c, E, E), A)
    if ident is I.HOM_RIGHT_COMMUTE:
        L = t.mul(c, t.mul(c, E, E), A)
        return L, _perm(L, "ikj")
    if ident is I.HOM_LEFT_SYMMETRY:
        a = t.mul(c, t.mul(c, E, E), A) - t.mul(c, A, t.mul(c, E, E))
        return a, _perm(a, "jik")
    if ident is I.HOM_JACOBI:
        J = t.mul(c, t.mul(c, E, E), A)
        s = J + _perm(J, "kij") + _perm(J, "jki")
        return s, np.zeros_like(s)
    if ident in (I.J1, I.J2):
        P = t.mul(c, E, E)
        Br = P - P.transpose(1, 0, 2)
        K = t.mul(c, Br, A) if ident is I.J1 else t.mul(c, A, Br)
        s = K + _perm(K, "jki") + _perm(K, "kij")
        return s, np.zeros_like(s)
    if ident in (I.NP1, I.NP2, I.HOM_NP1, I.HOM_NP2):
        d, s = got["dot"].c, got["star"].c
        if ident is I.NP1:
            return t.mul(s, t.mul(d, E, E), E), t.mul(d, E, t.mul(s, E, E))
        if ident is I.HOM_NP1:
            return t.mul(s, t.mul(d, E, E), A), t.mul(d, A, t.mul(s, E, E))
        Z = E if ident is I.NP2 else A
        a = t.mul(d, t.mul(s, E, E), Z) - t.mul(s, Z, t.mul(d, E, E))
        return a, _perm(a, "jik")
    if ident is I.MORPHISM:
        return t.app(t.mul(c, E, E), got["alpha"].m), t.mul(c, A, A)
    if ident is I.DERIVATION:
        dm = got["partial"].m
        D = t.rows(dm)
        return t.app(t.mul(c, E, E), dm), t.mul(c, D, E) + t.mul(c, E, D)
    if ident is I.GD2:
        dm = got["partial"].m
        D = t.rows(dm)
        return t.app(t.mul(c, E, D), dm), t.mul(c, D, D)
    if ident is I.COMMUTE_MAPS:
        am, dm = got["alpha"].m, got["partial"].m
        return t.rows(t.f.matmul(dm, am)), t.rows(t.f.matmul(am, dm))
    b = got["form"].b if "form" in got else None
    if ident in (I.FORM_ASSOC, I.FORM_LIE_INVARIANCE):
        P = t.mul(c, E, E)
        return t.form(b, P, E), t.form(b, E, P)
    if ident is I.FORM_HOM_INVARIANCE:
        P = t.mul(c, E, E)
        return t.form(b, P, A), t.form(b, A, P)
    if ident is I.FORM_ALPHA_COMPAT:
        return t.form(b, A, E), t.form(b, E, A)
    if ident is I.FORM_SYMMETRY:
        return np.array(b), np.array(b).T
    raise KeyError(ident)


def _scalar_out(field, x):
    return field(int(x)) if field.p is not None else Fraction(x)


def _out(field, value, scalar: bool):
    if scalar:
        return _scalar_out(field, value)
    return [_scalar_out(field, v) for v in value]


def check_identity(bundle: StructureBundle, ident: Identity | str, product: str | None = None) -> Verdict:
    """Verify ``ident`` on every basis tuple; witness is the lexicographically smallest failure."""
    ident = Identity(ident)
    info = CATALOG[ident]
    got, used = _resolve(bundle, ident, product)
    if bundle.dim == 0:
        return Verdict(True)
    f = bundle.field
    lhs, rhs = _basis_sides(bundle, ident, got)
    lhs, rhs = f.reduce(lhs), f.reduce(rhs)
    neq = np.asarray(lhs != rhs, dtype=bool)
    if not info.scalar:
        neq = neq.any(axis=-1)
    bad = np.argwhere(neq)
    if len(bad) == 0:
        return Verdict(True)
    idx = tuple(int(i) for i in bad[0])
    return Verdict(False, Witness(ident.value, idx, _out(f, lhs[idx], info.scalar), _out(f, rhs[idx], info.scalar), used))


# ---------------------------------------------------------------------------
# random-vector route


class _VectorOps:
    """Batched textbook operations on arrays of shape ``(trials, n)``."""

    def __init__(self, field, got: dict, bundle: StructureBundle):
        self.f = field
        self._got = got
        self._bundle = bundle

    def _product(self, c, x, y):
        f = self.f
        xy = f.reduce(np.einsum("tr,rsl->tsl", f.reduce(x), c))
        return f.reduce(np.einsum("tsl,ts->tl", xy, f.reduce(y)))

    def mul(self, x, y):
        return self._product(self._got["product"].c, x, y)

    def dot(self, x, y):
        return self._product(self._bundle.get("dot").c, x, y)

    def star(self, x, y):
        return self._product(self._bundle.get("star").c, x, y)

    def alpha(self, x):
        return self.f.reduce(self.f.reduce(x) @ self._got["alpha"].m.T)

    def partial(self, x):
        return self.f.reduce(self.f.reduce(x) @ self._got["partial"].m.T)

    def form(self, x, y):
        f = self.f
        return f.reduce(np.einsum("ts,ts->t", f.reduce(f.reduce(x) @ self._got["form"].b), f.reduce(y)))


def _random_vectors(field, rng: np.random.Generator, shape):
    if field.p is not None:
        return rng.integers(0, field.p, size=shape, dtype=np.int64)
    nums = rng.integers(-5, 6, size=shape)
    dens = rng.integers(1, 4, size=shape)
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        out[idx] = Fraction(int(nums[idx]), int(dens[idx]))
    return out


def random_sanity(
    bundle: StructureBundle,
    ident: Identity | str,
    trials: int = 100,
    seed: int = 0,
    product: str | None = None,
) -> Verdict:
    """Evaluate ``ident`` on seeded random vectors (no basis tuples involved)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ident = Identity(ident)
    info = CATALOG[ident]
    got, used = _resolve(bundle, ident, product)
    f = bundle.field
    n = bundle.dim
    if n == 0:
        return Verdict(True)
    rng = np.random.default_rng(seed)
    args = [_random_vectors(f, rng, (trials, n)) for _ in range(info.arity)]
    ops = _VectorOps(f, got, bundle)
    lhs, rhs = _FORMULAS[ident](ops, *args)
    lhs, rhs = f.reduce(lhs), f.reduce(rhs)
    neq = np.asarray(lhs != rhs, dtype=bool)
    if not info.scalar:
        neq = neq.any(axis=-1)
    bad = np.flatnonzero(neq)
    if len(bad) == 0:
        return Verdict(True)
    t = int(bad[0])
    vecs = [[_scalar_out(f, v) for v in a[t]] for a in args]
    return Verdict(
        False,
        Witness(ident.value, None, _out(f, lhs[t], info.scalar), _out(f, rhs[t], info.scalar), used, vecs),
    )


def formula(ident: Identity | str) -> Callable:
    """The textbook formula ``f(ops, *args) -> (lhs, rhs)`` for ``ident``."""
    return _FORMULAS[Identity(ident)]


# ---------------------------------------------------------------------------
# validators

I = Identity
_HOM_NOVIKOV = [(I.MORPHISM, "product"), (I.HOM_RIGHT_COMMUTE, "product"), (I.HOM_LEFT_SYMMETRY, "product")]
_HOM_LIE = [(I.SKEW_SYMMETRY, "product"), (I.HOM_JACOBI, "product")]

KINDS: dict[str, list] = {
    "novikov": [(I.RIGHT_COMMUTE, "product"), (I.LEFT_SYMMETRY, "product")],
    "left-symmetric": [(I.LEFT_SYMMETRY, "product")],
    "commutative-associative": [(I.COMMUTATIVITY, "product"), (I.ASSOCIATIVITY, "product")],
    "hom-associative-commutative": [(I.COMMUTATIVITY, "product"), (I.HOM_ASSOCIATIVITY, "product")],
    "hom-lie": _HOM_LIE,
    "hom-novikov": _HOM_NOVIKOV,
    "novikov-poisson": [
        (I.COMMUTATIVITY, "dot"), (I.ASSOCIATIVITY, "dot"),
        (I.RIGHT_COMMUTE, "star"), (I.LEFT_SYMMETRY, "star"),
        (I.NP1, None), (I.NP2, None),
    ],
    "hom-novikov-poisson": [
        (I.COMMUTATIVITY, "dot"), (I.HOM_ASSOCIATIVITY, "dot"), (I.MORPHISM, "dot"),
        (I.MORPHISM, "star"), (I.HOM_RIGHT_COMMUTE, "star"), (I.HOM_LEFT_SYMMETRY, "star"),
        (I.HOM_NP1, None), (I.HOM_NP2, None),
    ],
    "quadratic-novikov": [
        (I.RIGHT_COMMUTE, "product"), (I.LEFT_SYMMETRY, "product"),
        (I.FORM_SYMMETRY, None), (NONDEGENERATE, None), (I.FORM_ASSOC, "product"),
    ],
    "quadratic-hom-novikov": _HOM_NOVIKOV + [
        (I.FORM_SYMMETRY, None), (NONDEGENERATE, None), (I.FORM_HOM_INVARIANCE, "product"),
    ],
    "quadratic-hom-lie": _HOM_LIE + [
        (I.FORM_SYMMETRY, None), (NONDEGENERATE, None),
        (I.FORM_LIE_INVARIANCE, "product"), (I.FORM_ALPHA_COMPAT, None),
    ],
}
del I

_KIND_ROLES = {
    "novikov": set(), "left-symmetric": set(), "commutative-associative": set(),
    "hom-associative-commutative": {"alpha"}, "hom-lie": {"alpha"}, "hom-novikov": {"alpha"},
    "novikov-poisson": {"dot", "star"}, "hom-novikov-poisson": {"dot", "star", "alpha"},
    "quadratic-novikov": {"form"}, "quadratic-hom-novikov": {"alpha", "form"},
    "quadratic-hom-lie": {"alpha", "form"},
}


def nondegenerate_verdict(bundle: StructureBundle) -> Verdict:
    form = bundle.get("form")
    d = linalg.det(form.field, form.b)
    if d != 0:
        return Verdict(True)
    return Verdict(False, Witness(NONDEGENERATE, (), _scalar_out(form.field, d), None))


def validate(bundle: StructureBundle, kind: str, require_morphism: bool = True, product: str | None = None) -> Report:
    """Run the axiom suite for ``kind``; ``require_morphism=False`` drops the
    twist-is-a-homomorphism checks for exploratory inputs."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; choose from {sorted(KINDS)}")
    for role in _KIND_ROLES[kind]:
        bundle.get(role)
    entries = []
    for ident, role in KINDS[kind]:
        if ident == NONDEGENERATE:
            entries.append(ReportEntry(NONDEGENERATE, None, nondegenerate_verdict(bundle)))
            continue
        if ident is Identity.MORPHISM and not require_morphism:
            continue
        prod = product if role == "product" else role
        entries.append(ReportEntry(ident.value, prod if role else None, check_identity(bundle, ident, prod)))
    return Report(kind, entries)


def identity_from_text(text: str) -> Identity:
    try:
        return Identity(text)
    except ValueError:
        raise MissingRoleError(f"unknown identity {text!r}") from None


__all__ = [
    "CATALOG", "Identity", "IdentityInfo", "KINDS", "NONDEGENERATE", "Report", "ReportEntry",
    "Verdict", "Witness", "check_identity", "formula", "random_sanity", "validate",
]
